#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <vector>

#include "commands.hpp"
#include "run_config.hpp"

#include "kore/errors.hpp"
#include "kore/metrics.hpp"

namespace korecli {

namespace {

struct EvalArgs {
  std::string pred;
  std::string gold;
  std::string out;
  std::string config;
  std::uint64_t seed = 0;
  bool raw = false;
};

std::vector<std::pair<std::string, std::string>> load_id_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw kore::Error("eval: cannot open " + path);
  std::vector<std::pair<std::string, std::string>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const nlohmann::json j = nlohmann::json::parse(line);
      rows.emplace_back(j.at("id").get<std::string>(), j.at("text").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      throw kore::FormatError(path + " line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return rows;
}

double round2(double v) { return std::round(v * 100.0) / 100.0; }

void run(const EvalArgs& args) {
  const auto preds = load_id_text(args.pred);
  const auto golds = load_id_text(args.gold);

  std::map<std::string, std::string> pred_by_id(preds.begin(), preds.end());
  std::vector<std::pair<std::string, std::string>> pairs;
  pairs.reserve(golds.size());
  for (const auto& [id, gold_text] : golds) {
    const auto it = pred_by_id.find(id);
    if (it == pred_by_id.end()) {
      throw kore::Error("eval: no prediction for id " + id);
    }
    pairs.emplace_back(it->second, gold_text);
  }

  const kore::AggregateMetrics agg = kore::evaluate(pairs, args.raw);

  const std::filesystem::path out_path(args.out);
  const std::filesystem::path out_dir =
      out_path.has_parent_path() ? out_path.parent_path() : std::filesystem::path(".");
  std::filesystem::create_directories(out_dir);
  {
    nlohmann::ordered_json metrics;
    metrics["count"] = agg.count;
    metrics["cem"] = round2(agg.cem_pct);
    metrics["f1"] = round2(agg.f1_pct);
    std::ofstream out(out_path);
    if (!out) throw kore::Error("eval: cannot write " + args.out);
    out << metrics.dump(2) << "\n";
  }

  nlohmann::ordered_json effective;
  effective["command"] = "eval";
  effective["seed"] = args.seed;
  effective["pred"] = args.pred;
  effective["gold"] = args.gold;
  effective["raw"] = args.raw;
  effective["out"] = args.out;
  write_run_config(out_dir, effective);

  std::printf("evaluated %zu pair(s): CEM %.2f, F1 %.2f -> %s\n", agg.count,
              round2(agg.cem_pct), round2(agg.f1_pct), args.out.c_str());
}

}  // namespace

void register_eval(CLI::App& app) {
  auto args = std::make_shared<EvalArgs>();
  CLI::App* cmd = app.add_subcommand("eval", "Cover Exact Match and token F1 over QA pairs");
  auto* pred = cmd->add_option("--pred", args->pred, "Predictions JSONL {id, text}");
  auto* gold = cmd->add_option("--gold", args->gold, "Gold answers JSONL {id, text}");
  auto* out = cmd->add_option("--out", args->out, "metrics.json path");
  auto* raw = cmd->add_flag("--raw", args->raw, "Strict literal matching, no normalization");
  auto* seed = cmd->add_option("--seed", args->seed, "Run seed (recorded; eval is deterministic)");
  cmd->add_option("--config", args->config, "JSON run configuration");

  cmd->callback([args, pred, gold, out, raw, seed]() {
    const Config cfg = Config::load_optional(args->config);
    cfg.apply(pred, args->pred, {{"eval", "pred"}});
    cfg.apply(gold, args->gold, {{"eval", "gold"}});
    cfg.apply(out, args->out, {{"out"}});
    cfg.apply(raw, args->raw, {{"eval", "raw"}});
    cfg.apply(seed, args->seed, {{"seed"}});
    if (args->pred.empty() || args->gold.empty() || args->out.empty()) {
      throw CLI::RequiredError("eval requires --pred, --gold and --out");
    }
    run(*args);
  });
}

}  // namespace korecli
