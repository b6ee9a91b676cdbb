#include <array>
#include <cstdio>
#include <fstream>
#include <memory>

#include "commands.hpp"
#include "run_config.hpp"

#include "kore/augment/augment.hpp"

namespace korecli {

namespace {

struct AugmentArgs {
  std::string knowledge;
  std::string out;
  std::string config;
  std::string stub_dir;
  std::string llm_url;
  std::string llm_model = "gpt-4o";
  std::uint64_t seed = 0;
  bool pinned_templates = false;
};

void run(const AugmentArgs& args) {
  const std::vector<kore::KnowledgeItem> items = kore::load_knowledge(args.knowledge);

  std::unique_ptr<kore::GenClient> client;
  if (!args.stub_dir.empty()) {
    client = std::make_unique<kore::StubDirClient>(args.stub_dir);
  } else if (!args.llm_url.empty()) {
    client = std::make_unique<kore::HttpGenClient>(args.llm_url, args.llm_model);
  } else {
    throw kore::ContractError("augment: one of --stub-dir or --llm-url is required");
  }

  kore::AugmentOptions opt;
  opt.seed = args.seed;
  opt.templates = !args.pinned_templates;

  kore::PipelineLog log;
  const auto samples = kore::augment_corpus(items, *client, opt, &log);
  const std::size_t written = kore::emit_dataset(samples, args.out);

  const std::filesystem::path out_path(args.out);
  const std::filesystem::path out_dir =
      out_path.has_parent_path() ? out_path.parent_path() : std::filesystem::path(".");

  {
    std::ofstream log_out(out_dir / "augment_log.jsonl", std::ios::binary);
    for (const auto& entry : log.entries) {
      nlohmann::ordered_json line;
      line["item_id"] = entry.item_id;
      line["stage"] = entry.stage;
      line["reason"] = entry.reason;
      log_out << line.dump() << "\n";
    }
  }

  nlohmann::ordered_json effective;
  effective["command"] = "augment";
  effective["seed"] = args.seed;
  effective["knowledge"] = args.knowledge;
  effective["out"] = args.out;
  effective["stub_dir"] = args.stub_dir;
  effective["llm_url"] = args.llm_url;
  effective["templates"] = opt.templates;
  write_run_config(out_dir, effective);

  std::array<std::size_t, 4> counts{};
  for (const auto& s : samples) counts[static_cast<std::size_t>(s.task)]++;
  std::printf(
      "augmented %zu item(s) -> %zu sample(s) "
      "(dialogue %zu, recognition %zu, caption %zu, vqa %zu), %zu log entr%s -> %s\n",
      items.size(), written, counts[0], counts[1], counts[2], counts[3],
      log.entries.size(), log.entries.size() == 1 ? "y" : "ies", args.out.c_str());
}

}  // namespace

void register_augment(CLI::App& app) {
  auto args = std::make_shared<AugmentArgs>();
  CLI::App* cmd = app.add_subcommand(
      "augment", "Build dialogue/recognition/caption/VQA samples from knowledge items");
  auto* knowledge = cmd->add_option("--knowledge", args->knowledge, "knowledge.jsonl input");
  auto* out = cmd->add_option("--out", args->out, "Output dataset JSONL path");
  auto* seed = cmd->add_option("--seed", args->seed, "Template/prompt selection seed");
  auto* stub = cmd->add_option("--stub-dir", args->stub_dir,
                               "Canned client responses keyed by request hash");
  auto* url = cmd->add_option("--llm-url", args->llm_url,
                              "Live chat-completion base URL (key: KORE_LLM_API_KEY)");
  auto* model = cmd->add_option("--llm-model", args->llm_model, "Live model name");
  auto* pinned = cmd->add_flag("--pinned-templates", args->pinned_templates,
                               "Pin every template draw to the first bank entry");
  cmd->add_option("--config", args->config, "JSON run configuration");

  cmd->callback([args, knowledge, out, seed, stub, url, model, pinned]() {
    const Config cfg = Config::load_optional(args->config);
    cfg.apply(knowledge, args->knowledge, {{"augment", "knowledge"}, {"data"}});
    cfg.apply(out, args->out, {{"out"}});
    cfg.apply(seed, args->seed, {{"seed"}});
    cfg.apply(stub, args->stub_dir, {{"augment", "stub_dir"}});
    cfg.apply(url, args->llm_url, {{"augment", "llm_url"}});
    cfg.apply(model, args->llm_model, {{"augment", "llm_model"}});
    if (const nlohmann::json* v = cfg.find({"augment", "templates"});
        v != nullptr && pinned->count() == 0) {
      args->pinned_templates = !v->get<bool>();
    }
    if (args->knowledge.empty() || args->out.empty()) {
      throw CLI::RequiredError("augment requires --knowledge and --out");
    }
    run(*args);
  });
}

}  // namespace korecli
