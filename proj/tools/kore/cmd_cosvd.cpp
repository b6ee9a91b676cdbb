#include <cstdio>
#include <fstream>
#include <memory>

#include "commands.hpp"
#include "run_config.hpp"

#include "kore/cosvd.hpp"
#include "kore/dataset.hpp"

namespace korecli {

namespace {

struct CosvdArgs {
  std::string checkpoint;
  std::string cov_dir;
  std::string out;
  std::string config;
  std::string k_csv = "1,2,4,8";
  std::string methods_csv = "plain,asvd,cosvd";
  std::string loss = "mse";
  std::string cov_set;
  double alpha = 0.5;
  double ridge_factor = kore::kDefaultRidgeFactor;
  std::uint64_t seed = 0;
  std::vector<std::string> eval_specs;  // name=path
};

void run(const CosvdArgs& args) {
  const kore::ToyModel model = kore::load_checkpoint(args.checkpoint);
  const auto covs = kore::load_accumulator_dir(args.cov_dir);

  kore::RetentionConfig rc;
  rc.ks = parse_size_list(args.k_csv);
  for (const auto& name : parse_name_list(args.methods_csv)) {
    rc.methods.push_back(kore::trunc_method_from_name(name));
  }
  rc.alpha = args.alpha;
  rc.ridge_factor = args.ridge_factor;
  rc.loss = kore::loss_from_name(args.loss);
  if (rc.ks.empty() || rc.methods.empty()) {
    throw kore::ContractError("cosvd: --k and --methods must be non-empty");
  }

  const std::filesystem::path out_path(args.out);
  const std::filesystem::path out_dir =
      out_path.has_parent_path() ? out_path.parent_path() : std::filesystem::path(".");
  std::filesystem::create_directories(out_dir);

  nlohmann::ordered_json report;
  report["k"] = rc.ks;
  report["methods"] = parse_name_list(args.methods_csv);
  report["alpha"] = rc.alpha;
  report["ridge_factor"] = rc.ridge_factor;
  report["layers"] = nlohmann::ordered_json::array();

  for (const auto& layer : model.layers) {
    const auto cov_it = covs.find(layer.layer_id);
    if (cov_it == covs.end()) {
      throw kore::Error("cosvd: no covariance for layer " + layer.layer_id);
    }
    const kore::CovAccumulator& acc = cov_it->second;
    const kore::Matrix w_eff = layer.effective_weight();
    const double ridge = kore::default_ridge(acc, rc.ridge_factor);

    nlohmann::ordered_json layer_json;
    layer_json["layer_id"] = layer.layer_id;
    layer_json["results"] = nlohmann::ordered_json::array();
    for (const kore::TruncMethod method : rc.methods) {
      for (const std::size_t k : rc.ks) {
        kore::TruncationResult res;
        switch (method) {
          case kore::TruncMethod::plain:
            res = kore::plain_truncate(w_eff, k);
            break;
          case kore::TruncMethod::asvd: {
            const kore::Matrix norm = acc.normalized();
            std::vector<double> scale(acc.dim);
            for (std::size_t i = 0; i < acc.dim; ++i) {
              scale[i] = std::sqrt(norm(i, i) + ridge);
            }
            res = kore::asvd_truncate(w_eff, scale, k, rc.alpha);
            break;
          }
          case kore::TruncMethod::cosvd:
            res = kore::cosvd_truncate(w_eff, acc, k, ridge);
            break;
        }
        layer_json["results"].push_back({
            {"method", kore::trunc_method_name(method)},
            {"k", k},
            {"recon_err", res.recon_err},
            {"weighted_err", res.weighted_err},
        });
      }
    }
    report["layers"].push_back(std::move(layer_json));

    kore::write_heatmap_csv(kore::covariance_heatmap(acc.c),
                            out_dir / (layer.layer_id + ".heat.csv"));
  }

  if (!args.eval_specs.empty()) {
    std::vector<kore::EvalSet> sets;
    for (const auto& spec : args.eval_specs) {
      const std::size_t eq = spec.find('=');
      if (eq == std::string::npos) {
        throw kore::ContractError("cosvd: --eval expects NAME=FILE, got " + spec);
      }
      sets.push_back(kore::EvalSet{spec.substr(0, eq),
                                   kore::load_dataset(spec.substr(eq + 1))});
    }
    rc.covariance_set = args.cov_set.empty() ? sets.front().name : args.cov_set;
    const kore::RetentionReport rr = kore::retention_report(model, covs, rc, sets);

    nlohmann::ordered_json retention;
    retention["covariance_set"] = rc.covariance_set;
    retention["entries"] = nlohmann::ordered_json::array();
    for (const auto& e : rr.entries) {
      retention["entries"].push_back({{"method", kore::trunc_method_name(e.method)},
                                      {"k", e.k},
                                      {"set", e.set},
                                      {"loss", e.loss}});
    }
    retention["cosvd_beats_plain_at_max_k"] = rr.cosvd_beats_plain_at_max_k;
    report["retention"] = std::move(retention);
  }

  {
    std::ofstream out(out_path);
    if (!out) throw kore::Error("cannot write report: " + args.out);
    out << report.dump(2) << "\n";
  }

  nlohmann::ordered_json effective;
  effective["command"] = "cosvd";
  effective["seed"] = args.seed;
  effective["checkpoint"] = args.checkpoint;
  effective["cov_dir"] = args.cov_dir;
  effective["k"] = rc.ks;
  effective["methods"] = parse_name_list(args.methods_csv);
  effective["alpha"] = rc.alpha;
  effective["ridge_factor"] = rc.ridge_factor;
  effective["out"] = args.out;
  write_run_config(out_dir, effective);

  std::printf("cosvd report for %zu layer(s) -> %s\n", model.layers.size(), args.out.c_str());
}

}  // namespace

void register_cosvd(CLI::App& app) {
  auto args = std::make_shared<CosvdArgs>();
  CLI::App* cmd = app.add_subcommand(
      "cosvd", "Knowledge-capture truncation study (plain / asvd / cosvd)");
  auto* checkpoint = cmd->add_option("--checkpoint", args->checkpoint, "Checkpoint directory");
  auto* cov_dir = cmd->add_option("--cov-dir", args->cov_dir, "Covariance directory");
  auto* k = cmd->add_option("--k", args->k_csv, "Comma-separated discard counts");
  auto* methods = cmd->add_option("--methods", args->methods_csv, "Comma-separated methods");
  auto* out = cmd->add_option("--out", args->out, "Report JSON path");
  auto* alpha = cmd->add_option("--alpha", args->alpha, "ASVD scaling exponent");
  auto* ridge = cmd->add_option("--ridge-factor", args->ridge_factor,
                                "Ridge factor for the covariance inverse");
  auto* loss = cmd->add_option("--loss", args->loss, "Retention loss: mse or softmax_xent");
  auto* cov_set = cmd->add_option("--cov-set", args->cov_set,
                                  "Eval set whose data produced the covariance");
  cmd->add_option("--eval", args->eval_specs, "Retention eval set NAME=FILE (repeatable)");
  auto* seed = cmd->add_option("--seed", args->seed, "Run seed (recorded; study is deterministic)");
  cmd->add_option("--config", args->config, "JSON run configuration");

  cmd->callback([args, checkpoint, cov_dir, k, methods, out, alpha, ridge, loss, cov_set,
                 seed]() {
    const Config cfg = Config::load_optional(args->config);
    cfg.apply(checkpoint, args->checkpoint, {{"checkpoint"}});
    cfg.apply(cov_dir, args->cov_dir, {{"cov_dir"}});
    cfg.apply(k, args->k_csv, {{"cosvd", "k"}});
    cfg.apply(methods, args->methods_csv, {{"cosvd", "methods"}});
    cfg.apply(out, args->out, {{"out"}});
    cfg.apply(alpha, args->alpha, {{"cosvd", "alpha"}});
    cfg.apply(ridge, args->ridge_factor, {{"cosvd", "ridge_factor"}});
    cfg.apply(loss, args->loss, {{"cosvd", "loss"}});
    cfg.apply(cov_set, args->cov_set, {{"cosvd", "covariance_set"}});
    cfg.apply(seed, args->seed, {{"seed"}});
    if (args->checkpoint.empty() || args->cov_dir.empty() || args->out.empty()) {
      throw CLI::RequiredError("cosvd requires --checkpoint, --cov-dir and --out");
    }
    run(*args);
  });
}

}  // namespace korecli
