#include <cstdio>
#include <memory>

#include "commands.hpp"
#include "run_config.hpp"

#include "kore/covariance.hpp"
#include "kore/dataset.hpp"

namespace korecli {

namespace {

struct CaptureArgs {
  std::string checkpoint;
  std::string data;
  std::string out;
  std::string config;
  std::uint64_t seed = 0;
};

void run(const CaptureArgs& args) {
  const kore::ToyModel model = kore::load_checkpoint(args.checkpoint);
  const std::vector<kore::Matrix> inputs = kore::load_inputs(args.data);
  const auto accs = kore::capture(model, inputs);

  for (const auto& [layer_id, acc] : accs) {
    kore::save_accumulator(acc, args.out);
  }

  nlohmann::ordered_json effective;
  effective["command"] = "capture";
  effective["seed"] = args.seed;
  effective["checkpoint"] = args.checkpoint;
  effective["data"] = args.data;
  effective["out"] = args.out;
  write_run_config(args.out, effective);

  std::uint64_t tokens = accs.empty() ? 0 : accs.begin()->second.tokens;
  std::printf("captured %zu layer(s), %llu activation columns each -> %s\n", accs.size(),
              static_cast<unsigned long long>(tokens), args.out.c_str());
}

}  // namespace

void register_capture(CLI::App& app) {
  auto args = std::make_shared<CaptureArgs>();
  CLI::App* cmd =
      app.add_subcommand("capture", "Capture per-layer activation covariance accumulators");
  auto* checkpoint = cmd->add_option("--checkpoint", args->checkpoint, "Model checkpoint directory");
  auto* data = cmd->add_option("--data", args->data, "Dataset JSONL with input matrices");
  auto* out = cmd->add_option("--out", args->out, "Output covariance directory");
  auto* seed = cmd->add_option("--seed", args->seed, "Run seed (recorded; capture is deterministic)");
  cmd->add_option("--config", args->config, "JSON run configuration");

  cmd->callback([args, checkpoint, data, out, seed]() {
    const Config cfg = Config::load_optional(args->config);
    cfg.apply(checkpoint, args->checkpoint, {{"checkpoint"}});
    cfg.apply(data, args->data, {{"data"}});
    cfg.apply(out, args->out, {{"out"}});
    cfg.apply(seed, args->seed, {{"seed"}});
    if (args->checkpoint.empty() || args->data.empty() || args->out.empty()) {
      throw CLI::RequiredError("capture requires --checkpoint, --data and --out");
    }
    run(*args);
  });
}

}  // namespace korecli
