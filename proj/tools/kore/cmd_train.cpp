#include <cstdio>
#include <fstream>
#include <memory>

#include "commands.hpp"
#include "run_config.hpp"

#include "kore/dataset.hpp"
#include "kore/model.hpp"
#include "kore/trainer.hpp"

namespace korecli {

namespace {

struct TrainArgs {
  std::string checkpoint;
  std::string data;
  std::string out;
  std::string config;
  std::string loss = "mse";
  kore::TrainConfig train;
  bool shuffle = false;
};

void run(const TrainArgs& args) {
  kore::ToyModel model = kore::load_checkpoint(args.checkpoint);
  const std::vector<kore::TrainSample> dataset = kore::load_dataset(args.data);

  kore::TrainConfig cfg = args.train;
  cfg.loss = kore::loss_from_name(args.loss);
  cfg.shuffle = args.shuffle;
  kore::TrainHistory history = kore::train(model, dataset, cfg);

  const std::filesystem::path out_dir(args.out);
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream out(out_dir / "history.jsonl", std::ios::binary);
    if (!out) throw kore::Error("cannot write history.jsonl in " + args.out);
    for (const auto& rec : history.steps) {
      nlohmann::ordered_json line;
      line["step"] = rec.step;
      line["lr"] = rec.lr;
      line["loss"] = rec.loss;
      out << line.dump() << "\n";
    }
  }
  kore::save_checkpoint(model, out_dir / "checkpoint");
  history.final_checkpoint = (out_dir / "checkpoint").string();

  nlohmann::ordered_json effective;
  effective["command"] = "train";
  effective["checkpoint"] = args.checkpoint;
  effective["data"] = args.data;
  effective["out"] = args.out;
  effective["train"] = {
      {"base_lr", cfg.base_lr},        {"warmup_ratio", cfg.warmup_ratio},
      {"epochs", cfg.epochs},          {"batch_size", cfg.batch_size},
      {"seed", cfg.seed},              {"loss", kore::loss_name(cfg.loss)},
      {"weight_decay", cfg.weight_decay}, {"shuffle", cfg.shuffle},
  };
  write_run_config(out_dir, effective);

  const double final_loss = history.steps.empty() ? 0.0 : history.steps.back().loss;
  std::printf("trained %zu step(s), final loss %.6g -> %s\n", history.steps.size(),
              final_loss, args.out.c_str());
}

}  // namespace

void register_train(CLI::App& app) {
  auto args = std::make_shared<TrainArgs>();
  CLI::App* cmd = app.add_subcommand("train", "Train the trainable parameters (adapter B factors)");
  auto* checkpoint = cmd->add_option("--checkpoint", args->checkpoint, "Checkpoint directory");
  auto* data = cmd->add_option("--data", args->data, "Dataset JSONL with input/target pairs");
  cmd->add_option("--config", args->config,
                  "JSON config; recognizes the TrainConfig field names");
  auto* out = cmd->add_option("--out", args->out, "Output directory");
  auto* base_lr = cmd->add_option("--base-lr", args->train.base_lr, "Peak learning rate");
  auto* warmup = cmd->add_option("--warmup-ratio", args->train.warmup_ratio, "Warmup ratio");
  auto* epochs = cmd->add_option("--epochs", args->train.epochs, "Training epochs");
  auto* batch = cmd->add_option("--batch-size", args->train.batch_size, "Batch size");
  auto* seed = cmd->add_option("--seed", args->train.seed, "Shuffle seed");
  auto* loss = cmd->add_option("--loss", args->loss, "Loss: mse or softmax_xent");
  auto* decay = cmd->add_option("--weight-decay", args->train.weight_decay, "Weight decay");
  auto* shuffle = cmd->add_flag("--shuffle", args->shuffle, "Seed-driven shuffling per epoch");

  cmd->callback([args, checkpoint, data, out, base_lr, warmup, epochs, batch, seed, loss,
                 decay, shuffle]() {
    const Config cfg = Config::load_optional(args->config);
    cfg.apply(checkpoint, args->checkpoint, {{"checkpoint"}});
    cfg.apply(data, args->data, {{"data"}});
    cfg.apply(out, args->out, {{"out"}});
    // TrainConfig fields are recognized both at the top level and nested
    // under "train".
    cfg.apply(base_lr, args->train.base_lr, {{"base_lr"}, {"train", "base_lr"}});
    cfg.apply(warmup, args->train.warmup_ratio, {{"warmup_ratio"}, {"train", "warmup_ratio"}});
    cfg.apply(epochs, args->train.epochs, {{"epochs"}, {"train", "epochs"}});
    cfg.apply(batch, args->train.batch_size, {{"batch_size"}, {"train", "batch_size"}});
    cfg.apply(seed, args->train.seed, {{"seed"}, {"train", "seed"}});
    cfg.apply(loss, args->loss, {{"loss"}, {"train", "loss"}});
    cfg.apply(decay, args->train.weight_decay, {{"weight_decay"}, {"train", "weight_decay"}});
    cfg.apply(shuffle, args->shuffle, {{"shuffle"}, {"train", "shuffle"}});
    if (args->checkpoint.empty() || args->data.empty() || args->out.empty()) {
      throw CLI::RequiredError("train requires --checkpoint, --data and --out");
    }
    run(*args);
  });
}

}  // namespace korecli
