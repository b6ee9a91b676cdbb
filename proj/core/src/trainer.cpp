#include "kore/trainer.hpp"

#include <cmath>
#include <numeric>

#include "kore/rng.hpp"

namespace kore {

namespace {

constexpr double kPi = 3.14159265358979323846;

Matrix concat_columns(std::span<const TrainSample> batch, bool targets) {
  std::size_t cols = 0;
  for (const auto& s : batch) cols += (targets ? s.target : s.input).cols();
  const Matrix& first = targets ? batch.front().target : batch.front().input;
  Matrix out(first.rows(), cols);
  std::size_t at = 0;
  for (const auto& s : batch) {
    const Matrix& m = targets ? s.target : s.input;
    if (m.rows() != first.rows()) throw ShapeError("train: inconsistent sample rows");
    for (std::size_t j = 0; j < m.cols(); ++j, ++at) {
      for (std::size_t i = 0; i < m.rows(); ++i) out(i, at) = m(i, j);
    }
  }
  return out;
}

void apply_update(Matrix& param, const Matrix& grad, double lr, double weight_decay) {
  for (std::size_t i = 0; i < param.size(); ++i) {
    param.data()[i] -= lr * (grad.data()[i] + weight_decay * param.data()[i]);
  }
}

}  // namespace

void TrainConfig::validate() const {
  if (!(base_lr > 0.0)) throw ContractError("train config: base_lr must be > 0");
  if (!(warmup_ratio >= 0.0 && warmup_ratio < 1.0)) {
    throw ContractError("train config: warmup_ratio must lie in [0, 1)");
  }
  if (epochs < 1) throw ContractError("train config: epochs must be >= 1");
  if (batch_size < 1) throw ContractError("train config: batch_size must be >= 1");
}

double lr_at(std::size_t step, std::size_t total_steps, const TrainConfig& cfg) {
  cfg.validate();
  if (total_steps < 1) throw ContractError("lr_at: total_steps must be >= 1");
  if (step > total_steps) throw ContractError("lr_at: step exceeds total_steps");

  const auto warmup = static_cast<std::size_t>(
      std::ceil(cfg.warmup_ratio * static_cast<double>(total_steps)));
  if (step == total_steps) return 0.0;
  if (warmup > 0 && step <= warmup) {
    return cfg.base_lr * static_cast<double>(step) / static_cast<double>(warmup);
  }
  const double t = static_cast<double>(step - warmup) /
                   static_cast<double>(total_steps - warmup);
  return cfg.base_lr * 0.5 * (1.0 + std::cos(kPi * t));
}

TrainHistory train(ToyModel& model, std::span<const TrainSample> dataset,
                   const TrainConfig& cfg) {
  cfg.validate();
  model.validate();
  if (dataset.empty()) throw ContractError("train: dataset is empty");

  const std::size_t batches_per_epoch =
      (dataset.size() + cfg.batch_size - 1) / cfg.batch_size;
  const std::size_t total_steps = cfg.epochs * batches_per_epoch;

  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);

  TrainHistory history;
  history.steps.reserve(total_steps);

  std::size_t step = 0;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (cfg.shuffle) {
      Rng rng(cfg.seed + epoch);
      for (std::size_t i = order.size(); i > 1; --i) {
        std::swap(order[i - 1], order[rng.next_index(i)]);
      }
    }
    for (std::size_t b = 0; b < batches_per_epoch; ++b, ++step) {
      const std::size_t lo = b * cfg.batch_size;
      const std::size_t hi = std::min(lo + cfg.batch_size, dataset.size());
      std::vector<TrainSample> batch;
      batch.reserve(hi - lo);
      for (std::size_t i = lo; i < hi; ++i) batch.push_back(dataset[order[i]]);

      const Matrix x = concat_columns(batch, false);
      const Matrix y = concat_columns(batch, true);

      const Matrix pred = forward(model, x);
      const double loss = loss_value(cfg.loss, pred, y);
      if (!std::isfinite(loss)) {
        throw NumericError("train: loss is not finite at step " + std::to_string(step),
                           step);
      }
      const double lr = lr_at(step, total_steps, cfg);
      history.steps.push_back(StepRecord{step, lr, loss});

      const GradientSet grads = backward(model, x, loss_grad(cfg.loss, pred, y));
      for (std::size_t li = 0; li < model.layers.size(); ++li) {
        LinearLayer& layer = model.layers[li];
        const LayerGrad& lg = grads.layers[li];
        if (layer.adapter) {
          apply_update(layer.adapter->b, *lg.b, lr, cfg.weight_decay);
        } else {
          apply_update(layer.w, *lg.w, lr, cfg.weight_decay);
          if (layer.bias) apply_update(*layer.bias, *lg.bias, lr, cfg.weight_decay);
        }
      }
    }
  }
  return history;
}

AdapterPair standard_lora_init(const Matrix& w0, std::size_t r, std::uint64_t seed) {
  if (r < 1) throw ContractError("standard_lora_init: rank must be >= 1");
  const std::size_t d_out = w0.rows();
  const std::size_t d_in = w0.cols();
  Rng rng(seed);
  Matrix a(r, d_in);
  const double std_dev = 1.0 / std::sqrt(static_cast<double>(d_in));
  for (std::size_t i = 0; i < a.size(); ++i) a.data()[i] = std_dev * rng.next_gaussian();
  return AdapterPair{std::move(a), Matrix(d_out, r), r};
}

}  // namespace kore
