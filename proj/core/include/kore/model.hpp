#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kore/adapter.hpp"
#include "kore/matrix.hpp"

namespace kore {

enum class Activation { identity, relu, tanh };

std::string activation_name(Activation a);
Activation activation_from_name(const std::string& name);

/// One dense layer. When an adapter is present, `w` stores the
/// residual-adjusted base W0' and the effective weight is w + b*a; the
/// adapter's `a` and `w` itself are frozen, only `b` trains.
struct LinearLayer {
  std::string layer_id;
  Matrix w;  // d_out x d_in
  std::optional<Matrix> bias;  // d_out x 1
  std::optional<AdapterPair> adapter;
  Activation activation = Activation::identity;

  std::size_t d_in() const { return w.cols(); }
  std::size_t d_out() const { return w.rows(); }
  Matrix effective_weight() const;
};

struct ToyModel {
  std::vector<LinearLayer> layers;
  std::size_t input_dim = 0;

  /// ShapeError unless consecutive layer dimensions chain.
  void validate() const;
};

/// Per-layer intermediates of one forward pass. `layer_inputs[l]` is the
/// input activation of layer l (what the covariance capture consumes).
struct ForwardTrace {
  std::vector<Matrix> layer_inputs;
  std::vector<Matrix> preactivations;
  Matrix output;
};

Matrix forward(const ToyModel& model, const Matrix& x);
ForwardTrace forward_trace(const ToyModel& model, const Matrix& x);

/// Gradients for the trainable parameters of one layer. Adapter layers
/// carry only `b`; plain layers carry `w` and, when present, `bias`.
/// Frozen parameters (adapter `a`, the residual base) never appear.
struct LayerGrad {
  std::optional<Matrix> w;
  std::optional<Matrix> bias;
  std::optional<Matrix> b;
};

struct GradientSet {
  std::vector<LayerGrad> layers;
};

/// Reverse-mode gradients given the upstream gradient at the model output.
GradientSet backward(const ToyModel& model, const Matrix& x, const Matrix& upstream);

enum class Loss { mse, softmax_xent };

std::string loss_name(Loss l);
Loss loss_from_name(const std::string& name);

/// Sum of squared errors over all entries, or column-wise softmax
/// cross-entropy (max-subtraction stabilized) summed over columns.
double loss_value(Loss loss, const Matrix& pred, const Matrix& target);
Matrix loss_grad(Loss loss, const Matrix& pred, const Matrix& target);

/// Central differences over every trainable scalar against the analytic
/// gradient; returns the worst relative error (1e-12 denominator guard).
/// epsilon must lie in (0, 1e-2]. NumericError on a non-finite loss.
double finite_diff_check(const ToyModel& model, const Matrix& x, Loss loss,
                         const Matrix& target, double epsilon);

/// Checkpoint directory: one KOREMAT1 file per parameter
/// (<layer_id>.w / .a / .b / .bias) plus manifest.json with the layer
/// order, dimensions, activation names, and adapter ranks.
void save_checkpoint(const ToyModel& model, const std::filesystem::path& dir);
ToyModel load_checkpoint(const std::filesystem::path& dir);

}  // namespace kore
