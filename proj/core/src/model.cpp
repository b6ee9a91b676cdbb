#include "kore/model.hpp"

#include <cmath>
#include <fstream>

#include "json.hpp"

#include "kore/matrix_io.hpp"

namespace kore {

namespace {

Matrix apply_activation(Activation act, const Matrix& s) {
  if (act == Activation::identity) return s;
  Matrix out(s.rows(), s.cols());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double v = s.data()[i];
    out.data()[i] = act == Activation::relu ? (v > 0.0 ? v : 0.0) : std::tanh(v);
  }
  return out;
}

// Element-wise activation derivative at the preactivation. The relu
// subgradient at 0 is 0.
Matrix activation_grad(Activation act, const Matrix& s) {
  Matrix g(s.rows(), s.cols());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double v = s.data()[i];
    switch (act) {
      case Activation::identity:
        g.data()[i] = 1.0;
        break;
      case Activation::relu:
        g.data()[i] = v > 0.0 ? 1.0 : 0.0;
        break;
      case Activation::tanh: {
        const double t = std::tanh(v);
        g.data()[i] = 1.0 - t * t;
        break;
      }
    }
  }
  return g;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) c.data()[i] = a.data()[i] * b.data()[i];
  return c;
}

Matrix add_bias(const Matrix& s, const Matrix& bias) {
  Matrix out = s;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) += bias(i, 0);
  }
  return out;
}

Matrix softmax_columns(const Matrix& pred) {
  Matrix p(pred.rows(), pred.cols());
  for (std::size_t j = 0; j < pred.cols(); ++j) {
    double m = pred(0, j);
    for (std::size_t i = 1; i < pred.rows(); ++i) m = std::max(m, pred(i, j));
    double z = 0.0;
    for (std::size_t i = 0; i < pred.rows(); ++i) {
      p(i, j) = std::exp(pred(i, j) - m);
      z += p(i, j);
    }
    for (std::size_t i = 0; i < pred.rows(); ++i) p(i, j) /= z;
  }
  return p;
}

}  // namespace

std::string activation_name(Activation a) {
  switch (a) {
    case Activation::identity: return "identity";
    case Activation::relu: return "relu";
    case Activation::tanh: return "tanh";
  }
  return "identity";
}

Activation activation_from_name(const std::string& name) {
  if (name == "identity") return Activation::identity;
  if (name == "relu") return Activation::relu;
  if (name == "tanh") return Activation::tanh;
  throw FormatError("unknown activation: " + name);
}

std::string loss_name(Loss l) {
  return l == Loss::mse ? "mse" : "softmax_xent";
}

Loss loss_from_name(const std::string& name) {
  if (name == "mse") return Loss::mse;
  if (name == "softmax_xent") return Loss::softmax_xent;
  throw FormatError("unknown loss: " + name);
}

Matrix LinearLayer::effective_weight() const {
  if (!adapter) return w;
  return w + matmul(adapter->b, adapter->a);
}

void ToyModel::validate() const {
  std::size_t dim = input_dim;
  for (const auto& layer : layers) {
    if (layer.d_in() != dim) {
      throw ShapeError("model: layer " + layer.layer_id + " input dim " +
                       std::to_string(layer.d_in()) + " breaks the chain at " +
                       std::to_string(dim));
    }
    if (layer.bias && (layer.bias->rows() != layer.d_out() || layer.bias->cols() != 1)) {
      throw ShapeError("model: bias shape mismatch in layer " + layer.layer_id);
    }
    if (layer.adapter) {
      if (layer.adapter->a.cols() != layer.d_in() ||
          layer.adapter->b.rows() != layer.d_out() ||
          layer.adapter->a.rows() != layer.adapter->rank ||
          layer.adapter->b.cols() != layer.adapter->rank) {
        throw ShapeError("model: adapter shape mismatch in layer " + layer.layer_id);
      }
    }
    dim = layer.d_out();
  }
}

Matrix forward(const ToyModel& model, const Matrix& x) {
  return forward_trace(model, x).output;
}

ForwardTrace forward_trace(const ToyModel& model, const Matrix& x) {
  if (x.rows() != model.input_dim) {
    throw ShapeError("forward: input rows do not match model input_dim");
  }
  ForwardTrace trace;
  trace.layer_inputs.reserve(model.layers.size());
  trace.preactivations.reserve(model.layers.size());
  Matrix cur = x;
  for (const auto& layer : model.layers) {
    trace.layer_inputs.push_back(cur);
    Matrix s = matmul(layer.effective_weight(), cur);
    if (layer.bias) s = add_bias(s, *layer.bias);
    trace.preactivations.push_back(s);
    cur = apply_activation(layer.activation, s);
  }
  trace.output = std::move(cur);
  return trace;
}

GradientSet backward(const ToyModel& model, const Matrix& x, const Matrix& upstream) {
  const ForwardTrace trace = forward_trace(model, x);
  if (!upstream.same_shape(trace.output)) {
    throw ShapeError("backward: upstream gradient shape mismatch");
  }

  GradientSet grads;
  grads.layers.resize(model.layers.size());
  Matrix g = upstream;
  for (std::size_t li = model.layers.size(); li-- > 0;) {
    const LinearLayer& layer = model.layers[li];
    const Matrix g_pre = hadamard(g, activation_grad(layer.activation, trace.preactivations[li]));
    const Matrix& z = trace.layer_inputs[li];

    if (layer.adapter) {
      // dL/dB = g_pre * (A z)^T; A and the residual base stay frozen.
      grads.layers[li].b = matmul(g_pre, transpose(matmul(layer.adapter->a, z)));
    } else {
      grads.layers[li].w = matmul(g_pre, transpose(z));
      if (layer.bias) {
        Matrix db(layer.d_out(), 1);
        for (std::size_t i = 0; i < g_pre.rows(); ++i) {
          for (std::size_t j = 0; j < g_pre.cols(); ++j) db(i, 0) += g_pre(i, j);
        }
        grads.layers[li].bias = std::move(db);
      }
    }
    if (li > 0) g = matmul(transpose(layer.effective_weight()), g_pre);
  }
  return grads;
}

double loss_value(Loss loss, const Matrix& pred, const Matrix& target) {
  if (!pred.same_shape(target)) throw ShapeError("loss: shape mismatch");
  if (loss == Loss::mse) {
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
      const double d = pred.data()[i] - target.data()[i];
      sum += d * d;
    }
    return sum;
  }
  const Matrix p = softmax_columns(pred);
  double sum = 0.0;
  for (std::size_t j = 0; j < pred.cols(); ++j) {
    for (std::size_t i = 0; i < pred.rows(); ++i) {
      if (target(i, j) != 0.0) sum -= target(i, j) * std::log(p(i, j));
    }
  }
  return sum;
}

Matrix loss_grad(Loss loss, const Matrix& pred, const Matrix& target) {
  if (!pred.same_shape(target)) throw ShapeError("loss: shape mismatch");
  if (loss == Loss::mse) {
    Matrix g(pred.rows(), pred.cols());
    for (std::size_t i = 0; i < pred.size(); ++i) {
      g.data()[i] = 2.0 * (pred.data()[i] - target.data()[i]);
    }
    return g;
  }
  return softmax_columns(pred) - target;
}

double finite_diff_check(const ToyModel& model, const Matrix& x, Loss loss,
                         const Matrix& target, double epsilon) {
  if (!(epsilon > 0.0) || epsilon > 1e-2) {
    throw ContractError("finite_diff_check: epsilon must lie in (0, 1e-2]");
  }

  ToyModel work = model;
  const auto eval = [&]() {
    const double v = loss_value(loss, forward(work, x), target);
    if (!std::isfinite(v)) throw NumericError("finite_diff_check: non-finite loss");
    return v;
  };
  eval();

  const GradientSet grads = backward(model, x, loss_grad(loss, forward(model, x), target));

  double worst = 0.0;
  const auto probe = [&](Matrix& param, const Matrix& analytic) {
    for (std::size_t i = 0; i < param.size(); ++i) {
      const double saved = param.data()[i];
      param.data()[i] = saved + epsilon;
      const double up = eval();
      param.data()[i] = saved - epsilon;
      const double down = eval();
      param.data()[i] = saved;
      const double fd = (up - down) / (2.0 * epsilon);
      const double g = analytic.data()[i];
      const double denom = std::max({std::fabs(fd), std::fabs(g), 1e-12});
      worst = std::max(worst, std::fabs(fd - g) / denom);
    }
  };

  for (std::size_t li = 0; li < work.layers.size(); ++li) {
    LinearLayer& layer = work.layers[li];
    const LayerGrad& lg = grads.layers[li];
    if (layer.adapter) {
      probe(layer.adapter->b, *lg.b);
    } else {
      probe(layer.w, *lg.w);
      if (layer.bias) probe(*layer.bias, *lg.bias);
    }
  }
  return worst;
}

void save_checkpoint(const ToyModel& model, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);

  nlohmann::ordered_json manifest;
  manifest["input_dim"] = model.input_dim;
  manifest["layers"] = nlohmann::ordered_json::array();
  for (const auto& layer : model.layers) {
    manifest["layers"].push_back({
        {"layer_id", layer.layer_id},
        {"d_in", layer.d_in()},
        {"d_out", layer.d_out()},
        {"activation", activation_name(layer.activation)},
        {"has_bias", static_cast<bool>(layer.bias)},
        {"adapter_rank", layer.adapter ? layer.adapter->rank : 0},
    });
    save_matrix(layer.w, dir / (layer.layer_id + ".w"));
    if (layer.bias) save_matrix(*layer.bias, dir / (layer.layer_id + ".bias"));
    if (layer.adapter) {
      save_matrix(layer.adapter->a, dir / (layer.layer_id + ".a"));
      save_matrix(layer.adapter->b, dir / (layer.layer_id + ".b"));
    }
  }
  std::ofstream out(dir / "manifest.json");
  if (!out) throw Error("cannot write manifest.json in " + dir.string());
  out << manifest.dump(2) << "\n";
}

ToyModel load_checkpoint(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw FormatError("missing manifest.json in " + dir.string());
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("manifest.json: " + std::string(e.what()));
  }

  ToyModel model;
  model.input_dim = manifest.at("input_dim").get<std::size_t>();
  for (const auto& entry : manifest.at("layers")) {
    LinearLayer layer;
    layer.layer_id = entry.at("layer_id").get<std::string>();
    layer.activation = activation_from_name(entry.at("activation").get<std::string>());
    layer.w = load_matrix(dir / (layer.layer_id + ".w"));
    if (entry.at("has_bias").get<bool>()) {
      layer.bias = load_matrix(dir / (layer.layer_id + ".bias"));
    }
    const std::size_t rank = entry.at("adapter_rank").get<std::size_t>();
    if (rank > 0) {
      AdapterPair pair;
      pair.a = load_matrix(dir / (layer.layer_id + ".a"));
      pair.b = load_matrix(dir / (layer.layer_id + ".b"));
      pair.rank = rank;
      layer.adapter = std::move(pair);
    }
    model.layers.push_back(std::move(layer));
  }
  model.validate();
  return model;
}

}  // namespace kore
