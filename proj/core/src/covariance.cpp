#include "kore/covariance.hpp"

#include <fstream>

#include "json.hpp"

#include "kore/matrix_io.hpp"

namespace kore {

CovAccumulator CovAccumulator::empty(std::string layer_id, std::size_t dim) {
  CovAccumulator acc;
  acc.layer_id = std::move(layer_id);
  acc.dim = dim;
  acc.c = Matrix(dim, dim);
  acc.tokens = 0;
  return acc;
}

Matrix CovAccumulator::normalized() const {
  const double denom = tokens > 0 ? static_cast<double>(tokens) : 1.0;
  return (1.0 / denom) * c;
}

CovAccumulator absorb(const CovAccumulator& acc, const Matrix& x_batch) {
  if (x_batch.rows() != acc.dim) {
    throw ShapeError("absorb: activation rows do not match accumulator dim");
  }
  CovAccumulator out = acc;
  out.c = acc.c + matmul(x_batch, transpose(x_batch));
  out.tokens = acc.tokens + x_batch.cols();
  return out;
}

CovAccumulator merge(const CovAccumulator& a, const CovAccumulator& b) {
  if (a.layer_id != b.layer_id) {
    throw IdentityError("merge: accumulators describe different layers (" +
                        a.layer_id + " vs " + b.layer_id + ")");
  }
  if (a.dim != b.dim) {
    throw IdentityError("merge: accumulators for " + a.layer_id + " differ in dim");
  }
  CovAccumulator out;
  out.layer_id = a.layer_id;
  out.dim = a.dim;
  out.c = a.c + b.c;
  out.tokens = a.tokens + b.tokens;
  return out;
}

std::map<std::string, CovAccumulator> capture(const ToyModel& model,
                                              std::span<const Matrix> inputs) {
  model.validate();
  std::map<std::string, CovAccumulator> accs;
  for (const auto& layer : model.layers) {
    accs.emplace(layer.layer_id, CovAccumulator::empty(layer.layer_id, layer.d_in()));
  }
  for (const Matrix& x : inputs) {
    const ForwardTrace trace = forward_trace(model, x);
    for (std::size_t li = 0; li < model.layers.size(); ++li) {
      auto& acc = accs.at(model.layers[li].layer_id);
      acc = absorb(acc, trace.layer_inputs[li]);
    }
  }
  return accs;
}

void save_accumulator(const CovAccumulator& acc, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  save_matrix(acc.c, dir / (acc.layer_id + ".cov"));

  nlohmann::ordered_json sidecar;
  sidecar["layer_id"] = acc.layer_id;
  sidecar["dim"] = acc.dim;
  sidecar["tokens"] = acc.tokens;
  std::ofstream out(dir / (acc.layer_id + ".cov.json"));
  if (!out) throw Error("cannot write covariance sidecar in " + dir.string());
  out << sidecar.dump(2) << "\n";
}

CovAccumulator load_accumulator(const std::filesystem::path& cov_path) {
  CovAccumulator acc;
  acc.c = load_matrix(cov_path);

  const std::filesystem::path sidecar_path = cov_path.string() + ".json";
  std::ifstream in(sidecar_path);
  if (!in) throw FormatError("missing covariance sidecar: " + sidecar_path.string());
  nlohmann::json sidecar;
  try {
    in >> sidecar;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("covariance sidecar: " + std::string(e.what()));
  }
  acc.layer_id = sidecar.at("layer_id").get<std::string>();
  acc.dim = sidecar.at("dim").get<std::size_t>();
  acc.tokens = sidecar.at("tokens").get<std::uint64_t>();
  if (acc.c.rows() != acc.dim || acc.c.cols() != acc.dim) {
    throw FormatError("covariance payload does not match sidecar dim: " +
                      cov_path.string());
  }
  return acc;
}

std::map<std::string, CovAccumulator> load_accumulator_dir(const std::filesystem::path& dir) {
  std::map<std::string, CovAccumulator> accs;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ".cov") {
      CovAccumulator acc = load_accumulator(entry.path());
      const std::string id = acc.layer_id;
      accs.emplace(id, std::move(acc));
    }
  }
  return accs;
}

}  // namespace kore
