#include "kore/dataset.hpp"

#include <fstream>

#include "json.hpp"

namespace kore {

namespace {

Matrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw FormatError("dataset: matrix must be a non-empty array");
  const std::size_t rows = j.size();
  const std::size_t cols = j.at(0).size();
  std::vector<double> data;
  data.reserve(rows * cols);
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != cols) {
      throw FormatError("dataset: ragged matrix rows");
    }
    for (const auto& v : row) data.push_back(v.get<double>());
  }
  return Matrix(rows, cols, std::move(data));
}

nlohmann::ordered_json matrix_to_json(const Matrix& m) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <typename Fn>
void for_each_record(const std::filesystem::path& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw Error("dataset: cannot open " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("dataset line " + std::to_string(line_no) + ": " + e.what());
    }
    fn(j, line_no);
  }
}

}  // namespace

std::vector<TrainSample> load_dataset(const std::filesystem::path& path) {
  std::vector<TrainSample> samples;
  for_each_record(path, [&](const nlohmann::json& j, std::size_t line_no) {
    if (!j.contains("target")) {
      throw FormatError("dataset line " + std::to_string(line_no) + ": missing target");
    }
    samples.push_back(TrainSample{matrix_from_json(j.at("input")),
                                  matrix_from_json(j.at("target"))});
  });
  return samples;
}

std::vector<Matrix> load_inputs(const std::filesystem::path& path) {
  std::vector<Matrix> inputs;
  for_each_record(path, [&](const nlohmann::json& j, std::size_t) {
    inputs.push_back(matrix_from_json(j.at("input")));
  });
  return inputs;
}

void save_dataset(std::span<const TrainSample> samples, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("dataset: cannot write " + path.string());
  for (const auto& s : samples) {
    nlohmann::ordered_json j;
    j["input"] = matrix_to_json(s.input);
    j["target"] = matrix_to_json(s.target);
    out << j.dump() << "\n";
  }
}

void save_inputs(std::span<const Matrix> inputs, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("dataset: cannot write " + path.string());
  for (const auto& m : inputs) {
    nlohmann::ordered_json j;
    j["input"] = matrix_to_json(m);
    out << j.dump() << "\n";
  }
}

}  // namespace kore
