#include "run_config.hpp"

#include <fstream>
#include <sstream>

#include "kore/errors.hpp"

namespace korecli {

Config Config::load_optional(const std::string& path) {
  Config cfg;
  if (path.empty()) return cfg;
  std::ifstream in(path);
  if (!in) throw kore::Error("cannot open config file: " + path);
  try {
    in >> cfg.doc;
  } catch (const nlohmann::json::exception& e) {
    throw kore::FormatError("config file " + path + ": " + e.what());
  }
  return cfg;
}

const nlohmann::json* Config::find(const std::vector<std::string>& path) const {
  const nlohmann::json* cur = &doc;
  if (cur->is_null()) return nullptr;
  for (const auto& key : path) {
    if (!cur->is_object() || !cur->contains(key)) return nullptr;
    cur = &cur->at(key);
  }
  return cur;
}

void write_run_config(const std::filesystem::path& dir,
                      const nlohmann::ordered_json& effective) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / "run_config.json");
  if (!out) throw kore::Error("cannot write run_config.json in " + dir.string());
  out << effective.dump(2) << "\n";
}

std::vector<std::size_t> parse_size_list(const std::string& csv) {
  std::vector<std::size_t> out;
  std::stringstream ss(csv);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty()) continue;
    out.push_back(static_cast<std::size_t>(std::stoull(part)));
  }
  return out;
}

std::vector<std::string> parse_name_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

}  // namespace korecli
