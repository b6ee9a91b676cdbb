#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

namespace korecli {

/// Optional JSON run configuration shared by every subcommand. Flags set
/// on the command line always win over config fields.
struct Config {
  nlohmann::json doc;

  static Config load_optional(const std::string& path);

  const nlohmann::json* find(const std::vector<std::string>& path) const;

  /// Fills `value` from the first matching path unless the flag was given.
  template <typename T>
  void apply(const CLI::Option* opt, T& value,
             std::initializer_list<std::vector<std::string>> paths) const {
    if (opt != nullptr && opt->count() > 0) return;
    for (const auto& p : paths) {
      if (const nlohmann::json* v = find(p)) {
        value = v->get<T>();
        return;
      }
    }
  }
};

/// Mirrors the effective configuration of a run into <dir>/run_config.json.
void write_run_config(const std::filesystem::path& dir,
                      const nlohmann::ordered_json& effective);

std::vector<std::size_t> parse_size_list(const std::string& csv);
std::vector<std::string> parse_name_list(const std::string& csv);

}  // namespace korecli
