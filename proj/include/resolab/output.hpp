#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace resolab {

inline constexpr const char* artifact_version = "0.1.0";

struct OutputMeta {
  std::string command;
  std::string config_hash;
  std::vector<std::pair<std::string, std::string>> extra;
};

std::string format_double(double x);  // 17 significant digits

// '#'-prefixed header block, then the column row, then one line per row.
void write_csv(const std::string& path, const OutputMeta& meta, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

nlohmann::json meta_json(const OutputMeta& meta);
void write_json(const std::string& path, const nlohmann::json& j);

}  // namespace resolab
