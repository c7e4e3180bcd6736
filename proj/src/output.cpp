#include "resolab/output.hpp"

#include <cstdio>
#include <fstream>

#include "resolab/common.hpp"

namespace resolab {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(const std::string& path, const OutputMeta& meta, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << "# resolab " << artifact_version << "\n";
  out << "# command: " << meta.command << "\n";
  out << "# config_hash: " << meta.config_hash << "\n";
  for (const auto& [k, v] : meta.extra) out << "# " << k << ": " << v << "\n";
  for (size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << "\n";
  for (const auto& r : rows) {
    for (size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << format_double(r[i]);
    out << "\n";
  }
}

nlohmann::json meta_json(const OutputMeta& meta) {
  nlohmann::json j;
  j["artifact_version"] = artifact_version;
  j["command"] = meta.command;
  j["config_hash"] = meta.config_hash;
  for (const auto& [k, v] : meta.extra) j[k] = v;
  return j;
}

void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace resolab
