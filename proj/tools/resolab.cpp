#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "resolab/config.hpp"
#include "resolab/output.hpp"
#include "resolab/runs.hpp"

using namespace resolab;

namespace {

bool set_log_level() {
  const char* env = std::getenv("RESOLAB_LOG");
  std::string v = env ? env : "info";
  if (v == "error") spdlog::set_level(spdlog::level::err);
  else if (v == "info") spdlog::set_level(spdlog::level::info);
  else if (v == "debug") spdlog::set_level(spdlog::level::debug);
  else {
    std::cerr << "RESOLAB_LOG must be error, info or debug (got '" << v << "')\n";
    return false;
  }
  spdlog::set_pattern("[%l] %v");
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"resolab: resonances and perturbation determinants in 1D"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);
  std::string config_path, out_dir;
  int threads = 0;
  std::vector<double> h_override;
  app.add_option("--config", config_path, "config file")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--h", h_override, "override run.h_list")->delimiter(',');
  app.fallthrough();
  for (const auto& name : command_names()) app.add_subcommand(name);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  if (!set_log_level()) return 1;

  ExperimentConfig cfg;
  try {
    cfg = parse_config(config_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (threads > 0) cfg.threads = threads;
    if (!h_override.empty()) {
      cfg.h_list = h_override;
      cfg = parse_config_string(serialize_config(cfg));  // revalidate
    }
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }

  std::string command = app.get_subcommands().front()->get_name();
  try {
    spdlog::info("{} ({} threads, config {})", command, cfg.threads, config_hash(cfg));
    nlohmann::json summary = run_command(command, cfg);
    std::cout << summary["criteria"].dump() << "\n";
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Config) {
      std::cerr << "config error: " << e.what() << "\n";
      return 1;
    }
    spdlog::error("{}: {}", error_name(e.kind()), e.what());
    std::filesystem::create_directories(cfg.out_dir);
    nlohmann::json d = meta_json({command, config_hash(cfg), {}});
    d["error"] = error_name(e.kind());
    d["message"] = e.what();
    write_json((std::filesystem::path(cfg.out_dir) / "diagnostic.json").string(), d);
    return 2;
  }
  return 0;
}
