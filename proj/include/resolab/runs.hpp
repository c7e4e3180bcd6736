#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "resolab/config.hpp"

namespace resolab {

// Each run writes its CSV tables and a JSON summary into cfg.out_dir and
// returns the summary. Summaries list a pass flag per covered criterion.
nlohmann::json run_det(const ExperimentConfig& cfg);
nlohmann::json run_resonances(const ExperimentConfig& cfg);
nlohmann::json run_ssf(const ExperimentConfig& cfg);
nlohmann::json run_counterexample(const ExperimentConfig& cfg);
nlohmann::json run_zeta_check(const ExperimentConfig& cfg);
nlohmann::json run_distort_check(const ExperimentConfig& cfg);
nlohmann::json run_scaling_study(const ExperimentConfig& cfg);

nlohmann::json run_command(const std::string& name, const ExperimentConfig& cfg);
const std::vector<std::string>& command_names();

std::vector<double> linear_grid(double lo, double hi, int count);
// least-squares slope of log y against log x
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace resolab
