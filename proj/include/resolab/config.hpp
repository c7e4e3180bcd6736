#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "resolab/common.hpp"
#include "resolab/distortion.hpp"
#include "resolab/freefield.hpp"
#include "resolab/potentials.hpp"
#include "resolab/resonances.hpp"
#include "resolab/zeta.hpp"

namespace resolab {

struct PotentialSpec {
  std::string kind = "box";  // box, mollified_box, gaussian_bump, table, zero
  double a = 1.0;
  double depth = -1.0;
  double mollify_width = 0.1;
  std::string table;
  Potential build() const;
  bool operator==(const PotentialSpec&) const = default;
};

struct RegionSpec {
  double r_min = 0.25, r_max = 10.0;
  double theta0 = 3.0 * pi / 8.0;
  double eps = 0.3;
  SpectralRegion build() const { return SpectralRegion(r_min, r_max, theta0, eps); }
  bool operator==(const RegionSpec&) const = default;
};

struct ExperimentConfig {
  PotentialSpec potential;
  RegionSpec region;
  std::vector<double> h_list{1.0};
  std::vector<int> p_orders{1};
  std::uint64_t seed = 1;
  int threads = 1;
  std::string out_dir = "out";

  // nystrom / locate
  int n_per_piece = 64;
  bool adaptive = true;
  double drift_tol = 1e-7;
  int edge_samples = 8;

  // det
  std::vector<cplx> z_points{{-1.0, 0.5}};

  // window W
  WindowSpec window;

  // ssf
  double lambda_lo = 1.0, lambda_hi = 4.0;
  int lambda_count = 200;
  double ssf_eps = 1e-3;  // Birman-Krein
  double bw_eps = 1e-4;   // Breit-Wigner, extrapolated

  // distortion
  std::vector<double> theta_list{0.6, 0.75};
  double R1 = 1.2, T_inf = 2.0, eps1 = 1.4, dist_L = 8.0;
  int n_grid = 1600;

  // zeta
  double zeta_L = 40.0, zeta_step = 1.0 / 128.0, zeta_delta = 1e-2;
  double t_cut = 1.0, t_min = 1e-3, fit_hi = 0.1;
  int fit_J = 6, fit_count = 40;

  // counterexample
  double delta = 0.0;  // 0: b/4
  double b_prime = 0.0;  // 0: b/2
  std::vector<double> pw_h_values{0.4, 0.05};

  LocateConfig locate_config() const;
  bool operator==(const ExperimentConfig& o) const;
};

// INI with sections; errors carry the line or key
ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_string(const std::string& text);
std::string serialize_config(const ExperimentConfig& cfg);
std::uint64_t fnv1a64(const std::string& s);
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace resolab
