#pragma once

#include <vector>

#include <eigen3/Eigen/Dense>

#include "resolab/determinants.hpp"
#include "resolab/resonances.hpp"

namespace resolab {

struct SSFProfile {
  std::vector<double> lambdas;
  std::vector<double> xi_prime;
  double eps_boundary = 1e-3;
  int p_order = 1;
  double h = 1.0;
};

struct BreitWignerDecomposition {
  std::vector<double> lorentzian_part;
  std::vector<double> background_part;
  ResonanceSet resonances_used;
};

// -(1/pi) Im d/dlambda log D_p(lambda + i eps), centered difference with
// step max(1e-5, eps/10).
double ssf_derivative(int p_order, const Potential& pot, double lambda, double h, double eps, const DetConfig& cfg);
double ssf_derivative(const DeterminantEvaluator& ev, int p_order, double lambda, double eps);

// xi'_p on a grid. With `extrapolate`, the value at eps is combined with the
// one at 2 eps to remove the O(eps) offset.
SSFProfile ssf_profile(int p_order, const Potential& pot, const std::vector<double>& lambdas, double h, double eps,
                       const DetConfig& cfg, bool extrapolate = false, int threads = 1);

double lorentzian_sum(const ResonanceSet& rs, double lambda);

BreitWignerDecomposition breit_wigner_decompose(const SSFProfile& profile, const ResonanceSet& rs);

struct ScatteringData {
  Eigen::Matrix2cd S;  // [[t, r_right], [r_left, t]]
  cplx t, r_left, r_right;
  bool stiff = false;
};

// Transfer across supp V with classical RK4, step <= 1e-3 h.
ScatteringData scattering_data(const Potential& pot, double lambda, double h);
Eigen::Matrix2cd scattering_matrix(const Potential& pot, double lambda, double h);

struct BirmanKreinReport {
  std::vector<double> lambdas;
  std::vector<double> xi_prime;    // at lambda + i eps
  std::vector<double> darg_det_s;  // d/dlambda arg det S
  double max_deviation = 0.0;      // max |-pi xi' + darg_det_s / 2|
  double max_abs_xi = 0.0;
};

BirmanKreinReport birman_krein_check(const Potential& pot, const std::vector<double>& lambda_grid, double h,
                                     double eps, const DetConfig& cfg = {}, int threads = 1);

}  // namespace resolab
