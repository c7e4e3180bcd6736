#pragma once

#include <map>
#include <mutex>
#include <vector>

#include "resolab/common.hpp"
#include "resolab/potentials.hpp"

namespace resolab {

// Dirichlet box [-L, L] with uniform step.
struct HeatGrid {
  double L = 40.0;
  double step = 1.0 / 128.0;
  int size() const { return static_cast<int>(std::lround(2.0 * L / step)) - 1; }
};

// Spectra of -h^2 D^2 + eps V on the grid at the eps-stencil points, used for
// tr(e^{-tH_1} - sum_{j<p} (1/j!) d^j/deps^j e^{-tH_eps}|_0).
class HeatTraceEngine {
 public:
  HeatTraceEngine(const Potential& pot, double h, int p_max, const HeatGrid& grid, double delta = 1e-2,
                  int threads = 1);

  double trace(double t, int p) const;
  // smallest eigenvalue over all stored operators
  double lambda_min() const { return lambda_min_; }
  int p_max() const { return p_max_; }
  double h() const { return h_; }
  const HeatGrid& grid() const { return grid_; }

 private:
  double h_;
  int p_max_;
  HeatGrid grid_;
  double delta_;
  double lambda_min_;
  std::vector<double> lam0_;
  std::vector<double> d1_;                       // lambda_i(H_1) - lambda_i(H_0)
  std::vector<double> eps_;                      // stencil points
  std::vector<std::vector<double>> d_;           // lambda_i(H_eps) - lambda_i(H_0)
};

// Eigenvalues of the symmetric tridiagonal grid operator -h^2 D^2 + eps V.
std::vector<double> grid_spectrum(const Potential& pot, double h, double eps, const HeatGrid& grid);

// Single trace with the L -> 1.25 L boundary check (GridTooSmall).
double regularized_heat_trace(const Potential& pot, double t, double h, int p_order, const HeatGrid& grid);

struct HeatTraceSamples {
  std::vector<double> t_values;
  std::vector<double> traces;
  int p_order = 1;
  double h = 1.0;
  HeatGrid grid;
};

HeatTraceSamples sample_heat_trace(const HeatTraceEngine& eng, int p_order, double t_lo, double t_hi, int count);

// sum_j a_j t^{j/2 - 1/2}
struct HeatExpansion {
  std::vector<double> a;
  int J = 0;
  double fit_residual = 0.0;  // rms(residual) / rms(data)
  double condition = 0.0;
  double operator()(double t) const;
};

HeatExpansion fit_heat_expansion(const HeatTraceSamples& samples, int J);

cplx rgamma(cplx s);  // 1 / Gamma(s)

struct ZetaConfig {
  double t_cut = 1.0;
  double t_min = 1e-3;
  int small_t_panels = 24;
  double tail_tol = 1e-12;
};

struct ZetaEvaluation {
  cplx s, z, value;
  cplx I_term, II_term, III_term;
};

// zeta_p(s, z) = Gamma(s)^{-1} int_0^inf Lu(t) e^{tz} t^{s-1} dt split at t_cut:
// I on [t_cut, inf) from the traces, II_J from the remainder b_J on (0, t_cut),
// III_J from the fitted terms in closed form.
class ZetaRoute {
 public:
  ZetaRoute(const HeatTraceEngine& eng, int p_order, const HeatExpansion& ex, const ZetaConfig& cfg = {});

  ZetaEvaluation eval(cplx s, cplx z) const;
  // d/ds zeta_p(s, z) at s = 0
  cplx ds_at_zero(cplx z) const;
  int p_order() const { return p_; }

 private:
  struct Node {
    double t, w, lu;
  };
  const std::vector<Node>& large_t_nodes(double t_max) const;
  double t_max(cplx z) const;
  cplx small_t_integral(cplx s, cplx z) const;  // II without 1/Gamma
  cplx large_t_integral(cplx s, cplx z) const;  // I without 1/Gamma
  cplx series(cplx s, cplx z, bool derivative_at_zero) const;

  const HeatTraceEngine& eng_;
  int p_;
  HeatExpansion ex_;
  ZetaConfig cfg_;
  std::vector<Node> small_;
  double b_tmin_;
  mutable std::mutex mu_;
  mutable std::vector<Node> large_;
  mutable double large_end_;
};

ZetaEvaluation zeta_eval(cplx s, cplx z, const ZetaRoute& route);
// exp(-d/ds zeta_p(s, z)|_{s=0})
cplx dpzeta(cplx z, const ZetaRoute& route);

}  // namespace resolab
