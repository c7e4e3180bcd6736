#pragma once

#include <functional>
#include <vector>

#include "resolab/freefield.hpp"
#include "resolab/potentials.hpp"
#include "resolab/resonances.hpp"

namespace resolab {

// tr((V R0(k^2))^2) = -(2hk)^{-2} int Vt(y) e^{2ik|y|/h} dy, Vt the autocorrelation.
cplx phi_via_autocorr(const Potential& pot, cplx k, double h);

// Same quantity for box(a, depth 1).
cplx phi_box_closed_form(double a, cplx k, double h);

// (1/2pi) int_0^b e^{i x xi} g(x) dx with g sampled once at Gauss nodes
// dense enough for |xi| <= xi_max.
class DensityTransform {
 public:
  DensityTransform(const std::function<double(double)>& g, double b, const std::vector<double>& breaks,
                   double xi_max);
  cplx operator()(cplx xi) const;
  double support() const { return b_; }
  double sup_norm() const { return gmax_; }

 private:
  double b_;
  double gmax_ = 0.0;
  std::vector<double> x_, wg_;
};

DensityTransform density_transform(const Potential& pot, double xi_max);

// d/dz phi = pi/(2 z^2 h^2) (F^{-1} g)(2 z^{1/2}/h)
cplx dz_phi(const Potential& pot, cplx z, double h, const SqrtBranch& b);
cplx dz_phi(const DensityTransform& g, cplx z, double h, const SqrtBranch& b);

// sup over a polar grid of {1 <= |xi| <= 2, -pi/2 <= arg xi < 0} of
// |e^{b' Im xi / h} (F^{-1} g)(xi / h)|
double paley_wiener_sup(const std::function<double(double)>& g, double b, const std::vector<double>& breaks,
                        double b_prime, double h, int n = 200);
double paley_wiener_sup(const Potential& pot, double b_prime, double h, int n = 200);

struct BlowupRow {
  double h;
  double weighted_sup_p3;    // sup_W |h e^{delta Im z^{1/2}/h} dz phi_3|
  double unweighted_sup_p2;  // sup_W |h dz phi_2|
  int resonances;
};

struct BlowupScan {
  std::vector<double> h_values;
  std::vector<double> weighted_sups;
  std::vector<BlowupRow> rows;
  double delta = 0.0;
  WindowSpec window;
};

BlowupScan blowup_scan(const Potential& pot, const std::vector<double>& h_values, double delta,
                       const SpectralRegion& region, const WindowSpec& W, const LocateConfig& cfg);

}  // namespace resolab
