#pragma once

#include "resolab/common.hpp"

namespace resolab {

// Closed arg window [arg_lo, arg_hi] in which z^(1/2) is taken continuously
// from the positive axis.
struct SqrtBranch {
  double arg_lo = -3.0 * pi / 4.0;
  double arg_hi = 0.3;

  SqrtBranch() = default;
  SqrtBranch(double lo, double hi);
  // arg of z inside the window, or BranchError
  double arg(cplx z) const;
  bool contains(cplx z) const;
};

// Physical sheet: Im k >= 0 for arg z in [0, pi].
SqrtBranch physical_branch();

struct SpectralRegion {
  SqrtBranch branch;
  double r_min = 0.25;
  double r_max = 10.0;
  double theta0 = 3.0 * pi / 8.0;
  double eps = 0.3;

  SpectralRegion() : SpectralRegion(0.25, 10.0, 3.0 * pi / 8.0, 0.3) {}
  SpectralRegion(double r_min, double r_max, double theta0, double eps);
  double phi_lo() const { return -2.0 * theta0; }
  double phi_hi() const { return eps; }
  cplx point(double r, double phi) const { return std::polar(r, phi); }
  bool contains(cplx z) const;
  // leftmost point of the region on (0, inf), lifted by 0.05 r_min
  cplx anchor() const { return {r_min, 0.05 * r_min}; }
};

cplx sqrt_branch(cplx z, const SqrtBranch& b);

cplx free_resolvent_kernel(double x, double y, cplx k, double h);

}  // namespace resolab
