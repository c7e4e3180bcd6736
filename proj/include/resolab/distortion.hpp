#pragma once

#include <vector>

#include "resolab/common.hpp"
#include "resolab/freefield.hpp"
#include "resolab/potentials.hpp"

namespace resolab {

// phi(t) = 0 for t <= R1, 1 for t >= T_inf, smoothstep in between.
// R1 = 0 switches to pure dilation (phi = 1 everywhere).
struct ScalingProfile {
  double R1 = 1.2;
  double T_inf = 2.0;
  double eps1 = 1.4;
  double theta = 0.6;

  double phi(double t) const;
  double dphi(double t) const;
  // kappa'(x) = e^{i theta phi} (1 + i theta |x| phi'(|x|))
  cplx dkappa(double x) const;
};

cplx scaling_map(const ScalingProfile& sp, double x);

// Tridiagonal -h^2 a d/dx (a d/dx) + V, a = 1/kappa', Dirichlet at +-L.
struct DistortedOperator {
  std::vector<double> grid;  // interior nodes
  double step = 0.0;
  std::vector<cplx> diag, lower, upper;  // lower[i] = A(i+1, i), upper[i] = A(i, i+1)
  double theta = 0.0;
  double h = 1.0;
  ScalingProfile profile;

  int size() const { return static_cast<int>(diag.size()); }
  CMatrix dense() const;
};

DistortedOperator build_distorted(const Potential& p, const ScalingProfile& sp, double h, double L, int n_grid);

// All eigenvalues, from the Hessenberg QR of the tridiagonal matrix.
std::vector<cplx> eigenvalues(const DistortedOperator& op);

struct DistortedEigenvalue {
  cplx lambda;
  int cluster_size = 1;
  bool isolated = false;  // away from the rotated continuum ray
};

struct SpectrumOptions {
  double cluster_factor = 10.0;   // cluster radius = factor * step^2
  double ray_margin = 0.05;       // |arg lambda + 2 theta| needed to count as isolated
};

std::vector<DistortedEigenvalue> distorted_spectrum(const DistortedOperator& op, const SpectralRegion& region,
                                                    const SpectrumOptions& opt = {});
std::vector<DistortedEigenvalue> cluster_in_region(const std::vector<cplx>& ev, const DistortedOperator& op,
                                                   const SpectralRegion& region, const SpectrumOptions& opt = {});

struct ThetaReport {
  std::vector<DistortedEigenvalue> first, second;
  std::vector<std::pair<int, int>> matches;  // index into first, index into second
  double max_distance = 0.0;
  bool same_multiplicities = true;
  int unmatched = 0;
};

ThetaReport theta_independence_check(const Potential& p, const ScalingProfile& sp1, const ScalingProfile& sp2,
                                     const SpectralRegion& region, double h, double L, int n_grid,
                                     double match_tol = 1e-2);

}  // namespace resolab
