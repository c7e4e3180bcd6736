#pragma once

#include <vector>

#include "resolab/determinants.hpp"
#include "resolab/freefield.hpp"

namespace resolab {

struct Resonance {
  cplx w;
  int multiplicity = 1;
  double residual = 0.0;  // |det1(w)|
};

struct ResonanceSet {
  std::vector<Resonance> resonances;
  SpectralRegion region;
  double h = 1.0;
  int boundary_winding = 0;
  double boundary_max = 0.0;  // max |det1| on the region boundary
  int total_multiplicity() const;
};

struct LocateConfig {
  DetConfig det;
  int edge_samples = 8;
  int max_depth = 40;
  double min_box = 1e-8;
  double boundary_tol = 1e-8;
  int threads = 1;
};

int winding_number(const LogDetPath& path_log);

ResonanceSet locate_resonances(const Potential& p, const SpectralRegion& region, double h, const LocateConfig& cfg);

// Winding of det1 around the boundary of the polar box [r0,r1] x [a0,a1],
// sampled with `samples` points per edge.
int box_winding(const DeterminantEvaluator& ev, double r0, double r1, double a0, double a1, int samples);

struct BackgroundSample {
  cplx z;
  cplx phi_p;
  cplx dz_phi_p;
};

struct BackgroundProfile {
  std::vector<BackgroundSample> samples;
  int p_order = 1;
  double h = 1.0;
  cplx branch_anchor;
};

BackgroundProfile factor_background(int p_order, const Potential& pot, const ResonanceSet& rs,
                                    const std::vector<cplx>& sample_path, const LocateConfig& cfg);

// Same for several orders from one pass of assemblies.
std::vector<BackgroundProfile> factor_background(const std::vector<int>& p_orders, const Potential& pot,
                                                 const ResonanceSet& rs, const std::vector<cplx>& sample_path,
                                                 const LocateConfig& cfg);

// Polar grid {r e^{i a}} traversed in serpentine order.
struct WindowSpec {
  double r_lo = 1.0, r_hi = 4.0;
  double arg_lo = -0.4, arg_hi = 0.0;
  int n_r = 20, n_arg = 20;
  std::vector<cplx> grid() const;
  std::vector<cplx> boundary(int per_edge) const;
  bool operator==(const WindowSpec&) const = default;
};

struct ScalingRow {
  double h;
  double sup;           // sup_W |dz phi_p|
  double weighted_sup;  // sup_W |h e^{delta Im z^(1/2)/h} dz phi_p|
  int resonances;
};

std::vector<ScalingRow> scaling_study(int p_order, const Potential& pot, const SpectralRegion& region,
                                      const std::vector<double>& h_list, const WindowSpec& W, double delta,
                                      const LocateConfig& cfg);

}  // namespace resolab
