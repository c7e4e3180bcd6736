#include "resolab/counterexample.hpp"

#include <algorithm>
#include <cmath>

#include "resolab/quadrature.hpp"

namespace resolab {

namespace {

std::vector<double> nonneg_breaks(const Potential& pot) {
  std::vector<double> out;
  for (double b : autocorrelation_breaks(pot))
    if (b > 0.0 && b < pot.width()) out.push_back(b);
  return out;
}

// Gauss nodes on [0, b] with pieces split at `breaks` and panels fine enough
// for a phase of xi_max * x.
void oscillatory_rule(double b, const std::vector<double>& breaks, double xi_max, std::vector<double>& x,
                      std::vector<double>& w) {
  x.clear();
  w.clear();
  std::vector<double> cuts{0.0};
  for (double c : breaks)
    if (c > 0.0 && c < b) cuts.push_back(c);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    double len = cuts[i + 1] - cuts[i];
    if (len <= 0.0) continue;
    int panels = 1 + static_cast<int>(std::ceil(xi_max * len / 4.0));
    std::vector<double> px, pw;
    composite_rule(cuts[i], cuts[i + 1], {}, 16, panels, px, pw);
    x.insert(x.end(), px.begin(), px.end());
    w.insert(w.end(), pw.begin(), pw.end());
  }
}

}  // namespace

cplx phi_via_autocorr(const Potential& pot, cplx k, double h) {
  std::vector<double> x, w;
  double xi = 2.0 * std::abs(k) / h;
  oscillatory_rule(pot.width(), nonneg_breaks(pot), xi, x, w);
  Autocorrelation ac = make_autocorrelation(pot);
  cplx s = 0.0;
  for (size_t i = 0; i < x.size(); ++i) s += w[i] * ac(x[i]) * std::exp(2.0 * I_unit * k * x[i] / h);
  return -2.0 * s / std::pow(2.0 * h * k, 2);
}

cplx phi_box_closed_form(double a, cplx k, double h) {
  if (k == cplx(0.0)) throw DivisionByZero("closed form at k = 0");
  return -I_unit * a / (2.0 * k * k * k * h) + (std::exp(4.0 * I_unit * a * k / h) - 1.0) / (8.0 * std::pow(k, 4));
}

DensityTransform::DensityTransform(const std::function<double(double)>& g, double b,
                                   const std::vector<double>& breaks, double xi_max)
    : b_(b) {
  std::vector<double> w;
  oscillatory_rule(b, breaks, xi_max, x_, w);
  wg_.resize(x_.size());
  for (size_t i = 0; i < x_.size(); ++i) {
    double gi = g(x_[i]);
    gmax_ = std::max(gmax_, std::abs(gi));
    wg_[i] = w[i] * gi / (2.0 * pi);
  }
}

cplx DensityTransform::operator()(cplx xi) const {
  cplx s = 0.0;
  for (size_t i = 0; i < x_.size(); ++i) s += wg_[i] * std::exp(I_unit * x_[i] * xi);
  return s;
}

DensityTransform density_transform(const Potential& pot, double xi_max) {
  return DensityTransform([&](double x) { return counterexample_density(pot, x); }, pot.width(), nonneg_breaks(pot),
                          xi_max);
}

cplx dz_phi(const DensityTransform& g, cplx z, double h, const SqrtBranch& b) {
  if (z == cplx(0.0)) throw DivisionByZero("dz_phi at z = 0");
  cplx k = sqrt_branch(z, b);
  return pi / (2.0 * z * z * h * h) * g(2.0 * k / h);
}

cplx dz_phi(const Potential& pot, cplx z, double h, const SqrtBranch& b) {
  cplx k = sqrt_branch(z, b);
  return dz_phi(density_transform(pot, 2.0 * std::abs(k) / h), z, h, b);
}

double paley_wiener_sup(const std::function<double(double)>& g, double b, const std::vector<double>& breaks,
                        double b_prime, double h, int n) {
  DensityTransform F(g, b, breaks, 2.0 / h);
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    double r = 1.0 + double(i) / (n - 1);
    for (int j = 0; j < n; ++j) {
      double a = -0.5 * pi * double(j + 1) / n;
      cplx xi = std::polar(r, a);
      best = std::max(best, std::exp(b_prime * xi.imag() / h) * std::abs(F(xi / h)));
    }
  }
  return best;
}

double paley_wiener_sup(const Potential& pot, double b_prime, double h, int n) {
  return paley_wiener_sup([&](double x) { return counterexample_density(pot, x); }, pot.width(), nonneg_breaks(pot),
                          b_prime, h, n);
}

BlowupScan blowup_scan(const Potential& pot, const std::vector<double>& h_values, double delta,
                       const SpectralRegion& region, const WindowSpec& W, const LocateConfig& cfg) {
  for (size_t i = 1; i < h_values.size(); ++i)
    if (!(h_values[i] < h_values[i - 1])) throw ConfigError("h_values must decrease");
  BlowupScan scan;
  scan.h_values = h_values;
  scan.delta = delta;
  scan.window = W;
  const std::vector<cplx> grid = W.grid();
  for (double h : h_values) {
    ResonanceSet rs = locate_resonances(pot, region, h, cfg);
    BackgroundProfile bp = factor_background(2, pot, rs, grid, cfg);
    DensityTransform g = density_transform(pot, 2.0 * std::sqrt(W.r_hi) / h);
    BlowupRow row{h, 0.0, 0.0, rs.total_multiplicity()};
    for (const auto& s : bp.samples) {
      cplx k = sqrt_branch(s.z, region.branch);
      cplx d3 = s.dz_phi_p + 0.5 * dz_phi(g, s.z, h, region.branch);
      row.weighted_sup_p3 = std::max(row.weighted_sup_p3, h * std::exp(delta * k.imag() / h) * std::abs(d3));
      row.unweighted_sup_p2 = std::max(row.unweighted_sup_p2, h * std::abs(s.dz_phi_p));
    }
    scan.rows.push_back(row);
    scan.weighted_sups.push_back(row.weighted_sup_p3);
  }
  return scan;
}

}  // namespace resolab
