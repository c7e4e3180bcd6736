#include "resolab/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "resolab/quadrature.hpp"

namespace resolab {

namespace {

double smoothstep(double u) { return u * u * u * (10.0 - 15.0 * u + 6.0 * u * u); }
double smoothstep_d(double u) { return 30.0 * u * u * (1.0 - u) * (1.0 - u); }

bool pure_dilation(const ScalingProfile& sp) { return sp.R1 == 0.0; }

}  // namespace

double ScalingProfile::phi(double t) const {
  if (pure_dilation(*this)) return 1.0;
  if (t <= R1) return 0.0;
  if (t >= T_inf) return 1.0;
  return smoothstep((t - R1) / (T_inf - R1));
}

double ScalingProfile::dphi(double t) const {
  if (pure_dilation(*this) || t <= R1 || t >= T_inf) return 0.0;
  return smoothstep_d((t - R1) / (T_inf - R1)) / (T_inf - R1);
}

cplx ScalingProfile::dkappa(double x) const {
  double t = std::abs(x);
  return std::polar(1.0, theta * phi(t)) * cplx(1.0, theta * t * dphi(t));
}

cplx scaling_map(const ScalingProfile& sp, double x) { return std::polar(1.0, sp.theta * sp.phi(std::abs(x))) * x; }

CMatrix DistortedOperator::dense() const {
  int n = size();
  CMatrix A = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) A(i, i) = diag[i];
  for (int i = 0; i + 1 < n; ++i) {
    A(i + 1, i) = lower[i];
    A(i, i + 1) = upper[i];
  }
  return A;
}

DistortedOperator build_distorted(const Potential& p, const ScalingProfile& sp, double h, double L, int n_grid) {
  if (n_grid < 800) throw ConfigError("n_grid must be at least 800");
  if (pure_dilation(sp)) {
    if (potential_integral(p, 2) != 0.0) throw ConfigError("pure dilation mode needs V = 0");
  } else {
    if (!(sp.R1 > p.radius())) throw ConfigError("R1 must exceed the support radius");
    if (!(sp.T_inf > sp.R1)) throw ConfigError("T_inf must exceed R1");
    if (!(L >= 4.0 * sp.T_inf)) throw ConfigError("L must be at least 4 T_inf");
  }
  if (!(sp.eps1 > 0.0 && sp.eps1 < pi / 2.0)) throw ConfigError("eps1 must lie in (0, pi/2)");

  DistortedOperator op;
  op.step = 2.0 * L / n_grid;
  op.theta = sp.theta;
  op.h = h;
  op.profile = sp;
  const double d = op.step;
  const int n = n_grid - 1;
  op.grid.resize(n);
  for (int i = 0; i < n; ++i) op.grid[i] = -L + (i + 1) * d;

  for (double x : op.grid) {
    double t = std::abs(x);
    double a = std::arg(cplx(1.0, sp.theta * t * sp.dphi(t)));
    if (a < 0.0 || a > sp.eps1)
      throw ProfileTooSteep("arg(1 + i theta t phi'(t)) = " + std::to_string(a) + " at t = " + std::to_string(t));
    if (std::abs(sp.dkappa(x)) == 0.0) throw ProfileTooSteep("kappa' vanishes");
  }

  auto a = [&](double x) { return 1.0 / sp.dkappa(x); };
  std::vector<double> breaks = p.discontinuities;
  const double hh = h * h / (d * d);
  op.diag.resize(n);
  op.lower.resize(n > 0 ? n - 1 : 0);
  op.upper.resize(n > 0 ? n - 1 : 0);
  for (int i = 0; i < n; ++i) {
    double x = op.grid[i];
    cplx ai = a(x), am = a(x - 0.5 * d), ap = a(x + 0.5 * d);
    double v = 0.0;
    if (x + 0.5 * d > p.support_lo && x - 0.5 * d < p.support_hi)
      v = integrate([&](double y) { return p(y); }, x - 0.5 * d, x + 0.5 * d, breaks, 8) / d;
    op.diag[i] = hh * ai * (am + ap) + v;
    if (i + 1 < n) op.upper[i] = -hh * ai * ap;
    if (i > 0) op.lower[i - 1] = -hh * ai * am;
  }
  return op;
}

std::vector<cplx> eigenvalues(const DistortedOperator& op) {
  const int n = op.size();
  std::vector<cplx> H(static_cast<size_t>(n) * n, cplx(0.0));
  for (int i = 0; i < n; ++i) H[static_cast<size_t>(i) * n + i] = op.diag[i];
  for (int i = 0; i + 1 < n; ++i) {
    H[static_cast<size_t>(i) * n + i + 1] = op.lower[i];  // column-major: (i+1, i)
    H[static_cast<size_t>(i + 1) * n + i] = op.upper[i];
  }
  std::vector<cplx> w(n);
  cplx zdummy;
  int info = LAPACKE_zhseqr(LAPACK_COL_MAJOR, 'E', 'N', n, 1, n, H.data(), n, w.data(), &zdummy, 1);
  if (info != 0) throw EigenFailure("zhseqr info " + std::to_string(info));
  return w;
}

std::vector<DistortedEigenvalue> cluster_in_region(const std::vector<cplx>& ev, const DistortedOperator& op,
                                                   const SpectralRegion& region, const SpectrumOptions& opt) {
  std::vector<cplx> in;
  for (cplx l : ev)
    if (region.contains(l)) in.push_back(l);
  std::sort(in.begin(), in.end(), [](cplx a, cplx b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });

  const double rad = opt.cluster_factor * op.step * op.step;
  std::vector<int> parent(in.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int i) { return parent[i] == i ? i : parent[i] = find(parent[i]); };
  for (size_t i = 0; i < in.size(); ++i)
    for (size_t j = i + 1; j < in.size(); ++j)
      if (std::abs(in[i] - in[j]) < rad) parent[find(j)] = find(i);

  std::vector<DistortedEigenvalue> out;
  for (size_t i = 0; i < in.size(); ++i) {
    if (find(i) != static_cast<int>(i)) continue;
    cplx sum = 0.0;
    int m = 0;
    for (size_t j = 0; j < in.size(); ++j)
      if (find(j) == static_cast<int>(i)) {
        sum += in[j];
        ++m;
      }
    DistortedEigenvalue e{sum / double(m), m, false};
    double arg = region.branch.arg(e.lambda);
    e.isolated = std::abs(arg + 2.0 * op.theta) >= opt.ray_margin;
    out.push_back(e);
  }
  return out;
}

std::vector<DistortedEigenvalue> distorted_spectrum(const DistortedOperator& op, const SpectralRegion& region,
                                                    const SpectrumOptions& opt) {
  return cluster_in_region(eigenvalues(op), op, region, opt);
}

ThetaReport theta_independence_check(const Potential& p, const ScalingProfile& sp1, const ScalingProfile& sp2,
                                     const SpectralRegion& region, double h, double L, int n_grid,
                                     double match_tol) {
  ThetaReport rep;
  auto isolated = [&](const ScalingProfile& sp) {
    std::vector<DistortedEigenvalue> v;
    for (const auto& e : distorted_spectrum(build_distorted(p, sp, h, L, n_grid), region))
      if (e.isolated) v.push_back(e);
    return v;
  };
  rep.first = isolated(sp1);
  rep.second = isolated(sp2);
  std::vector<bool> used(rep.second.size(), false);
  for (size_t i = 0; i < rep.first.size(); ++i) {
    int best = -1;
    double bd = match_tol;
    for (size_t j = 0; j < rep.second.size(); ++j) {
      double dd = std::abs(rep.first[i].lambda - rep.second[j].lambda);
      if (!used[j] && dd < bd) {
        bd = dd;
        best = static_cast<int>(j);
      }
    }
    if (best < 0) {
      ++rep.unmatched;
      continue;
    }
    used[best] = true;
    rep.matches.push_back({static_cast<int>(i), best});
    rep.max_distance = std::max(rep.max_distance, bd);
    if (rep.first[i].cluster_size != rep.second[best].cluster_size) rep.same_multiplicities = false;
  }
  for (bool u : used)
    if (!u) ++rep.unmatched;
  return rep;
}

}  // namespace resolab
