#include "resolab/zeta.hpp"

#include <algorithm>
#include <cmath>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "resolab/parallel.hpp"
#include "resolab/quadrature.hpp"

namespace resolab {

std::vector<double> grid_spectrum(const Potential& pot, double h, double eps, const HeatGrid& grid) {
  const int n = grid.size();
  const double d = grid.step;
  std::vector<double> diag(n), off(n > 0 ? n - 1 : 0, -h * h / (d * d));
  for (int i = 0; i < n; ++i) {
    double x = -grid.L + (i + 1) * d;
    double v = 0.0;
    if (eps != 0.0 && x + 0.5 * d > pot.support_lo && x - 0.5 * d < pot.support_hi)
      v = integrate([&](double y) { return pot(y); }, x - 0.5 * d, x + 0.5 * d, pot.discontinuities, 8) / d;
    diag[i] = 2.0 * h * h / (d * d) + eps * v;
  }
  int info = LAPACKE_dsterf(n, diag.data(), off.data());
  if (info != 0) throw EigenFailure("dsterf info " + std::to_string(info));
  return diag;
}

HeatTraceEngine::HeatTraceEngine(const Potential& pot, double h, int p_max, const HeatGrid& grid, double delta,
                                 int threads)
    : h_(h), p_max_(p_max), grid_(grid), delta_(delta) {
  if (p_max < 1 || p_max > 4) throw ConfigError("heat traces support 1 <= p <= 4");
  if (grid.size() < 16) throw ConfigError("heat grid too small");
  if (p_max >= 2) eps_ = {-delta, -0.5 * delta, 0.5 * delta, delta};
  if (p_max >= 4) {
    eps_.insert(eps_.begin(), -2.0 * delta);
    eps_.push_back(2.0 * delta);
  }
  std::vector<std::vector<double>> spectra(eps_.size() + 2);
  std::vector<double> eps_all{0.0, 1.0};
  eps_all.insert(eps_all.end(), eps_.begin(), eps_.end());
  parallel_for(static_cast<int>(eps_all.size()), threads,
               [&](int i) { spectra[i] = grid_spectrum(pot, h, eps_all[i], grid); });
  lam0_ = spectra[0];
  lambda_min_ = 1e300;
  for (const auto& s : spectra) lambda_min_ = std::min(lambda_min_, s.front());
  auto diff = [&](const std::vector<double>& s) {
    std::vector<double> out(s.size());
    for (size_t i = 0; i < s.size(); ++i) out[i] = s[i] - lam0_[i];
    return out;
  };
  d1_ = diff(spectra[1]);
  for (size_t k = 0; k < eps_.size(); ++k) d_.push_back(diff(spectra[k + 2]));
}

double HeatTraceEngine::trace(double t, int p) const {
  if (p < 1 || p > p_max_) throw ConfigError("trace order outside the engine range");
  auto at = [&](double e) {
    for (size_t k = 0; k < eps_.size(); ++k)
      if (eps_[k] == e) return static_cast<int>(k);
    return -1;
  };
  const double dl = delta_;
  const int m1 = at(-dl), mh = at(-0.5 * dl), ph = at(0.5 * dl), p1 = at(dl), m2 = at(-2.0 * dl), p2 = at(2.0 * dl);
  double sum = 0.0;
  for (size_t i = 0; i < lam0_.size(); ++i) {
    double e0 = std::exp(-t * lam0_[i]);
    if (e0 == 0.0) break;
    auto g = [&](int k) { return std::expm1(-t * d_[k][i]); };
    double v = std::expm1(-t * d1_[i]);
    if (p >= 2) {
      auto D1 = [&](int a, int b, double s) { return (g(b) - g(a)) / (2.0 * s); };
      v -= (4.0 * D1(mh, ph, 0.5 * dl) - D1(m1, p1, dl)) / 3.0;
    }
    if (p >= 3) {
      auto D2 = [&](int a, int b, double s) { return (g(b) + g(a)) / (s * s); };
      v -= 0.5 * (4.0 * D2(mh, ph, 0.5 * dl) - D2(m1, p1, dl)) / 3.0;
    }
    if (p >= 4) {
      auto D3 = [&](int a2, int a1, int b1, int b2, double s) {
        return (g(b2) - 2.0 * g(b1) + 2.0 * g(a1) - g(a2)) / (2.0 * s * s * s);
      };
      v -= (4.0 * D3(m1, mh, ph, p1, 0.5 * dl) - D3(m2, m1, p1, p2, dl)) / 3.0 / 6.0;
    }
    sum += e0 * v;
  }
  return sum;
}

double regularized_heat_trace(const Potential& pot, double t, double h, int p_order, const HeatGrid& grid) {
  if (t < 1e-3) throw ConfigError("t below the discretization floor 1e-3");
  if (grid.L < 8.0 * pot.radius() + 4.0 * std::sqrt(t) * h) throw ConfigError("heat grid box too small for t");
  HeatTraceEngine a(pot, h, p_order, grid);
  HeatGrid big = grid;
  big.L = 1.25 * grid.L;
  HeatTraceEngine b(pot, h, p_order, big);
  double ta = a.trace(t, p_order), tb = b.trace(t, p_order);
  if (std::abs(ta - tb) > 1e-6 * std::abs(ta))
    throw GridTooSmall("boundary sensitivity " + std::to_string(std::abs(ta - tb)));
  return ta;
}

HeatTraceSamples sample_heat_trace(const HeatTraceEngine& eng, int p_order, double t_lo, double t_hi, int count) {
  if (!(t_lo >= 1e-3 && t_hi > t_lo && count >= 2)) throw ConfigError("bad heat trace window");
  HeatTraceSamples s;
  s.p_order = p_order;
  s.h = eng.h();
  s.grid = eng.grid();
  for (int i = 0; i < count; ++i) {
    double t = t_lo * std::pow(t_hi / t_lo, double(i) / (count - 1));
    s.t_values.push_back(t);
    s.traces.push_back(eng.trace(t, p_order));
  }
  return s;
}

double HeatExpansion::operator()(double t) const {
  double s = 0.0;
  for (int j = 0; j < J; ++j) s += a[j] * std::pow(t, 0.5 * j - 0.5);
  return s;
}

HeatExpansion fit_heat_expansion(const HeatTraceSamples& samples, int J) {
  const int n = static_cast<int>(samples.t_values.size());
  if (J < 4) throw ConfigError("J must be at least 4");
  if (n < 3 * J) throw ConfigError("need at least 3J samples");
  HeatExpansion ex;
  ex.J = J;
  ex.a.assign(J, 0.0);
  Eigen::MatrixXd A(n, J);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < J; ++j) A(i, j) = std::pow(samples.t_values[i], 0.5 * j - 0.5);
    y(i) = samples.traces[i];
  }
  if (y.norm() == 0.0) return ex;
  Eigen::VectorXd scale = A.colwise().norm().transpose();
  Eigen::MatrixXd As = A * scale.cwiseInverse().asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(As, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  ex.condition = sv(0) / sv(J - 1);
  if (!(ex.condition <= 1e10)) throw IllConditionedFit("condition number " + std::to_string(ex.condition));
  Eigen::VectorXd c = svd.solve(y).cwiseQuotient(scale);
  for (int j = 0; j < J; ++j) ex.a[j] = c(j);
  ex.fit_residual = (A * c - y).norm() / y.norm();
  return ex;
}

namespace {

// Lanczos, g = 7, for Re s >= 0.5
cplx lanczos_gamma(cplx s) {
  static const double coef[9] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                                 771.32342877765313,   -176.61502916214059,   12.507343278686905,
                                 -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  s -= 1.0;
  cplx x = coef[0];
  for (int i = 1; i < 9; ++i) x += coef[i] / (s + double(i));
  cplx t = s + 7.5;
  return std::sqrt(2.0 * pi) * std::pow(t, s + 0.5) * std::exp(-t) * x;
}

}  // namespace

cplx rgamma(cplx s) {
  if (s.real() < 0.5) return std::sin(pi * s) / pi * lanczos_gamma(1.0 - s);
  return 1.0 / lanczos_gamma(s);
}

ZetaRoute::ZetaRoute(const HeatTraceEngine& eng, int p_order, const HeatExpansion& ex, const ZetaConfig& cfg)
    : eng_(eng), p_(p_order), ex_(ex), cfg_(cfg), large_end_(cfg.t_cut) {
  if (!(cfg.t_min > 0.0 && cfg.t_cut > cfg.t_min)) throw ConfigError("need 0 < t_min < t_cut");
  if (ex.J < 2) throw ConfigError("expansion too short");
  GaussRule gr = gauss_legendre(16);
  const double u0 = std::log(cfg.t_min), u1 = std::log(cfg.t_cut);
  const double du = (u1 - u0) / cfg.small_t_panels;
  for (int k = 0; k < cfg.small_t_panels; ++k)
    for (size_t q = 0; q < gr.x.size(); ++q) {
      double u = u0 + du * (k + 0.5 * (gr.x[q] + 1.0));
      double t = std::exp(u);
      small_.push_back({t, 0.5 * du * gr.w[q] * t, eng.trace(t, p_order) - ex(t)});
    }
  b_tmin_ = eng.trace(cfg.t_min, p_order) - ex(cfg.t_min);
}

double ZetaRoute::t_max(cplx z) const {
  double gap = eng_.lambda_min() - z.real();
  if (!(gap > 0.0)) throw ConfigError("Re z must lie below the grid spectrum");
  return cfg_.t_cut - std::log(cfg_.tail_tol) / gap;
}

const std::vector<ZetaRoute::Node>& ZetaRoute::large_t_nodes(double tmax) const {
  // unit panels from t_cut, extended on demand
  if (large_end_ < tmax) {
    GaussRule gr = gauss_legendre(16);
    while (large_end_ < tmax) {
      double a = large_end_, b = large_end_ + 1.0;
      for (size_t q = 0; q < gr.x.size(); ++q) {
        double t = a + 0.5 * (b - a) * (gr.x[q] + 1.0);
        large_.push_back({t, 0.5 * (b - a) * gr.w[q], eng_.trace(t, p_)});
      }
      large_end_ = b;
    }
  }
  return large_;
}

cplx ZetaRoute::large_t_integral(cplx s, cplx z) const {
  double tmax = t_max(z);
  std::lock_guard<std::mutex> lock(mu_);
  const auto& nodes = large_t_nodes(tmax);
  cplx acc = 0.0;
  for (const auto& n : nodes) {
    if (n.t > tmax + 1.0) break;
    acc += n.w * n.lu * std::exp(n.t * z + (s - 1.0) * std::log(n.t));
  }
  return acc;
}

cplx ZetaRoute::small_t_integral(cplx s, cplx z) const {
  cplx acc = 0.0;
  for (const auto& n : small_) acc += n.w * n.lu * std::exp(n.t * z + (s - 1.0) * std::log(n.t));
  // b_J below t_min modeled by the next lattice power
  const double aJ = 0.5 * ex_.J - 0.5;
  const cplx x = z * cfg_.t_min;
  cplx term = 1.0, ser = 0.0;
  for (int l = 0; l < 200; ++l) {
    if (l > 0) term *= x / double(l);
    cplx c = term / (aJ + s + double(l));
    ser += c;
    if (std::abs(c) < 1e-16 * std::abs(ser) && l > std::abs(x)) break;
  }
  return acc + b_tmin_ * std::exp(s * std::log(cfg_.t_min)) * ser;
}

cplx ZetaRoute::series(cplx s, cplx z, bool derivative_at_zero) const {
  const double T = cfg_.t_cut;
  const cplx x = z * T;
  cplx total = 0.0;
  for (int j = 0; j < ex_.J; ++j) {
    if (ex_.a[j] == 0.0) continue;
    const double alpha = 0.5 * j - 0.5;
    cplx term = 1.0, sum = 0.0;
    bool done = false;
    for (int l = 0; l < 200; ++l) {
      if (l > 0) term *= x / double(l);
      const double beta = alpha + l;
      cplx c;
      if (derivative_at_zero)
        c = (beta == 0.0) ? term * (euler_gamma + std::log(T)) : term / beta;
      else
        c = term * std::exp(s * std::log(T)) / (s + beta);
      sum += c;
      if (l > std::abs(x) && std::abs(c) < 1e-14 * std::max(std::abs(sum), 1e-300)) {
        done = true;
        break;
      }
    }
    if (!done) throw SeriesDivergence("z-series not converged by l = 200");
    total += ex_.a[j] * std::pow(T, alpha) * sum;
  }
  return total;
}

ZetaEvaluation ZetaRoute::eval(cplx s, cplx z) const {
  ZetaEvaluation e;
  e.s = s;
  e.z = z;
  if (s == cplx(0.0)) {
    // only the simple pole of the t^0 term survives 1/Gamma(0) = 0
    e.I_term = e.II_term = 0.0;
    e.III_term = ex_.J > 1 ? ex_.a[1] : 0.0;
  } else {
    cplx rg = rgamma(s);
    e.I_term = rg * large_t_integral(s, z);
    e.II_term = rg * small_t_integral(s, z);
    e.III_term = rg * series(s, z, false);
  }
  e.value = e.I_term + e.II_term + e.III_term;
  return e;
}

cplx ZetaRoute::ds_at_zero(cplx z) const {
  return large_t_integral(0.0, z) + small_t_integral(0.0, z) + series(0.0, z, true);
}

ZetaEvaluation zeta_eval(cplx s, cplx z, const ZetaRoute& route) { return route.eval(s, z); }

cplx dpzeta(cplx z, const ZetaRoute& route) { return std::exp(-route.ds_at_zero(z)); }

}  // namespace resolab
