#include "resolab/ssf.hpp"

#include <algorithm>
#include <cmath>

#include <spdlog/spdlog.h>

#include "resolab/parallel.hpp"

namespace resolab {

double ssf_derivative(const DeterminantEvaluator& ev, int p_order, double lambda, double eps) {
  const double d = std::max(1e-5, eps / 10.0);
  cplx a(lambda - d, eps), b(lambda + d, eps);
  LogDetPath lp = track_log([&](cplx z) { return ev.detp(z, p_order); }, {a, b}, 1e-300);
  return -(lp.log_values.back() - lp.log_values.front()).imag() / (pi * 2.0 * d);
}

double ssf_derivative(int p_order, const Potential& pot, double lambda, double h, double eps, const DetConfig& cfg) {
  DeterminantEvaluator ev(pot, h, cfg);
  return ssf_derivative(ev, p_order, lambda, eps);
}

SSFProfile ssf_profile(int p_order, const Potential& pot, const std::vector<double>& lambdas, double h, double eps,
                       const DetConfig& cfg, bool extrapolate, int threads) {
  SSFProfile prof;
  prof.lambdas = lambdas;
  prof.eps_boundary = eps;
  prof.p_order = p_order;
  prof.h = h;
  for (size_t i = 1; i < lambdas.size(); ++i)
    if (!(lambdas[i] > lambdas[i - 1])) throw ConfigError("lambda grid must be increasing");
  DeterminantEvaluator ev(pot, h, cfg);
  if (cfg.nystrom.adaptive && !lambdas.empty())
    ev.calibrate({cplx(lambdas.front(), eps), cplx(lambdas.back(), eps)});
  prof.xi_prime.resize(lambdas.size());
  parallel_for(static_cast<int>(lambdas.size()), threads, [&](int i) {
    double v = ssf_derivative(ev, p_order, lambdas[i], eps);
    if (extrapolate) v = 2.0 * v - ssf_derivative(ev, p_order, lambdas[i], 2.0 * eps);
    prof.xi_prime[i] = v;
  });
  return prof;
}

double lorentzian_sum(const ResonanceSet& rs, double lambda) {
  double s = 0.0;
  for (const auto& r : rs.resonances) {
    if (r.w.imag() == 0.0) continue;
    s -= r.multiplicity * r.w.imag() / (pi * std::norm(lambda - r.w));
  }
  return s;
}

BreitWignerDecomposition breit_wigner_decompose(const SSFProfile& profile, const ResonanceSet& rs) {
  if (!profile.lambdas.empty()) {
    double lo = profile.lambdas.front(), hi = profile.lambdas.back();
    for (const auto& r : rs.resonances)
      if (std::abs(r.w.imag()) <= 1e-12 * std::max(1.0, std::abs(r.w)) && r.w.real() >= lo && r.w.real() <= hi)
        throw RealResonanceOnGrid("real resonance at " + std::to_string(r.w.real()));
  }
  BreitWignerDecomposition bw;
  bw.resonances_used = rs;
  for (size_t i = 0; i < profile.lambdas.size(); ++i) {
    double l = lorentzian_sum(rs, profile.lambdas[i]);
    bw.lorentzian_part.push_back(l);
    bw.background_part.push_back(profile.xi_prime[i] - l);
  }
  return bw;
}

namespace {

struct State {
  cplx u, du;
};

// u'' = q(x) u with q = (V - lambda) / h^2, from x0 to x1 in steps <= hmax.
State propagate(const Potential& pot, double lambda, double h, State s, double x0, double x1, double hmax) {
  const double h2 = h * h;
  auto q = [&](double x) { return (pot(x) - lambda) / h2; };
  std::vector<double> cuts{x0};
  for (double b : pot.discontinuities)
    if ((b - x0) * (b - x1) < 0.0) cuts.push_back(b);
  cuts.push_back(x1);
  if (x1 < x0) std::sort(cuts.begin() + 1, cuts.end() - 1, std::greater<double>());
  else std::sort(cuts.begin() + 1, cuts.end() - 1);
  for (size_t c = 0; c + 1 < cuts.size(); ++c) {
    double a = cuts[c], b = cuts[c + 1];
    int n = std::max(1, static_cast<int>(std::ceil(std::abs(b - a) / hmax)));
    double dx = (b - a) / n;
    // one-sided limits at the piece ends
    double in = 1e-13 * std::max(1.0, std::abs(a) + std::abs(b)) * (dx > 0 ? 1.0 : -1.0);
    for (int i = 0; i < n; ++i) {
      double x = a + i * dx;
      double xa = (i == 0) ? x + in : x;
      double xb = (i == n - 1) ? b - in : x + dx;
      double qa = q(xa), qm = q(x + 0.5 * dx), qb = q(xb);
      cplx k1u = s.du, k1d = qa * s.u;
      cplx k2u = s.du + 0.5 * dx * k1d, k2d = qm * (s.u + 0.5 * dx * k1u);
      cplx k3u = s.du + 0.5 * dx * k2d, k3d = qm * (s.u + 0.5 * dx * k2u);
      cplx k4u = s.du + dx * k3d, k4d = qb * (s.u + dx * k3u);
      s.u += dx / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
      s.du += dx / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
    }
  }
  return s;
}

}  // namespace

ScatteringData scattering_data(const Potential& pot, double lambda, double h) {
  if (!(lambda > 0.0)) throw ConfigError("scattering matrix needs lambda > 0");
  ScatteringData out;
  if (h < 0.05) {
    out.stiff = true;
    spdlog::warn("StiffnessWarning: h = {} below 0.05", h);
  }
  const double kap = std::sqrt(lambda) / h;
  const double lo = pot.support_lo, hi = pot.support_hi;
  const double hmax = 1e-3 * h;
  const cplx ik = I_unit * kap;

  // incoming from the left: t e^{ikx} for x > hi
  State s = propagate(pot, lambda, h, {std::exp(ik * hi), ik * std::exp(ik * hi)}, hi, lo, hmax);
  cplx A = (ik * s.u + s.du) / (2.0 * ik) * std::exp(-ik * lo);
  cplx B = (ik * s.u - s.du) / (2.0 * ik) * std::exp(ik * lo);
  out.t = 1.0 / A;
  out.r_left = B / A;

  // incoming from the right: t e^{-ikx} for x < lo
  State s2 = propagate(pot, lambda, h, {std::exp(-ik * lo), -ik * std::exp(-ik * lo)}, lo, hi, hmax);
  cplx C = (ik * s2.u - s2.du) / (2.0 * ik) * std::exp(ik * hi);
  cplx D = (ik * s2.u + s2.du) / (2.0 * ik) * std::exp(-ik * hi);
  out.r_right = D / C;

  out.S << out.t, out.r_right, out.r_left, 1.0 / C;
  return out;
}

Eigen::Matrix2cd scattering_matrix(const Potential& pot, double lambda, double h) {
  return scattering_data(pot, lambda, h).S;
}

BirmanKreinReport birman_krein_check(const Potential& pot, const std::vector<double>& lambda_grid, double h,
                                     double eps, const DetConfig& cfg, int threads) {
  BirmanKreinReport rep;
  rep.lambdas = lambda_grid;
  SSFProfile prof = ssf_profile(1, pot, lambda_grid, h, eps, cfg, false, threads);
  rep.xi_prime = prof.xi_prime;
  rep.darg_det_s.resize(lambda_grid.size());
  const double d = 1e-4;
  parallel_for(static_cast<int>(lambda_grid.size()), threads, [&](int i) {
    double l = lambda_grid[i];
    cplx a = scattering_matrix(pot, l - d, h).determinant();
    cplx b = scattering_matrix(pot, l + d, h).determinant();
    rep.darg_det_s[i] = std::arg(b / a) / (2.0 * d);
  });
  for (size_t i = 0; i < lambda_grid.size(); ++i) {
    rep.max_abs_xi = std::max(rep.max_abs_xi, std::abs(rep.xi_prime[i]));
    rep.max_deviation = std::max(rep.max_deviation, std::abs(-pi * rep.xi_prime[i] + 0.5 * rep.darg_det_s[i]));
  }
  return rep;
}

}  // namespace resolab
