#include "resolab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "resolab/common.hpp"

namespace resolab {

namespace {

void legendre(int n, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  p = p1;
  dp = n * (x * p1 - p0) / (x * x - 1.0);
}

GaussRule compute_gl(int n) {
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double p, dp;
    for (int it = 0; it < 100; ++it) {
      legendre(n, x, p, dp);
      double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre(n, x, p, dp);
    r.x[i] = -x;
    r.x[n - 1 - i] = x;
    r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  if (n % 2 == 1) r.x[n / 2] = 0.0;
  return r;
}

}  // namespace

GaussRule gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  GaussRule r = n == 1 ? GaussRule{{0.0}, {2.0}} : compute_gl(n);
  cache.emplace(n, r);
  return r;
}

void composite_rule(double lo, double hi, const std::vector<double>& breaks, int order, int panels,
                    std::vector<double>& x, std::vector<double>& w) {
  std::vector<double> cuts{lo};
  for (double b : breaks)
    if (b > lo && b < hi) cuts.push_back(b);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  GaussRule g = gauss_legendre(order);
  x.clear();
  w.clear();
  for (size_t p = 0; p + 1 < cuts.size(); ++p) {
    double a = cuts[p], b = cuts[p + 1];
    double len = (b - a) / panels;
    for (int q = 0; q < panels; ++q) {
      double pa = a + q * len, pb = (q + 1 == panels) ? b : a + (q + 1) * len;
      double c = 0.5 * (pa + pb), r = 0.5 * (pb - pa);
      for (int i = 0; i < order; ++i) {
        x.push_back(c + r * g.x[i]);
        w.push_back(r * g.w[i]);
      }
    }
  }
}

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const std::vector<double>& breaks, int order, int panels) {
  if (!(hi > lo)) return 0.0;
  std::vector<double> x, w;
  composite_rule(lo, hi, breaks, order, panels, x, w);
  double s = 0.0;
  for (size_t i = 0; i < x.size(); ++i) s += w[i] * f(x[i]);
  return s;
}

std::vector<double> barycentric_weights(const std::vector<double>& t) {
  size_t n = t.size();
  std::vector<double> bw(n, 1.0);
  for (size_t j = 0; j < n; ++j)
    for (size_t k = 0; k < n; ++k)
      if (k != j) bw[j] /= (t[j] - t[k]);
  return bw;
}

void lagrange_row(const std::vector<double>& t, const std::vector<double>& bw, double y, double* out) {
  size_t n = t.size();
  for (size_t j = 0; j < n; ++j) {
    if (y == t[j]) {
      for (size_t k = 0; k < n; ++k) out[k] = (k == j) ? 1.0 : 0.0;
      return;
    }
  }
  double s = 0.0;
  for (size_t j = 0; j < n; ++j) {
    out[j] = bw[j] / (y - t[j]);
    s += out[j];
  }
  for (size_t j = 0; j < n; ++j) out[j] /= s;
}

const char* error_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Branch: return "BranchError";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::EigenFailure: return "EigenFailure";
    case ErrorKind::SingularShift: return "SingularShift";
    case ErrorKind::ZeroOnPath: return "ZeroOnPath";
    case ErrorKind::NonIntegerWinding: return "NonIntegerWinding";
    case ErrorKind::BoundaryZero: return "BoundaryZero";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::PathTooCloseToResonance: return "PathTooCloseToResonance";
    case ErrorKind::ProfileTooSteep: return "ProfileTooSteep";
    case ErrorKind::RealResonanceOnGrid: return "RealResonanceOnGrid";
    case ErrorKind::IllConditionedFit: return "IllConditionedFit";
    case ErrorKind::SeriesDivergence: return "SeriesDivergence";
    case ErrorKind::GridTooSmall: return "GridTooSmall";
    case ErrorKind::Config: return "ConfigError";
  }
  return "Error";
}

}  // namespace resolab
