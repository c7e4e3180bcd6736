#include "resolab/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include "resolab/common.hpp"
#include "resolab/quadrature.hpp"

namespace resolab {

namespace {

double bump_kernel(double t) {
  double s = 1.0 - t * t;
  return s <= 0.0 ? 0.0 : std::exp(-1.0 / s);
}

double bump_mass() {
  static const double m = integrate(bump_kernel, -1.0, 1.0, {}, 64, 2);
  return m;
}

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end(), [](double a, double b) { return std::abs(a - b) < 1e-14; }),
          v.end());
  return v;
}

}  // namespace

double Potential::radius() const { return std::max(std::abs(support_lo), std::abs(support_hi)); }

double bump_cdf(double u) {
  if (u <= -1.0) return 0.0;
  if (u >= 1.0) return 1.0;
  if (u > 0.0) return 1.0 - bump_cdf(-u);
  return integrate(bump_kernel, -1.0, u, {}, 64, 1) / bump_mass();
}

Potential box(double a, double depth) {
  Potential p;
  p.support_lo = -a;
  p.support_hi = a;
  p.evaluator = [depth](double) { return depth; };
  p.smoothness = Smoothness::piecewise_constant;
  p.discontinuities = {-a, a};
  p.label = "box";
  return p;
}

Potential zero_potential(double a) {
  Potential p = box(a, 0.0);
  p.label = "zero";
  return p;
}

Potential mollified_box(double a, double depth, double mollify_width) {
  double r = 0.5 * mollify_width;
  if (!(r > 0.0 && r < a)) throw ConfigError("mollify_width must lie in (0, 2a)");
  Potential p;
  p.support_lo = -a - r;
  p.support_hi = a + r;
  p.evaluator = [a, r, depth](double x) {
    return depth * (bump_cdf((x + a) / r) - bump_cdf((x - a) / r));
  };
  p.smoothness = Smoothness::mollified;
  p.discontinuities = {-a - r, -a + r, a - r, a + r};
  p.label = "mollified_box";
  return p;
}

Potential gaussian_bump(double a, double depth) {
  Potential p;
  p.support_lo = -a;
  p.support_hi = a;
  p.evaluator = [a, depth](double x) { return depth * std::exp(1.0) * bump_kernel(x / a); };
  p.smoothness = Smoothness::smooth;
  p.discontinuities = {-a, a};
  p.label = "gaussian_bump";
  return p;
}

Potential table_potential(std::vector<double> x, std::vector<double> v) {
  if (x.size() < 2 || x.size() != v.size()) throw ConfigError("table potential needs >= 2 rows");
  for (size_t i = 1; i < x.size(); ++i)
    if (!(x[i] > x[i - 1])) throw ConfigError("table abscissae must increase strictly");
  auto xs = std::make_shared<std::vector<double>>(x);
  auto vs = std::make_shared<std::vector<double>>(v);
  Potential p;
  p.support_lo = x.front();
  p.support_hi = x.back();
  p.evaluator = [xs, vs](double t) {
    auto it = std::upper_bound(xs->begin(), xs->end(), t);
    size_t j = std::clamp<size_t>(it - xs->begin(), 1, xs->size() - 1);
    double x0 = (*xs)[j - 1], x1 = (*xs)[j];
    double s = (t - x0) / (x1 - x0);
    return (1.0 - s) * (*vs)[j - 1] + s * (*vs)[j];
  };
  p.smoothness = Smoothness::piecewise_linear;
  p.discontinuities = x;
  p.label = "table";
  return p;
}

Potential load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open table " + path);
  std::vector<double> x, v;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double a, b;
    if (!(ss >> a >> b)) {
      if (x.empty()) continue;  // header row
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected two numbers");
    }
    x.push_back(a);
    v.push_back(b);
  }
  return table_potential(x, v);
}

double eval_potential(const Potential& p, double x) { return p(x); }

double potential_integral(const Potential& p, int power) {
  return integrate([&](double x) { return std::pow(p(x), power); }, p.support_lo, p.support_hi,
                   p.discontinuities, 16, p.smoothness == Smoothness::piecewise_constant ? 2 : 12);
}

double autocorrelation(const Potential& p, double y, int quad_order) {
  double lo = std::max(p.support_lo, p.support_lo + y);
  double hi = std::min(p.support_hi, p.support_hi + y);
  if (!(hi > lo)) return 0.0;
  std::vector<double> br = p.discontinuities;
  for (double d : p.discontinuities) br.push_back(d + y);
  int panels = p.smoothness == Smoothness::piecewise_constant ? 1 : 6;
  return integrate([&](double x) { return p(x) * p(x - y); }, lo, hi, br, quad_order, panels);
}

double box_autocorrelation(double a, double y) { return std::max(2.0 * a - std::abs(y), 0.0); }

std::vector<double> autocorrelation_breaks(const Potential& p) {
  std::vector<double> out;
  for (double a : p.discontinuities)
    for (double b : p.discontinuities) out.push_back(a - b);
  return sorted_unique(out);
}

Autocorrelation make_autocorrelation(const Potential& p, int quad_order) {
  Autocorrelation ac;
  ac.half_width = p.width();
  ac.evaluator = [p, quad_order](double y) { return autocorrelation(p, y, quad_order); };
  return ac;
}

double counterexample_density(const Potential& p, double x) {
  double b = p.width();
  if (x < 0.0 || x > b) return 0.0;
  const double step = 1e-5;
  auto even = [&](double t) { return autocorrelation(p, t) + autocorrelation(p, -t); };
  // derivative of the even part; one-sided next to kinks of the autocorrelation
  double left_gap = 1e300, right_gap = 1e300;
  bool at_kink = false;
  for (double k : autocorrelation_breaks(p)) {
    if (std::abs(k - x) < 1e-14) at_kink = true;
    else if (k < x) left_gap = std::min(left_gap, x - k);
    else right_gap = std::min(right_gap, k - x);
  }
  auto forward = [&] { return (-3.0 * even(x) + 4.0 * even(x + step) - even(x + 2.0 * step)) / (2.0 * step); };
  auto backward = [&] { return (3.0 * even(x) - 4.0 * even(x - step) + even(x - 2.0 * step)) / (2.0 * step); };
  double d;
  if (at_kink) d = x < b ? forward() : backward();
  else if (left_gap > step && right_gap > step) d = (even(x + step) - even(x - step)) / (2.0 * step);
  else if (left_gap <= step) d = forward();
  else d = backward();
  return 1.5 * even(x) + 0.5 * x * d;
}

}  // namespace resolab
