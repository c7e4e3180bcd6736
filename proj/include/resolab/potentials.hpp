#pragma once

#include <functional>
#include <string>
#include <vector>

namespace resolab {

enum class Smoothness { piecewise_constant, piecewise_linear, mollified, smooth };

struct Potential {
  double support_lo = -1.0;
  double support_hi = 1.0;
  std::function<double(double)> evaluator;  // only called inside the support
  Smoothness smoothness = Smoothness::piecewise_constant;
  std::vector<double> discontinuities;  // sorted, support ends included
  std::string label;

  double operator()(double x) const {
    if (x < support_lo || x > support_hi) return 0.0;
    return evaluator(x);
  }
  double radius() const;
  double width() const { return support_hi - support_lo; }
};

Potential box(double a, double depth = 1.0);
Potential mollified_box(double a, double depth = 1.0, double mollify_width = 0.1);
Potential gaussian_bump(double a, double depth = 1.0);
Potential table_potential(std::vector<double> x, std::vector<double> v);
Potential load_table(const std::string& path);
Potential zero_potential(double a = 1.0);

double eval_potential(const Potential& p, double x);

// int V and int V^2 by breakpoint-aligned Gauss-Legendre.
double potential_integral(const Potential& p, int power = 1);

// Normalized C-infinity bump CDF on [-1, 1].
double bump_cdf(double u);

double autocorrelation(const Potential& p, double y, int quad_order = 16);
double box_autocorrelation(double a, double y);
std::vector<double> autocorrelation_breaks(const Potential& p);

struct Autocorrelation {
  double half_width = 0.0;
  std::function<double(double)> evaluator;
  double operator()(double y) const { return std::abs(y) > half_width ? 0.0 : evaluator(y); }
};
Autocorrelation make_autocorrelation(const Potential& p, int quad_order = 16);

double counterexample_density(const Potential& p, double x);

}  // namespace resolab
