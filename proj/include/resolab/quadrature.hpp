#pragma once

#include <functional>
#include <vector>

namespace resolab {

struct GaussRule {
  std::vector<double> x;  // on [-1, 1]
  std::vector<double> w;
};

// Newton iteration on P_n; fine up to a few hundred nodes.
GaussRule gauss_legendre(int n);

// Composite rule over [lo, hi] split at the given breakpoints, each piece cut
// into `panels` equal panels of `order` nodes.
void composite_rule(double lo, double hi, const std::vector<double>& breaks, int order, int panels,
                    std::vector<double>& x, std::vector<double>& w);

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const std::vector<double>& breaks, int order, int panels = 1);

// Barycentric weights for interpolation through arbitrary distinct nodes.
std::vector<double> barycentric_weights(const std::vector<double>& t);

// Row of Lagrange basis values l_j(y).
void lagrange_row(const std::vector<double>& t, const std::vector<double>& bw, double y, double* out);

}  // namespace resolab
