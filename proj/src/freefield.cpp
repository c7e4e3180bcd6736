#include "resolab/freefield.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace resolab {

SqrtBranch::SqrtBranch(double lo, double hi) : arg_lo(lo), arg_hi(hi) {
  if (!(lo < 0.0 && hi > 0.0 && hi - lo < 2.0 * pi))
    throw BranchError("invalid branch window");
}

namespace {
// rounding slack so that std::polar(r, arg_lo) stays inside the window
constexpr double slack = 1e-12;
}  // namespace

double SqrtBranch::arg(cplx z) const {
  double a = std::arg(z);
  for (double c : {a, a - 2.0 * pi, a + 2.0 * pi})
    if (c >= arg_lo - slack && c <= arg_hi + slack) return std::clamp(c, arg_lo, arg_hi);
  std::ostringstream os;
  os << "arg(" << z << ") = " << a << " outside [" << arg_lo << ", " << arg_hi << "]";
  throw BranchError(os.str());
}

bool SqrtBranch::contains(cplx z) const {
  double a = std::arg(z);
  for (double c : {a, a - 2.0 * pi, a + 2.0 * pi})
    if (c >= arg_lo - slack && c <= arg_hi + slack) return true;
  return false;
}

SqrtBranch physical_branch() { return SqrtBranch(-0.5, pi); }

SpectralRegion::SpectralRegion(double rmin, double rmax, double th0, double e)
    : branch(-2.0 * th0, e), r_min(rmin), r_max(rmax), theta0(th0), eps(e) {
  if (!(rmin > 0.0 && rmax > rmin)) throw ConfigError("region needs 0 < r_min < r_max");
  if (!(th0 > 0.0 && th0 < pi)) throw ConfigError("theta0 must lie in (0, pi)");
  if (!(e > 0.0 && e < 2.0 * pi - 2.0 * th0)) throw ConfigError("eps must lie in (0, 2pi - 2 theta0)");
}

bool SpectralRegion::contains(cplx z) const {
  double r = std::abs(z);
  if (r < r_min || r > r_max) return false;
  if (!branch.contains(z)) return false;
  double a = branch.arg(z);
  return a > phi_lo() && a < phi_hi();
}

cplx sqrt_branch(cplx z, const SqrtBranch& b) {
  double a = b.arg(z);
  double r = std::sqrt(std::abs(z));
  if (a == pi || a == -pi) return {0.0, a > 0 ? r : -r};
  return std::polar(r, 0.5 * a);
}

cplx free_resolvent_kernel(double x, double y, cplx k, double h) {
  if (std::abs(k) < 1e-300) throw DivisionByZero("free kernel at k = 0");
  return I_unit * std::exp(I_unit * k * std::abs(x - y) / h) / (2.0 * h * k);
}

}  // namespace resolab
