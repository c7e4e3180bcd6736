#include "resolab/determinants.hpp"

#include <cmath>
#include <functional>

#include <spdlog/spdlog.h>

namespace resolab {

namespace {

cplx det_shifted(const CMatrix& M) {
  CMatrix A = M;
  A.diagonal().array() += 1.0;
  return Eigen::PartialPivLU<CMatrix>(A).determinant();
}

cplx weierstrass_product(const CMatrix& M, int p) {
  Eigen::ComplexEigenSolver<CMatrix> es(M, false);
  if (es.info() != Eigen::Success) throw EigenFailure("dense eigensolver did not converge");
  cplx logsum = 0.0, prod = 1.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    cplx l = es.eigenvalues()[i];
    prod *= 1.0 + l;
    cplx lj = 1.0;
    for (int j = 1; j < p; ++j) {
      lj *= l;
      logsum += (j % 2 ? -1.0 : 1.0) * lj / double(j);
    }
  }
  return prod * std::exp(logsum);
}

Eigen::PartialPivLU<CMatrix> shifted_lu(const CMatrix& A, cplx z) {
  CMatrix S = A;
  S.diagonal().array() -= z;
  Eigen::PartialPivLU<CMatrix> lu(S);
  if (!(lu.rcond() > 1e-13)) throw SingularShift("shifted matrix is singular");
  return lu;
}

}  // namespace

cplx det1(const KernelMatrix& M) {
  cplx d = det_shifted(M.matrix);
  for (const CMatrix& B : M.volterra) d /= det_shifted(B);
  return d;
}

cplx detp_weierstrass(const KernelMatrix& M, int p) {
  if (p < 1) throw ConfigError("p must be >= 1");
  cplx d = weierstrass_product(M.matrix, p);
  for (const CMatrix& B : M.volterra) d /= weierstrass_product(B, p);
  return d;
}

cplx detp_via_correction(const KernelMatrix& M, int p) {
  if (p < 1) throw ConfigError("p must be >= 1");
  cplx s = 0.0;
  for (int j = 1; j < p; ++j) s += (j % 2 ? -1.0 : 1.0) * trace_power(M, j) / double(j);
  return det1(M) * std::exp(s);
}

DeterminantEvaluator::DeterminantEvaluator(const Potential& pot, double h, const DetConfig& cfg)
    : pot_(pot), h_(h), cfg_(cfg), n_(cfg.nystrom.n_per_piece) {
  quad_ = std::make_shared<Quadrature>(build_quadrature(pot_, n_));
}

void DeterminantEvaluator::calibrate(const std::vector<cplx>& probes) {
  while (true) {
    int n2 = 2 * n_;
    if (n2 > cfg_.nystrom.max_per_piece) break;
    auto q2 = std::make_shared<Quadrature>(build_quadrature(pot_, n2));
    double drift = 0.0;
    for (cplx z : probes) {
      cplx a = det1(z);
      cplx b = resolab::det1(assemble(q2, z, h_, cfg_.branch));
      drift = std::max(drift, std::abs(a - b) / std::abs(b));
    }
    spdlog::debug("calibrate h={} n={} drift={:.3e}", h_, n_, drift);
    if (drift < cfg_.nystrom.drift_tol) break;
    n_ = n2;
    quad_ = q2;
  }
}

KernelMatrix DeterminantEvaluator::kernel(cplx z) const { return assemble(quad_, z, h_, cfg_.branch); }

cplx DeterminantEvaluator::det1(cplx z) const { return resolab::det1(kernel(z)); }

cplx DeterminantEvaluator::detp(cplx z, int p) const { return detp_via_correction(kernel(z), p); }

DeterminantEvaluator::Orders DeterminantEvaluator::orders(cplx z, int pmax) const {
  KernelMatrix K = kernel(z);
  Orders o;
  o.d1 = resolab::det1(K);
  cplx s = 0.0;
  o.exponent.push_back(s);
  for (int p = 2; p <= pmax; ++p) {
    int j = p - 1;
    s += (j % 2 ? -1.0 : 1.0) * trace_power(K, j) / double(j);
    o.exponent.push_back(s);
  }
  return o;
}

std::vector<cplx> DeterminantEvaluator::all_orders(cplx z, int pmax) const {
  Orders o = orders(z, pmax);
  std::vector<cplx> out;
  for (cplx e : o.exponent) out.push_back(o.d1 * std::exp(e));
  return out;
}

DetValue perturbation_determinant(int p_order, const Potential& pot, cplx z, double h, const DetConfig& cfg) {
  if (p_order < 1) throw ConfigError("p must be >= 1");
  DeterminantEvaluator ev(pot, h, cfg);
  if (cfg.nystrom.adaptive) ev.calibrate({z});
  return {ev.detp(z, p_order), p_order, z, h};
}

LogDetPath track_log(const std::function<cplx(cplx)>& f, const std::vector<cplx>& path, double zero_tol,
                     int max_depth) {
  LogDetPath out;
  if (path.empty()) return out;
  out.winding_basepoint = path.front();
  auto check = [&](cplx z, cplx v) {
    if (!(std::abs(v) >= zero_tol) || !std::isfinite(std::abs(v)))
      throw ZeroOnPath("determinant vanishes on path near z = " + std::to_string(z.real()) + " " +
                       std::to_string(z.imag()));
  };
  cplx f0 = f(path.front());
  check(path.front(), f0);
  out.path.push_back(path.front());
  out.log_values.push_back(std::log(f0));
  out.input_index.push_back(0);

  std::function<void(cplx, cplx, cplx, cplx, int)> segment = [&](cplx a, cplx fa, cplx b, cplx fb, int depth) {
    cplx r = fb / fa;
    if (std::abs(std::arg(r)) < pi / 2.0) {
      out.path.push_back(b);
      out.log_values.push_back(out.log_values.back() + std::log(r));
      return;
    }
    if (depth >= max_depth) throw ZeroOnPath("argument refinement did not resolve near a zero");
    cplx m = 0.5 * (a + b);
    cplx fm = f(m);
    check(m, fm);
    segment(a, fa, m, fm, depth + 1);
    segment(m, fm, b, fb, depth + 1);
  };

  cplx fprev = f0;
  for (size_t i = 1; i < path.size(); ++i) {
    cplx fi = f(path[i]);
    check(path[i], fi);
    segment(path[i - 1], fprev, path[i], fi, 0);
    out.input_index.push_back(static_cast<int>(out.path.size()) - 1);
    fprev = fi;
  }
  return out;
}

LogDetPath log_det_along_path(int p_order, const Potential& pot, const std::vector<cplx>& path, double h,
                              const DetConfig& cfg) {
  DeterminantEvaluator ev(pot, h, cfg);
  if (cfg.nystrom.adaptive && !path.empty()) ev.calibrate({path.front()});
  return track_log([&](cplx z) { return ev.detp(z, p_order); }, path);
}

CMatrix taylor_derivative_resolvent(const CMatrix& A, const CMatrix& B, cplx z, int j) {
  auto lu = shifted_lu(A, z);
  CMatrix R = lu.inverse();
  CMatrix out = R;
  double fact = 1.0;
  for (int i = 1; i <= j; ++i) {
    out = out * B * R;
    fact *= -double(i);
  }
  return fact * out;
}

cplx t_pk_trace(const CMatrix& A, const CMatrix& B, cplx z, int p, int k) {
  if (p < 1 || k < 1) throw ConfigError("t_pk_trace needs p, k >= 1");
  CMatrix R0 = shifted_lu(A, z).inverse();
  CMatrix R1 = shifted_lu(A + B, z).inverse();
  const int total = k + p;
  std::vector<CMatrix> P0{CMatrix::Identity(A.rows(), A.cols())}, P1{P0[0]};
  for (int i = 1; i <= total; ++i) {
    P0.push_back(P0.back() * R0);
    P1.push_back(P1.back() * R1);
  }
  // (-1)^p sum over k_1 + ... + k_{p+1} = k + p of tr R1^{k_1} B R0^{k_2} ... B R0^{k_{p+1}}
  cplx acc = 0.0;
  std::function<void(int, int, const CMatrix&)> rec = [&](int idx, int left, const CMatrix& prefix) {
    if (idx == p) {
      acc += (prefix * B * P0[left]).trace();
      return;
    }
    for (int ki = 1; ki <= left - (p - idx); ++ki) {
      CMatrix next = idx == 0 ? P1[ki] : CMatrix(prefix * B * P0[ki]);
      rec(idx + 1, left - ki, next);
    }
  };
  rec(0, total, CMatrix());
  return (p % 2 ? -1.0 : 1.0) * acc;
}

}  // namespace resolab
