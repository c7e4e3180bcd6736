#include "resolab/nystrom.hpp"

#include <algorithm>
#include <cmath>

#include "resolab/quadrature.hpp"

namespace resolab {

namespace {

constexpr int max_panel = 16;

cplx trace_of_power(const CMatrix& A, int j) {
  if (j == 1) return A.trace();
  if (j == 2) return A.cwiseProduct(A.transpose()).sum();
  CMatrix P = A;
  for (int i = 2; i < j; ++i) P = P * A;
  return P.cwiseProduct(A.transpose()).sum();
}

}  // namespace

Quadrature build_quadrature(const Potential& p, int n_per_piece) {
  if (n_per_piece < 4) throw ConfigError("n_per_piece must be >= 4");
  std::vector<double> cuts{p.support_lo};
  for (double b : p.discontinuities)
    if (b > p.support_lo && b < p.support_hi) cuts.push_back(b);
  cuts.push_back(p.support_hi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  Quadrature q;
  q.order = n_per_piece;
  int npan = (n_per_piece + max_panel - 1) / max_panel;
  for (size_t s = 0; s + 1 < cuts.size(); ++s) {
    double a = cuts[s], b = cuts[s + 1];
    double len = (b - a) / npan;
    for (int k = 0; k < npan; ++k) {
      int cnt = n_per_piece / npan + (k < n_per_piece % npan ? 1 : 0);
      double lo = a + k * len, hi = (k + 1 == npan) ? b : a + (k + 1) * len;
      GaussRule g = gauss_legendre(cnt);
      Panel pan{lo, hi, q.size(), cnt};
      for (int i = 0; i < cnt; ++i) {
        double x = 0.5 * (lo + hi) + 0.5 * (hi - lo) * g.x[i];
        q.nodes.push_back(x);
        q.weights.push_back(0.5 * (hi - lo) * g.w[i]);
        q.values.push_back(p(x));
      }
      q.panels.push_back(pan);
    }
  }
  return q;
}

KernelMatrix KernelMatrix::from_matrix(CMatrix m) {
  KernelMatrix K;
  K.matrix = std::move(m);
  return K;
}

KernelMatrix assemble(const Potential& p, cplx z, double h, const Quadrature& q, const SqrtBranch& b) {
  auto qq = std::make_shared<Quadrature>(q);
  for (int i = 0; i < qq->size(); ++i) qq->values[i] = p(qq->nodes[i]);
  return assemble(qq, z, h, b);
}

KernelMatrix assemble(std::shared_ptr<const Quadrature> qp, cplx z, double h, const SqrtBranch& b) {
  const Quadrature& q = *qp;
  KernelMatrix K;
  K.quadrature = qp;
  K.z = z;
  K.h = h;
  K.k = sqrt_branch(z, b);
  const cplx k = K.k;
  if (std::abs(k) < 1e-300) throw DivisionByZero("assemble at k = 0");
  const int n = q.size();
  const cplx c = I_unit / (2.0 * h * k);
  const cplx ikh = I_unit * k / h;
  K.matrix.resize(n, n);

  // plain Nystrom entries everywhere; diagonal panels are overwritten below
  double span = 0.0;
  for (double x : q.nodes) span = std::max(span, std::abs(x));
  if (std::abs(ikh.real()) * span < 300.0) {
    // separable form exp(ik|x-y|/h) = E(x)/E(y) for x >= y
    std::vector<cplx> E(n), Einv(n);
    for (int i = 0; i < n; ++i) {
      E[i] = std::exp(ikh * q.nodes[i]);
      Einv[i] = 1.0 / E[i];
    }
    for (int j = 0; j < n; ++j) {
      const cplx cw = c * q.weights[j];
      for (int i = 0; i < n; ++i) {
        const cplx e = q.nodes[i] >= q.nodes[j] ? E[i] * Einv[j] : E[j] * Einv[i];
        K.matrix(i, j) = q.values[i] * cw * e;
      }
    }
  } else {
    for (int j = 0; j < n; ++j) {
      const double xj = q.nodes[j], wj = q.weights[j];
      for (int i = 0; i < n; ++i)
        K.matrix(i, j) = q.values[i] * c * std::exp(ikh * std::abs(q.nodes[i] - xj)) * wj;
    }
  }

  for (const Panel& pan : q.panels) {
    const int m = pan.count;
    std::vector<double> t(m);
    const double mid = 0.5 * (pan.lo + pan.hi), rad = 0.5 * (pan.hi - pan.lo);
    for (int a = 0; a < m; ++a) t[a] = (q.nodes[pan.first + a] - mid) / rad;
    const std::vector<double> bw = barycentric_weights(t);
    const int ms = m / 2 + 8 + static_cast<int>(std::ceil(std::abs(k) * (pan.hi - pan.lo) / h));
    const GaussRule g = gauss_legendre(ms);
    std::vector<double> row(m);

    CMatrix full = CMatrix::Zero(m, m), volt = CMatrix::Zero(m, m);
    for (int a = 0; a < m; ++a) {
      const int i = pan.first + a;
      const double xi = q.nodes[i], vi = q.values[i];
      if (vi == 0.0) continue;
      CVector left = CVector::Zero(m), back = CVector::Zero(m), right = CVector::Zero(m);
      // [lo, xi]: exp(ik(xi-y)/h) and exp(-ik(xi-y)/h)
      double c1 = 0.5 * (pan.lo + xi), r1 = 0.5 * (xi - pan.lo);
      for (int s = 0; s < ms; ++s) {
        double y = c1 + r1 * g.x[s];
        lagrange_row(t, bw, (y - mid) / rad, row.data());
        cplx ep = std::exp(ikh * (xi - y)) * (r1 * g.w[s]);
        cplx em = std::exp(-ikh * (xi - y)) * (r1 * g.w[s]);
        for (int jj = 0; jj < m; ++jj) {
          left[jj] += ep * row[jj];
          back[jj] += em * row[jj];
        }
      }
      // [xi, hi]: exp(ik(y-xi)/h)
      double c2 = 0.5 * (xi + pan.hi), r2 = 0.5 * (pan.hi - xi);
      for (int s = 0; s < ms; ++s) {
        double y = c2 + r2 * g.x[s];
        lagrange_row(t, bw, (y - mid) / rad, row.data());
        cplx ep = std::exp(ikh * (y - xi)) * (r2 * g.w[s]);
        for (int jj = 0; jj < m; ++jj) right[jj] += ep * row[jj];
      }
      for (int jj = 0; jj < m; ++jj) {
        full(a, jj) = vi * c * (left[jj] + right[jj]);
        volt(a, jj) = vi * c * (left[jj] - back[jj]);
      }
    }
    K.matrix.block(pan.first, pan.first, m, m) = full;
    K.volterra.push_back(volt);
    K.block_start.push_back(pan.first);
  }
  return K;
}

cplx trace_power(const KernelMatrix& M, int j) {
  if (j < 1) throw ConfigError("trace_power needs j >= 1");
  cplx t = trace_of_power(M.matrix, j);
  for (const CMatrix& B : M.volterra) t -= trace_of_power(B, j);
  return t;
}

std::vector<double> singular_values(const KernelMatrix& M) {
  CMatrix S = M.matrix;
  if (M.quadrature) {
    const auto& w = M.quadrature->weights;
    for (int i = 0; i < S.rows(); ++i)
      for (int j = 0; j < S.cols(); ++j) S(i, j) *= std::sqrt(w[i] / w[j]);
  }
  Eigen::BDCSVD<CMatrix> svd(S);
  Eigen::VectorXd s = svd.singularValues();
  std::vector<double> out(s.data(), s.data() + s.size());
  std::sort(out.begin(), out.end(), std::greater<double>());
  return out;
}

}  // namespace resolab
