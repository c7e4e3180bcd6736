#pragma once

#include <memory>
#include <vector>

#include "resolab/common.hpp"
#include "resolab/freefield.hpp"
#include "resolab/potentials.hpp"

namespace resolab {

struct Panel {
  double lo, hi;
  int first, count;
};

struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> values;  // V at the nodes
  int order = 0;               // nodes per piece
  std::vector<Panel> panels;
  int size() const { return static_cast<int>(nodes.size()); }
};

// Gauss-Legendre per piece between consecutive breakpoints; pieces are cut
// into panels of at most 16 nodes.
Quadrature build_quadrature(const Potential& p, int n_per_piece);

// Nystrom matrix of V (H0 - z)^{-1}. Off-panel entries are V_i G(x_i,x_j) w_j;
// diagonal panels are product-integrated, and `volterra` holds the diagonal
// blocks of the causal part c*2i*sin(k(x-y)/h) 1_{y<x} used to normalize
// det and traces. A bare matrix has no blocks.
struct KernelMatrix {
  CMatrix matrix;
  std::vector<CMatrix> volterra;
  std::vector<int> block_start;
  std::shared_ptr<const Quadrature> quadrature;
  cplx z{0.0, 0.0};
  cplx k{0.0, 0.0};
  double h = 1.0;

  static KernelMatrix from_matrix(CMatrix m);
  int size() const { return static_cast<int>(matrix.rows()); }
};

KernelMatrix assemble(const Potential& p, cplx z, double h, const Quadrature& q, const SqrtBranch& b);
KernelMatrix assemble(std::shared_ptr<const Quadrature> q, cplx z, double h, const SqrtBranch& b);

cplx trace_power(const KernelMatrix& M, int j);

std::vector<double> singular_values(const KernelMatrix& M);

}  // namespace resolab
