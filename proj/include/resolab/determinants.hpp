#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "resolab/common.hpp"
#include "resolab/nystrom.hpp"

namespace resolab {

cplx det1(const KernelMatrix& M);
cplx detp_weierstrass(const KernelMatrix& M, int p);
cplx detp_via_correction(const KernelMatrix& M, int p);

struct NystromConfig {
  int n_per_piece = 128;
  bool adaptive = true;
  double drift_tol = 1e-7;
  int max_per_piece = 1024;
};

struct DetConfig {
  NystromConfig nystrom;
  SqrtBranch branch;
};

struct DetValue {
  cplx value;
  int p_order = 1;
  cplx z;
  double h = 1.0;
};

DetValue perturbation_determinant(int p_order, const Potential& pot, cplx z, double h, const DetConfig& cfg);

// D_p(., h) for one potential with the quadrature fixed once.
class DeterminantEvaluator {
 public:
  DeterminantEvaluator(const Potential& pot, double h, const DetConfig& cfg);

  // double n_per_piece until the relative det1 drift is below tol at every probe
  void calibrate(const std::vector<cplx>& probes);

  cplx det1(cplx z) const;
  cplx detp(cplx z, int p) const;
  // D_1 .. D_pmax from one assembly
  std::vector<cplx> all_orders(cplx z, int pmax) const;
  // D_p = d1 * exp(exponent[p-1]); avoids overflow of the exponential factor
  struct Orders {
    cplx d1;
    std::vector<cplx> exponent;
  };
  Orders orders(cplx z, int pmax) const;
  KernelMatrix kernel(cplx z) const;

  int n_per_piece() const { return n_; }
  double h() const { return h_; }
  const SqrtBranch& branch() const { return cfg_.branch; }
  const Potential& potential() const { return pot_; }

 private:
  Potential pot_;
  double h_;
  DetConfig cfg_;
  int n_;
  std::shared_ptr<const Quadrature> quad_;
};

struct LogDetPath {
  std::vector<cplx> path;        // includes refinement points
  std::vector<cplx> log_values;
  std::vector<int> input_index;  // position of each input point in `path`
  cplx winding_basepoint;
};

// Continuous log of f along a polyline; segments are bisected until
// successive arg jumps are below pi/2.
LogDetPath track_log(const std::function<cplx(cplx)>& f, const std::vector<cplx>& path,
                     double zero_tol = 1e-12, int max_depth = 40);

LogDetPath log_det_along_path(int p_order, const Potential& pot, const std::vector<cplx>& path, double h,
                              const DetConfig& cfg);

CMatrix taylor_derivative_resolvent(const CMatrix& A, const CMatrix& B, cplx z, int j);
cplx t_pk_trace(const CMatrix& A, const CMatrix& B, cplx z, int p, int k);

}  // namespace resolab
