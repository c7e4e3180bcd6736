#include "resolab/resonances.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>

#include <spdlog/spdlog.h>

#include "resolab/parallel.hpp"

namespace resolab {

namespace {

struct PolarMap {
  double r0, r1, a0, a1;
  cplx z(double u, double v) const { return std::polar(r0 + (r1 - r0) * u, a0 + (a1 - a0) * v); }
};

class MemoDet {
 public:
  MemoDet(const DeterminantEvaluator& ev, PolarMap m) : ev_(ev), map_(m) {}
  cplx operator()(double u, double v) {
    auto key = std::make_pair(u, v);
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = cache_.find(key);
      if (it != cache_.end()) return it->second;
    }
    cplx d = ev_.det1(map_.z(u, v));
    std::lock_guard<std::mutex> lock(mu_);
    cache_.emplace(key, d);
    return d;
  }
  const PolarMap& map() const { return map_; }
  // Phase scale of det1 per unit change of k.
  double phase_rate() const { return 2.0 * ev_.potential().width() / ev_.h(); }

 private:
  const DeterminantEvaluator& ev_;
  PolarMap map_;
  std::mutex mu_;
  std::map<std::pair<double, double>, cplx> cache_;
};

struct EdgeSum {
  double darg = 0.0;
  double min_abs = 1e300;
  double max_abs = 0.0;
};

void edge(MemoDet& f, double u0, double v0, double u1, double v1, int n, double zero_tol, EdgeSum& acc) {
  auto eval = [&](double t) {
    cplx d = f(u0 + (u1 - u0) * t, v0 + (v1 - v0) * t);
    double a = std::abs(d);
    acc.min_abs = std::min(acc.min_abs, a);
    acc.max_abs = std::max(acc.max_abs, a);
    if (!(a > zero_tol)) {
      cplx z = f.map().z(u0 + (u1 - u0) * t, v0 + (v1 - v0) * t);
      throw BoundaryZero("det1 vanishes on a contour near z = " + std::to_string(z.real()) + " " +
                         std::to_string(z.imag()));
    }
    return d;
  };
  std::function<void(double, cplx, double, cplx, int)> seg = [&](double ta, cplx fa, double tb, cplx fb, int depth) {
    double d = std::arg(fb / fa);
    if (std::abs(d) < pi / 2.0) {
      acc.darg += d;
      return;
    }
    if (depth > 40) throw BoundaryZero("contour refinement did not resolve the argument");
    double tm = 0.5 * (ta + tb);
    cplx fm = eval(tm);
    seg(ta, fa, tm, fm, depth + 1);
    seg(tm, fm, tb, fb, depth + 1);
  };
  double klen = 0.0;
  for (int i = 0; i < 32; ++i) {
    double ta = i / 32.0, tb = (i + 1) / 32.0;
    cplx za = f.map().z(u0 + (u1 - u0) * ta, v0 + (v1 - v0) * ta);
    cplx zb = f.map().z(u0 + (u1 - u0) * tb, v0 + (v1 - v0) * tb);
    klen += std::abs(std::polar(std::sqrt(std::abs(zb)), 0.5 * std::arg(zb)) -
                     std::polar(std::sqrt(std::abs(za)), 0.5 * std::arg(za)));
  }
  n = std::max(n, static_cast<int>(std::ceil(4.0 * f.phase_rate() * klen)));
  cplx prev = eval(0.0);
  for (int i = 1; i <= n; ++i) {
    double t = double(i) / n;
    cplx cur = eval(t);
    seg(double(i - 1) / n, prev, t, cur, 0);
    prev = cur;
  }
}

struct Box {
  double u0, u1, v0, v1;
  int depth;
  int wind;
};

int winding_of(MemoDet& f, const Box& b, int samples, double zero_tol, EdgeSum* stats = nullptr) {
  for (int attempt = 0; attempt < 4; ++attempt) {
    EdgeSum acc;
    edge(f, b.u0, b.v0, b.u1, b.v0, samples, zero_tol, acc);
    edge(f, b.u1, b.v0, b.u1, b.v1, samples, zero_tol, acc);
    edge(f, b.u1, b.v1, b.u0, b.v1, samples, zero_tol, acc);
    edge(f, b.u0, b.v1, b.u0, b.v0, samples, zero_tol, acc);
    double w = acc.darg / (2.0 * pi);
    double n = std::round(w);
    if (std::abs(w - n) < 0.05) {
      if (stats) *stats = acc;
      return static_cast<int>(n);
    }
    samples *= 2;
  }
  throw NonIntegerWinding("box winding is not an integer");
}

double box_size(const PolarMap& m, const Box& b) {
  double r0 = m.r0 + (m.r1 - m.r0) * b.u0, r1 = m.r0 + (m.r1 - m.r0) * b.u1;
  return std::max(r1 - r0, r1 * (m.a1 - m.a0) * (b.v1 - b.v0));
}

bool inside(const PolarMap& m, const Box& b, const SqrtBranch& br, cplx z) {
  if (!br.contains(z)) return false;
  double u = (std::abs(z) - m.r0) / (m.r1 - m.r0);
  double v = (br.arg(z) - m.a0) / (m.a1 - m.a0);
  const double tol = 1e-9;
  return u >= b.u0 - tol && u <= b.u1 + tol && v >= b.v0 - tol && v <= b.v1 + tol;
}

// Newton on det1 with a centered difference derivative.
bool newton(const DeterminantEvaluator& ev, cplx z, double step, cplx& out) {
  for (int it = 0; it < 60; ++it) {
    cplx f = ev.det1(z);
    cplx df = (ev.det1(z + step) - ev.det1(z - step)) / (2.0 * step);
    if (!std::isfinite(std::abs(df)) || std::abs(df) == 0.0) return false;
    cplx dz = f / df;
    z -= dz;
    if (std::abs(dz) < 1e-14 * std::max(1.0, std::abs(z))) {
      out = z;
      return true;
    }
  }
  return false;
}

}  // namespace

int ResonanceSet::total_multiplicity() const {
  int s = 0;
  for (const auto& r : resonances) s += r.multiplicity;
  return s;
}

int winding_number(const LogDetPath& path_log) {
  if (path_log.path.size() < 2) return 0;
  if (std::abs(path_log.path.front() - path_log.path.back()) > 1e-12 * std::max(1.0, std::abs(path_log.path.front())))
    throw ConfigError("winding_number needs a closed path");
  double w = (path_log.log_values.back() - path_log.log_values.front()).imag() / (2.0 * pi);
  double n = std::round(w);
  if (std::abs(w - n) >= 0.05) throw NonIntegerWinding("winding residual " + std::to_string(std::abs(w - n)));
  return static_cast<int>(n);
}

int box_winding(const DeterminantEvaluator& ev, double r0, double r1, double a0, double a1, int samples) {
  MemoDet f(ev, PolarMap{r0, r1, a0, a1});
  return winding_of(f, Box{0.0, 1.0, 0.0, 1.0, 0, 0}, samples, 0.0);
}

ResonanceSet locate_resonances(const Potential& p, const SpectralRegion& region, double h, const LocateConfig& cfg) {
  ResonanceSet rs;
  rs.region = region;
  rs.h = h;
  DetConfig dc = cfg.det;
  dc.branch = region.branch;
  DeterminantEvaluator ev(p, h, dc);
  PolarMap map{region.r_min, region.r_max, region.phi_lo(), region.phi_hi()};
  if (dc.nystrom.adaptive)
    ev.calibrate({map.z(0, 0), map.z(1, 0), map.z(1, 1), map.z(0, 1), map.z(0.5, 0.5)});
  MemoDet f(ev, map);

  Box root{0.0, 1.0, 0.0, 1.0, 0, 0};
  EdgeSum stats;
  root.wind = winding_of(f, root, 4 * cfg.edge_samples, cfg.boundary_tol, &stats);
  rs.boundary_winding = root.wind;
  rs.boundary_max = stats.max_abs;
  spdlog::info("h={} region winding {} (n_per_piece={})", h, root.wind, ev.n_per_piece());

  std::vector<Box> level;
  if (root.wind > 0) level.push_back(root);
  while (!level.empty()) {
    std::vector<int> found(level.size(), 0);
    std::vector<cplx> roots(level.size());
    parallel_for(static_cast<int>(level.size()), cfg.threads, [&](int i) {
      const Box& b = level[i];
      double size = box_size(map, b);
      cplx c = map.z(0.5 * (b.u0 + b.u1), 0.5 * (b.v0 + b.v1));
      if (b.wind == 1) {
        cplx w;
        try {
          if (newton(ev, c, 1e-6 * size, w) && inside(map, b, region.branch, w)) {
            found[i] = 1;
            roots[i] = w;
          }
        } catch (const BranchError&) {
        }
      } else if (size < cfg.min_box) {
        found[i] = 1;
        roots[i] = c;
      }
    });

    std::vector<Box> children;
    std::vector<int> parent_wind;
    for (size_t i = 0; i < level.size(); ++i) {
      const Box& b = level[i];
      if (found[i]) {
        Resonance r{roots[i], b.wind, std::abs(ev.det1(roots[i]))};
        if (r.multiplicity > 1) spdlog::warn("multiple zero (m={}) near {}{:+}i", r.multiplicity, r.w.real(), r.w.imag());
        if (!(r.residual < 1e-9 * rs.boundary_max))
          spdlog::warn("resonance residual {:.3e} above 1e-9 of boundary max", r.residual);
        rs.resonances.push_back(r);
        continue;
      }
      if (b.depth + 1 > cfg.max_depth) throw BudgetExceeded("quadtree depth exceeds " + std::to_string(cfg.max_depth));
      double um = 0.5 * (b.u0 + b.u1), vm = 0.5 * (b.v0 + b.v1);
      children.push_back({b.u0, um, b.v0, vm, b.depth + 1, 0});
      children.push_back({um, b.u1, b.v0, vm, b.depth + 1, 0});
      children.push_back({b.u0, um, vm, b.v1, b.depth + 1, 0});
      children.push_back({um, b.u1, vm, b.v1, b.depth + 1, 0});
      parent_wind.push_back(b.wind);
    }
    parallel_for(static_cast<int>(children.size()), cfg.threads, [&](int i) {
      children[i].wind = winding_of(f, children[i], cfg.edge_samples, cfg.boundary_tol);
      if (children[i].wind < 0) throw NonIntegerWinding("negative winding in a sub-box");
    });
    for (size_t g = 0; g < parent_wind.size(); ++g) {
      auto sum = [&] {
        int s = 0;
        for (int c = 0; c < 4; ++c) s += children[4 * g + c].wind;
        return s;
      };
      for (int more = 2; sum() != parent_wind[g] && more <= 8; more *= 2)
        for (int c = 0; c < 4; ++c)
          children[4 * g + c].wind = winding_of(f, children[4 * g + c], more * cfg.edge_samples, cfg.boundary_tol);
      if (sum() != parent_wind[g]) {
        const Box& c0 = children[4 * g];
        const Box& c3 = children[4 * g + 3];
        throw NonIntegerWinding(fmt::format("sub-box windings do not add up: u [{}, {}] v [{}, {}] parent {} children {} {} {} {}",
                                            c0.u0, c3.u1, c0.v0, c3.v1, parent_wind[g], children[4 * g].wind,
                                            children[4 * g + 1].wind, children[4 * g + 2].wind, children[4 * g + 3].wind));
      }
    }
    level.clear();
    for (const Box& c : children)
      if (c.wind > 0) level.push_back(c);
  }
  std::sort(rs.resonances.begin(), rs.resonances.end(), [](const Resonance& a, const Resonance& b) {
    return a.w.real() != b.w.real() ? a.w.real() < b.w.real() : a.w.imag() < b.w.imag();
  });
  return rs;
}

std::vector<cplx> WindowSpec::grid() const {
  std::vector<cplx> out;
  for (int i = 0; i < n_r; ++i) {
    double r = n_r == 1 ? r_lo : r_lo + (r_hi - r_lo) * i / (n_r - 1);
    for (int jj = 0; jj < n_arg; ++jj) {
      int j = (i % 2 == 0) ? jj : n_arg - 1 - jj;
      double a = n_arg == 1 ? arg_lo : arg_lo + (arg_hi - arg_lo) * j / (n_arg - 1);
      out.push_back(std::polar(r, a));
    }
  }
  return out;
}

std::vector<cplx> WindowSpec::boundary(int per_edge) const {
  std::vector<cplx> out;
  for (int i = 0; i < per_edge; ++i) out.push_back(std::polar(r_lo + (r_hi - r_lo) * i / per_edge, arg_lo));
  for (int i = 0; i < per_edge; ++i) out.push_back(std::polar(r_hi, arg_lo + (arg_hi - arg_lo) * i / per_edge));
  for (int i = 0; i < per_edge; ++i) out.push_back(std::polar(r_hi - (r_hi - r_lo) * i / per_edge, arg_hi));
  for (int i = 0; i <= per_edge; ++i) out.push_back(std::polar(r_lo, arg_hi - (arg_hi - arg_lo) * i / per_edge));
  return out;
}

std::vector<BackgroundProfile> factor_background(const std::vector<int>& p_orders, const Potential& pot,
                                                 const ResonanceSet& rs, const std::vector<cplx>& sample_path,
                                                 const LocateConfig& cfg) {
  for (cplx z : sample_path)
    for (const auto& r : rs.resonances)
      if (std::abs(z - r.w) < 1e-4)
        throw PathTooCloseToResonance("sample within 1e-4 of a resonance");
  int pmax = *std::max_element(p_orders.begin(), p_orders.end());
  DetConfig dc = cfg.det;
  dc.branch = rs.region.branch;
  DeterminantEvaluator ev(pot, rs.h, dc);
  const cplx anchor = rs.region.anchor();
  if (dc.nystrom.adaptive && !sample_path.empty()) ev.calibrate({anchor, sample_path.front(), sample_path.back()});

  const int n = static_cast<int>(sample_path.size());
  const double s = 1e-4 * rs.region.r_min;
  using Orders = DeterminantEvaluator::Orders;
  std::vector<Orders> center(n);
  std::vector<std::vector<cplx>> dlog(n);
  parallel_for(n, cfg.threads, [&](int i) {
    cplx z = sample_path[i];
    center[i] = ev.orders(z, pmax);
    std::vector<Orders> st;
    for (double t : {-2.0 * s, -s, s, 2.0 * s}) st.push_back(ev.orders(z + t, pmax));
    dlog[i].resize(pmax);
    for (int p = 0; p < pmax; ++p) {
      auto L = [&](int q) { return std::log(st[q].d1 / center[i].d1) + st[q].exponent[p] - center[i].exponent[p]; };
      dlog[i][p] = (L(0) - 8.0 * L(1) + 8.0 * L(2) - L(3)) / (12.0 * s);
    }
  });

  std::map<std::pair<double, double>, Orders> memo;
  for (int i = 0; i < n; ++i) memo[{sample_path[i].real(), sample_path[i].imag()}] = center[i];
  auto orders_at = [&](cplx z) -> const Orders& {
    auto key = std::make_pair(z.real(), z.imag());
    auto it = memo.find(key);
    if (it == memo.end()) it = memo.emplace(key, ev.orders(z, pmax)).first;
    return it->second;
  };

  // log D_1 / prod (z - w)^m is tracked once; the exponential factors of the
  // higher orders are single valued and added afterwards.
  std::vector<cplx> path{anchor};
  path.insert(path.end(), sample_path.begin(), sample_path.end());
  auto f = [&](cplx z) {
    cplx v = orders_at(z).d1;
    for (const auto& r : rs.resonances) v /= std::pow(z - r.w, r.multiplicity);
    return v;
  };
  LogDetPath lp = track_log(f, path, 1e-300);
  std::vector<BackgroundProfile> out;
  for (int p : p_orders) {
    BackgroundProfile bp;
    bp.p_order = p;
    bp.h = rs.h;
    bp.branch_anchor = anchor;
    // principal log of D_p / prod (z - w)^m at the anchor
    cplx sa = orders_at(anchor).exponent[p - 1];
    double xa = lp.log_values.front().imag() + sa.imag();
    cplx shift = sa + I_unit * (std::remainder(xa, 2.0 * pi) - xa);
    for (int i = 0; i < n; ++i) {
      cplx z = sample_path[i];
      cplx d = dlog[i][p - 1];
      for (const auto& r : rs.resonances) d -= double(r.multiplicity) / (z - r.w);
      cplx phi = lp.log_values[lp.input_index[i + 1]] + center[i].exponent[p - 1] - sa + shift;
      bp.samples.push_back({z, phi, d});
    }
    out.push_back(std::move(bp));
  }
  return out;
}

BackgroundProfile factor_background(int p_order, const Potential& pot, const ResonanceSet& rs,
                                    const std::vector<cplx>& sample_path, const LocateConfig& cfg) {
  return factor_background(std::vector<int>{p_order}, pot, rs, sample_path, cfg).front();
}

std::vector<ScalingRow> scaling_study(int p_order, const Potential& pot, const SpectralRegion& region,
                                      const std::vector<double>& h_list, const WindowSpec& W, double delta,
                                      const LocateConfig& cfg) {
  std::vector<ScalingRow> rows;
  for (double h : h_list) {
    ResonanceSet rs = locate_resonances(pot, region, h, cfg);
    BackgroundProfile bp = factor_background(p_order, pot, rs, W.grid(), cfg);
    ScalingRow row{h, 0.0, 0.0, rs.total_multiplicity()};
    for (const auto& smp : bp.samples) {
      double a = std::abs(smp.dz_phi_p);
      cplx k = sqrt_branch(smp.z, region.branch);
      row.sup = std::max(row.sup, a);
      row.weighted_sup = std::max(row.weighted_sup, h * std::exp(delta * k.imag() / h) * a);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace resolab
