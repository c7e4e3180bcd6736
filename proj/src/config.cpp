#include "resolab/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace resolab {

namespace pt = boost::property_tree;

Potential PotentialSpec::build() const {
  if (kind == "box") return box(a, depth);
  if (kind == "mollified_box") return mollified_box(a, depth, mollify_width);
  if (kind == "gaussian_bump") return gaussian_bump(a, depth);
  if (kind == "table") return load_table(table);
  if (kind == "zero") return zero_potential(a);
  throw ConfigError("unknown potential kind '" + kind + "'");
}

LocateConfig ExperimentConfig::locate_config() const {
  LocateConfig c;
  c.det.nystrom.n_per_piece = n_per_piece;
  c.det.nystrom.adaptive = adaptive;
  c.det.nystrom.drift_tol = drift_tol;
  c.edge_samples = edge_samples;
  c.threads = threads;
  return c;
}

bool ExperimentConfig::operator==(const ExperimentConfig& o) const {
  return serialize_config(*this) == serialize_config(o);
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  double x;
  auto t = trim(v);
  auto r = std::from_chars(t.data(), t.data() + t.size(), x);
  if (r.ec != std::errc() || r.ptr != t.data() + t.size()) throw ConfigError(key + ": not a number: '" + v + "'");
  return x;
}

long long to_int(const std::string& key, const std::string& v) {
  long long x;
  auto t = trim(v);
  auto r = std::from_chars(t.data(), t.data() + t.size(), x);
  if (r.ec != std::errc() || r.ptr != t.data() + t.size()) throw ConfigError(key + ": not an integer: '" + v + "'");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  auto t = trim(v);
  if (t == "true" || t == "1") return true;
  if (t == "false" || t == "0") return false;
  throw ConfigError(key + ": expected true or false");
}

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <class T, class F>
std::string join(const std::vector<T>& v, F f) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + f(v[i]);
  return s;
}

// key -> (reader, writer)
struct Field {
  std::function<void(ExperimentConfig&, const std::string&, const std::string&)> read;
  std::function<std::string(const ExperimentConfig&)> write;
};

std::vector<std::pair<std::string, Field>> fields() {
  using C = ExperimentConfig;
  std::vector<std::pair<std::string, Field>> f;
  auto add = [&](const std::string& k, Field fl) { f.emplace_back(k, std::move(fl)); };
  auto integer = [](auto getter) {
    return Field{[getter](C& c, const std::string& k, const std::string& v) { getter(c) = static_cast<std::remove_reference_t<decltype(getter(c))>>(to_int(k, v)); },
                 [getter](const C& c) { return std::to_string(getter(const_cast<C&>(c))); }};
  };
  auto real = [](auto getter) {
    return Field{[getter](C& c, const std::string& k, const std::string& v) { getter(c) = to_double(k, v); },
                 [getter](const C& c) { return num(getter(const_cast<C&>(c))); }};
  };
  auto dlist = [](auto getter) {
    return Field{[getter](C& c, const std::string& k, const std::string& v) {
                   auto& out = getter(c);
                   out.clear();
                   for (auto& s : split(v, ',')) out.push_back(to_double(k, s));
                 },
                 [getter](const C& c) { return join(getter(const_cast<C&>(c)), num); }};
  };

  add("potential.kind", {[](C& c, const std::string&, const std::string& v) { c.potential.kind = trim(v); },
                         [](const C& c) { return c.potential.kind; }});
  add("potential.a", real([](C& c) -> double& { return c.potential.a; }));
  add("potential.depth", real([](C& c) -> double& { return c.potential.depth; }));
  add("potential.mollify_width", real([](C& c) -> double& { return c.potential.mollify_width; }));
  add("potential.table", {[](C& c, const std::string&, const std::string& v) { c.potential.table = trim(v); },
                          [](const C& c) { return c.potential.table; }});

  add("region.r_min", real([](C& c) -> double& { return c.region.r_min; }));
  add("region.r_max", real([](C& c) -> double& { return c.region.r_max; }));
  add("region.theta0", real([](C& c) -> double& { return c.region.theta0; }));
  add("region.eps", real([](C& c) -> double& { return c.region.eps; }));

  add("run.h_list", dlist([](C& c) -> std::vector<double>& { return c.h_list; }));
  add("run.p_orders", {[](C& c, const std::string& k, const std::string& v) {
                         c.p_orders.clear();
                         for (auto& s : split(v, ',')) c.p_orders.push_back(static_cast<int>(to_int(k, s)));
                       },
                       [](const C& c) { return join(c.p_orders, [](int p) { return std::to_string(p); }); }});
  add("run.seed", integer([](C& c) -> std::uint64_t& { return c.seed; }));
  add("run.threads", integer([](C& c) -> int& { return c.threads; }));
  add("run.out_dir", {[](C& c, const std::string&, const std::string& v) { c.out_dir = trim(v); },
                      [](const C& c) { return c.out_dir; }});

  add("nystrom.n_per_piece", integer([](C& c) -> int& { return c.n_per_piece; }));
  add("nystrom.adaptive", {[](C& c, const std::string& k, const std::string& v) { c.adaptive = to_bool(k, v); },
                           [](const C& c) { return std::string(c.adaptive ? "true" : "false"); }});
  add("nystrom.drift_tol", real([](C& c) -> double& { return c.drift_tol; }));
  add("nystrom.edge_samples", integer([](C& c) -> int& { return c.edge_samples; }));

  add("det.z_points", {[](C& c, const std::string& k, const std::string& v) {
                         c.z_points.clear();
                         for (auto& s : split(v, ',')) {
                           auto parts = split(s, ' ');
                           if (parts.size() != 2) throw ConfigError(k + ": expected 're im' pairs");
                           c.z_points.emplace_back(to_double(k, parts[0]), to_double(k, parts[1]));
                         }
                       },
                       [](const C& c) {
                         return join(c.z_points, [](cplx z) { return num(z.real()) + " " + num(z.imag()); });
                       }});

  add("window.r_lo", real([](C& c) -> double& { return c.window.r_lo; }));
  add("window.r_hi", real([](C& c) -> double& { return c.window.r_hi; }));
  add("window.arg_lo", real([](C& c) -> double& { return c.window.arg_lo; }));
  add("window.arg_hi", real([](C& c) -> double& { return c.window.arg_hi; }));
  add("window.n_r", integer([](C& c) -> int& { return c.window.n_r; }));
  add("window.n_arg", integer([](C& c) -> int& { return c.window.n_arg; }));

  add("ssf.lambda_lo", real([](C& c) -> double& { return c.lambda_lo; }));
  add("ssf.lambda_hi", real([](C& c) -> double& { return c.lambda_hi; }));
  add("ssf.lambda_count", integer([](C& c) -> int& { return c.lambda_count; }));
  add("ssf.eps", real([](C& c) -> double& { return c.ssf_eps; }));
  add("ssf.bw_eps", real([](C& c) -> double& { return c.bw_eps; }));

  add("distortion.theta_list", dlist([](C& c) -> std::vector<double>& { return c.theta_list; }));
  add("distortion.R1", real([](C& c) -> double& { return c.R1; }));
  add("distortion.T_inf", real([](C& c) -> double& { return c.T_inf; }));
  add("distortion.eps1", real([](C& c) -> double& { return c.eps1; }));
  add("distortion.L", real([](C& c) -> double& { return c.dist_L; }));
  add("distortion.n_grid", integer([](C& c) -> int& { return c.n_grid; }));

  add("zeta.L", real([](C& c) -> double& { return c.zeta_L; }));
  add("zeta.step", real([](C& c) -> double& { return c.zeta_step; }));
  add("zeta.delta", real([](C& c) -> double& { return c.zeta_delta; }));
  add("zeta.t_cut", real([](C& c) -> double& { return c.t_cut; }));
  add("zeta.t_min", real([](C& c) -> double& { return c.t_min; }));
  add("zeta.fit_hi", real([](C& c) -> double& { return c.fit_hi; }));
  add("zeta.J", integer([](C& c) -> int& { return c.fit_J; }));
  add("zeta.fit_count", integer([](C& c) -> int& { return c.fit_count; }));

  add("counterexample.delta", real([](C& c) -> double& { return c.delta; }));
  add("counterexample.b_prime", real([](C& c) -> double& { return c.b_prime; }));
  add("counterexample.pw_h_values", dlist([](C& c) -> std::vector<double>& { return c.pw_h_values; }));
  return f;
}

void validate(const ExperimentConfig& c) {
  if (c.h_list.empty()) throw ConfigError("run.h_list is empty");
  for (double h : c.h_list)
    if (!(h > 0.0)) throw ConfigError("run.h_list: h must be positive");
  for (int p : c.p_orders)
    if (p < 1 || p > 4) throw ConfigError("run.p_orders: p must lie in 1..4");
  if (c.threads < 1) throw ConfigError("run.threads must be >= 1");
  if (c.n_per_piece < 4) throw ConfigError("nystrom.n_per_piece must be >= 4");
  if (!(c.lambda_hi > c.lambda_lo && c.lambda_lo > 0.0)) throw ConfigError("ssf: need 0 < lambda_lo < lambda_hi");
  if (c.lambda_count < 2) throw ConfigError("ssf.lambda_count must be >= 2");
  if (!(c.ssf_eps > 0.0)) throw ConfigError("ssf.eps must be positive");
  if (!(c.bw_eps > 0.0)) throw ConfigError("ssf.bw_eps must be positive");
  if (c.window.n_r < 1 || c.window.n_arg < 1) throw ConfigError("window grid is empty");
  c.region.build();
}

ExperimentConfig from_tree(const pt::ptree& tree) {
  ExperimentConfig c;
  auto fl = fields();
  std::map<std::string, const Field*> index;
  for (auto& [k, f] : fl) index[k] = &f;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) throw ConfigError("key '" + section + "' outside a section");
    for (const auto& [key, val] : body) {
      std::string full = section + "." + key;
      auto it = index.find(full);
      if (it == index.end()) throw ConfigError("unknown key " + full);
      it->second->read(c, full, val.data());
    }
  }
  validate(c);
  return c;
}

}  // namespace

ExperimentConfig parse_config_string(const std::string& text) {
  std::istringstream in(text);
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("line " + std::to_string(e.line()) + ": " + e.message());
  }
  return from_tree(tree);
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(path + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  try {
    return from_tree(tree);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::string out, section;
  for (const auto& [key, f] : fields()) {
    auto dot = key.find('.');
    std::string sec = key.substr(0, dot);
    if (sec != section) {
      out += (section.empty() ? "" : "\n") + std::string("[") + sec + "]\n";
      section = sec;
    }
    out += key.substr(dot + 1) + " = " + f.write(cfg) + "\n";
  }
  return out;
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string config_hash(const ExperimentConfig& cfg) {
  // results do not depend on the thread count or where they are written
  ExperimentConfig c = cfg;
  c.threads = 1;
  c.out_dir.clear();
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(serialize_config(c))));
  return buf;
}

}  // namespace resolab
