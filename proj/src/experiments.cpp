#include "qrm/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

#include "qrm/diagnostics.hpp"
#include "qrm/error.hpp"
#include "qrm/kernels.hpp"
#include "qrm/variational.hpp"

#ifndef QRM_VERSION
#define QRM_VERSION "0.0.0"
#endif

namespace qrm {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double round12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

double parse_real(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(v)) throw ConfigError("not a finite number: '" + text + "'");
  return v;
}

void require_grid(const std::vector<double>& g, const char* name) {
  if (g.empty()) throw ConfigError(std::string(name) + " must not be empty");
  for (std::size_t k = 1; k < g.size(); ++k) {
    if (!(g[k] > g[k - 1])) throw ConfigError(std::string(name) + " must be strictly increasing");
  }
}

std::string join(const std::vector<double>& g) {
  std::string s;
  for (std::size_t k = 0; k < g.size(); ++k) s += (k ? "," : "") + fmt17(g[k]);
  return s;
}

RabiParams at(double lambda, double eta) { return RabiParams::from_lambda(lambda, eta, 1.0); }

struct GroundValues {
  double energy = kNaN;
  double mean_n = kNaN;
  double gamma = kNaN;
  int cutoff = 0;
  bool gamma_valid = true;
};

GroundValues ground_values(const RabiParams& p, Method method, double tol) {
  GroundValues v;
  const double lambda = p.lambda();
  if (method == Method::variational) {
    const VariationalSolution sol = solve_variational(phase_of(lambda), p);
    v.energy = sol.energy;
    v.mean_n = sol.mean_n;
    v.gamma = sol.gamma_prime;
    v.gamma_valid = sol.gamma_valid;
    return v;
  }
  if (method == Method::analytic) {
    const AnalyticGroundState a = analytic_ground_state(p);
    v.energy = a.energy;
    v.mean_n = a.mean_n;
    v.gamma = a.gamma;
    return v;
  }
  const bool displaced = lambda > 1.0;
  const double alpha = displaced ? displacement_amplitude(p) : 0.0;
  HamiltonianFactory builder;
  if (method == Method::exact) {
    builder = [&](FockCutoff c) { return displaced ? build_displaced_rabi(p, alpha, c).first : build_rabi(p, c); };
  } else {
    builder = [&](FockCutoff c) { return displaced ? build_effective_sp(p, c) : build_effective_np(p, c); };
  }
  const GroundStateResult gs = ground_state(builder, tol);
  const PhotonMoments m = photon_moments(gs.state, BosonLayout::trailing(gs.state.dims(), alpha));
  v.energy = gs.energy;
  v.mean_n = m.mean_n;
  v.gamma = m.gamma;
  v.cutoff = gs.cutoff_used.n_max;
  return v;
}

std::vector<Record> ground_records(const SweepConfig& c, double eta, double lambda, Method method) {
  Record base;
  base.figure = to_string(c.figure);
  base.method = to_string(method);
  base.lambda = lambda;
  base.eta = eta;
  base.chi = kNaN;
  std::vector<Record> out;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const GroundValues v = ground_values(at(lambda, eta), method, c.cutoff_tol);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (auto [name, value] : {std::pair{"energy", v.energy}, {"mean_n", v.mean_n}, {"gamma", v.gamma}}) {
      Record r = base;
      r.value_name = name;
      r.value = value;
      r.cutoff = v.cutoff;
      r.converged = true;
      r.wall_time = wall;
      if (r.value_name == "gamma" && !v.gamma_valid) {
        r.converged = false;
        r.note = "variational gamma' negative: fourth-order correction outside its regime";
      }
      out.push_back(r);
    }
  } catch (const std::exception& e) {
    for (const char* name : {"energy", "mean_n", "gamma"}) {
      Record r = base;
      r.value_name = name;
      r.value = kNaN;
      r.note = e.what();
      out.push_back(r);
    }
  }
  return out;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string csv_real(double x) { return std::isnan(x) ? std::string() : fmt17(x); }

}  // namespace

const char* to_string(Figure f) {
  switch (f) {
    case Figure::fig1: return "fig1";
    case Figure::fig2: return "fig2";
    case Figure::fig3: return "fig3";
    case Figure::fig4: return "fig4";
    case Figure::fig5: return "fig5";
    case Figure::custom: return "custom";
  }
  return "?";
}

Figure parse_figure(const std::string& name) {
  for (Figure f : {Figure::fig1, Figure::fig2, Figure::fig3, Figure::fig4, Figure::fig5, Figure::custom}) {
    if (name == to_string(f)) return f;
  }
  throw ConfigError("unknown figure '" + name + "'");
}

const char* to_string(Quantity q) { return q == Quantity::ground ? "ground" : "echo"; }

Quantity parse_quantity(const std::string& name) {
  if (name == "ground") return Quantity::ground;
  if (name == "echo") return Quantity::echo;
  throw ConfigError("unknown quantity '" + name + "' (expected ground or echo)");
}

void SweepConfig::validate() const {
  require_grid(lambda_grid, "lambda_grid");
  require_grid(eta_grid, "eta_grid");
  if (lambda_grid.front() < 0.0) throw ConfigError("lambda_grid values must be non-negative");
  if (!(eta_grid.front() > 0.0)) throw ConfigError("eta_grid values must be positive");
  if (methods.empty()) throw ConfigError("methods must not be empty");
  if (!(cutoff_tol > 0.0)) throw ConfigError("cutoff_tol must be positive");
  if (quantity == Quantity::echo) {
    require_grid(time_grid, "time_grid");
    if (time_grid.front() < 0.0) throw ConfigError("time_grid values must be non-negative");
    if (!(chi > 0.0)) throw ConfigError("chi must be positive for echo runs");
  }
}

std::vector<double> parse_grid(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) return {};
  if (t.find(':') != std::string::npos) {
    const auto parts = split(t, ':');
    if (parts.size() != 3) throw ConfigError("range grid must be start:step:stop, got '" + t + "'");
    const double start = parse_real(parts[0]);
    const double step = parse_real(parts[1]);
    const double stop = parse_real(parts[2]);
    if (!(step > 0.0) || stop < start) throw ConfigError("range grid needs step > 0 and stop >= start: '" + t + "'");
    const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (n > 1000000) throw ConfigError("range grid has too many points: '" + t + "'");
    std::vector<double> g;
    for (long k = 0; k < n; ++k) g.push_back(round12(start + k * step));
    return g;
  }
  std::vector<double> g;
  for (const auto& item : split(t, ',')) g.push_back(parse_real(item));
  return g;
}

std::vector<double> near_critical_grid(double lo, double hi) {
  std::vector<double> g;
  auto add = [&](double x) {
    if (x >= lo - 1e-12 && x <= hi + 1e-12 && x != 1.0) g.push_back(round12(x));
  };
  for (long k = 0;; ++k) {
    const double x = lo + 0.02 * k;
    if (x > hi + 1e-12) break;
    if (x < 0.9 - 1e-12 || x > 1.1 + 1e-12) add(x);
  }
  for (int k = 0; k <= 40; ++k) add(0.9 + 0.005 * k);
  for (int k = 1; k < 10; ++k) {
    add(1.0 - 5e-4 * k);
    add(1.0 + 5e-4 * k);
  }
  for (double d : {1e-4, 1e-5}) {
    add(1.0 - d);
    add(1.0 + d);
  }
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

SweepConfig default_config(Figure f) {
  SweepConfig c;
  c.figure = f;
  const std::vector<double> ground_etas{1e3, 2e3, 5e3, 1e4, 2e4, 5e4, 1e5};
  switch (f) {
    case Figure::fig1:
    case Figure::fig2:
      c.quantity = Quantity::ground;
      c.lambda_grid = {f == Figure::fig1 ? 0.99 : 1.01};
      c.eta_grid = ground_etas;
      c.methods = {Method::exact, Method::effective, Method::variational};
      break;
    case Figure::fig3:
      c.quantity = Quantity::echo;
      c.eta_grid = {5000.0};
      c.time_grid = parse_grid("0:2:60");
      c.lambda_grid = near_critical_grid(0.5, 1.5);
      c.methods = {Method::analytic, Method::exact};
      break;
    case Figure::fig4:
      c.quantity = Quantity::echo;
      c.eta_grid = {2000.0, 4000.0, 6000.0, 8000.0, 10000.0};
      c.time_grid = {60.0};
      c.lambda_grid = near_critical_grid(0.5, 1.5);
      c.methods = {Method::analytic, Method::exact};
      break;
    case Figure::fig5:
      c.quantity = Quantity::echo;
      c.eta_grid = {1e5};
      c.time_grid = {60.0};
      c.lambda_grid = near_critical_grid(0.5, 1.5);
      c.methods = {Method::exact, Method::effective, Method::variational, Method::analytic};
      break;
    case Figure::custom:
      break;
  }
  return c;
}

SweepConfig parse_config(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::map<std::string, int> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    if (seen.count(key)) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    seen[key] = lineno;
    entries.emplace_back(key, trim(line.substr(eq + 1)));
  }

  SweepConfig c;
  for (const auto& [key, value] : entries) {
    if (key == "figure") c = default_config(parse_figure(value));
  }
  for (const auto& [key, value] : entries) {
    const std::string where = "line " + std::to_string(seen[key]) + ": ";
    try {
      if (key == "figure") continue;
      if (key == "quantity") {
        c.quantity = parse_quantity(value);
      } else if (key == "lambda_grid") {
        c.lambda_grid = parse_grid(value);
      } else if (key == "eta_grid") {
        c.eta_grid = parse_grid(value);
      } else if (key == "time_grid") {
        c.time_grid = parse_grid(value);
      } else if (key == "chi") {
        c.chi = parse_real(value);
      } else if (key == "cutoff_tol") {
        c.cutoff_tol = parse_real(value);
      } else if (key == "output_path") {
        c.output_path = value;
      } else if (key == "methods") {
        c.methods.clear();
        for (const auto& m : split(value, ',')) c.methods.push_back(parse_method(m));
      } else {
        throw ConfigError("unknown key '" + key + "'");
      }
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  c.validate();
  return c;
}

SweepConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

std::string canonical_text(const SweepConfig& c) {
  std::ostringstream os;
  os << "figure=" << to_string(c.figure) << "\n";
  os << "quantity=" << to_string(c.quantity) << "\n";
  os << "lambda_grid=" << join(c.lambda_grid) << "\n";
  os << "eta_grid=" << join(c.eta_grid) << "\n";
  os << "time_grid=" << join(c.time_grid) << "\n";
  os << "chi=" << fmt17(c.chi) << "\n";
  os << "methods=";
  for (std::size_t k = 0; k < c.methods.size(); ++k) os << (k ? "," : "") << to_string(c.methods[k]);
  os << "\ncutoff_tol=" << fmt17(c.cutoff_tol) << "\n";
  return os.str();
}

std::string config_hash(const SweepConfig& c) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(canonical_text(c))));
  return buf;
}

const char* code_version() { return QRM_VERSION; }

int RunReport::degraded_count() const {
  return static_cast<int>(std::count_if(records.begin(), records.end(), [](const Record& r) { return !r.converged; }));
}

RunReport run(const SweepConfig& c, const RunOptions& opts) {
  c.validate();
  RunReport report;
  report.figure = to_string(c.figure);
  report.config_hash = config_hash(c);
  report.code_version = code_version();
  report.seed = opts.seed;
  report.kernel_isa = kernels::active().name;

  if (c.quantity == Quantity::ground) {
    struct Task {
      double eta, lambda;
      Method method;
    };
    std::vector<Task> tasks;
    for (double eta : c.eta_grid)
      for (double lambda : c.lambda_grid)
        for (Method m : c.methods) tasks.push_back({eta, lambda, m});
    std::vector<std::vector<Record>> results(tasks.size());
    parallel_for(static_cast<int>(tasks.size()), opts.threads, [&](int i) {
      results[i] = ground_records(c, tasks[i].eta, tasks[i].lambda, tasks[i].method);
    });
    for (auto& r : results) report.records.insert(report.records.end(), r.begin(), r.end());
    return report;
  }

  const ProbeParams probe = ProbeParams::from_chi(1.0, c.chi);
  EchoOptions eo;
  eo.cutoff_tol = c.cutoff_tol;
  eo.threads = opts.threads;
  for (double eta : c.eta_grid) {
    const RabiParams base(1.0, eta, 0.0);
    for (Method m : c.methods) {
      const auto points = loschmidt_echo_sweep(base, probe, c.lambda_grid, c.time_grid, m, eo);
      for (const EchoPoint& pt : points) {
        Record r;
        r.figure = to_string(c.figure);
        r.method = to_string(m);
        r.lambda = pt.lambda;
        r.eta = eta;
        r.chi = c.chi;
        r.converged = pt.converged;
        r.wall_time = pt.wall_time;
        r.cutoff = pt.converged ? pt.series.params_snapshot.cutoff : 0;
        r.note = pt.critical ? "critical: " + pt.error : pt.error;
        Record g = r;
        g.value_name = "gamma";
        g.value = pt.converged ? pt.series.gamma_used : kNaN;
        report.records.push_back(g);
        for (std::size_t k = 0; k < c.time_grid.size(); ++k) {
          r.has_time = true;
          r.omega_c_t = c.time_grid[k];
          r.value_name = "L";
          r.value = pt.converged ? pt.series.l_values[k] : kNaN;
          report.records.push_back(r);
        }
      }
    }
  }
  return report;
}

void write_csv(const RunReport& report, std::ostream& out) {
  out << "figure,method,lambda,eta,chi,omega_c_t,value_name,value,cutoff,converged\n";
  for (const Record& r : report.records) {
    out << r.figure << ',' << r.method << ',' << fmt17(r.lambda) << ',' << fmt17(r.eta) << ',' << csv_real(r.chi)
        << ',' << (r.has_time ? fmt17(r.omega_c_t) : std::string()) << ',' << r.value_name << ','
        << csv_real(r.value) << ',' << r.cutoff << ',' << (r.converged ? "true" : "false") << '\n';
  }
}

void write_json(const RunReport& report, std::ostream& out) {
  nlohmann::ordered_json j;
  j["schema_version"] = report.schema_version;
  j["figure"] = report.figure;
  j["degraded"] = report.degraded_count();
  auto& recs = j["records"] = nlohmann::ordered_json::array();
  for (const Record& r : report.records) {
    nlohmann::ordered_json o;
    o["method"] = r.method;
    o["lambda"] = r.lambda;
    o["eta"] = r.eta;
    o["chi"] = std::isnan(r.chi) ? nlohmann::ordered_json() : nlohmann::ordered_json(r.chi);
    o["omega_c_t"] = r.has_time ? nlohmann::ordered_json(r.omega_c_t) : nlohmann::ordered_json();
    o["value_name"] = r.value_name;
    o["value"] = std::isnan(r.value) ? nlohmann::ordered_json() : nlohmann::ordered_json(r.value);
    o["cutoff"] = r.cutoff;
    o["converged"] = r.converged;
    o["wall_time"] = r.wall_time;
    if (!r.note.empty()) o["note"] = r.note;
    recs.push_back(std::move(o));
  }
  j["provenance"] = {{"config_hash", report.config_hash},
                     {"code_version", report.code_version},
                     {"seed", report.seed},
                     {"kernels", report.kernel_isa}};
  out << j.dump(2) << '\n';
}

void write_outputs(const RunReport& report, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  {
    std::ofstream csv(base / (report.figure + ".csv"));
    if (!csv) throw ConfigError("cannot write to '" + dir + "'");
    write_csv(report, csv);
  }
  std::ofstream js(base / "report.json");
  if (!js) throw ConfigError("cannot write to '" + dir + "'");
  write_json(report, js);
}

DispersiveReport validate_dispersive(const RabiParams& p, const ProbeParams& probe, const std::vector<double>& times,
                                     double cutoff_tol) {
  probe.validate();
  DispersiveReport rep;
  rep.times = times;
  const HamiltonianFactory bare = [&](FockCutoff c) { return build_rabi(p, c); };
  const FockCutoff cutoff = converge_cutoff(bare, cutoff_tol).cutoff;
  rep.cutoff = cutoff.n_max;
  const QuantumState ground = ground_state(bare(cutoff)).state;

  const double mean_n = photon_moments(ground, BosonLayout::trailing(ground.dims())).mean_n;
  rep.dispersive_regime = std::abs(probe.delta_s) >= 10.0 * probe.g_s * std::sqrt(mean_n + 1.0);
  if (!rep.dispersive_regime) {
    std::ostringstream os;
    os << "validate_dispersive: |delta_s| = " << std::abs(probe.delta_s) << " is not large against g_s sqrt(<n>+1) = "
       << probe.g_s * std::sqrt(mean_n + 1.0) << "; the dispersive reduction is not expected to hold";
    warn(os.str());
  }

  // probe index 0 is |e>_s, index 1 is |g>_s
  const int nr = ground.dim();
  CVector psi0(2 * nr);
  psi0.head(nr) = probe.beta * ground.amplitudes();
  psi0.tail(nr) = probe.alpha * ground.amplitudes();
  std::vector<int> dims{2};
  dims.insert(dims.end(), ground.dims().begin(), ground.dims().end());
  const QuantumState start(psi0, dims);
  const SpectralDecomposition full = diagonalize(build_tripartite(p, probe, cutoff));

  const EchoSeries echo =
      decoherence_factor(build_branch(p, probe, Branch::g, cutoff), build_branch(p, probe, Branch::e, cutoff), ground,
                         times);
  const double weight = 2.0 * std::abs(std::conj(probe.alpha) * probe.beta);
  for (std::size_t k = 0; k < times.size(); ++k) {
    const CVector v = evolve(full, start, times[k]).amplitudes();
    // <sigma_-> = <psi| g><e |psi>
    const cplx s_minus = v.tail(nr).dot(v.head(nr));
    const double exact = 2.0 * std::abs(s_minus);
    const double predicted = weight * std::abs(echo.d_values[k]);
    rep.exact.push_back(exact);
    rep.predicted.push_back(predicted);
    const double dev = predicted > 0.0 ? std::abs(exact - predicted) / predicted : std::abs(exact - predicted);
    rep.max_relative_deviation = std::max(rep.max_relative_deviation, dev);
  }
  return rep;
}

}  // namespace qrm
