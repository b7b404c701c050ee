#pragma once

// Figure reproductions and parameter sweeps: configuration, execution, CSV and
// JSON output, and the dispersive-reduction check.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qrm/dynamics.hpp"

namespace qrm {

enum class Figure { fig1, fig2, fig3, fig4, fig5, custom };
// ground: energy / mean_n / gamma per (eta, lambda); echo: L per (eta, lambda, t)
enum class Quantity { ground, echo };

const char* to_string(Figure f);
Figure parse_figure(const std::string& name);
const char* to_string(Quantity q);
Quantity parse_quantity(const std::string& name);

struct SweepConfig {
  Figure figure = Figure::custom;
  Quantity quantity = Quantity::ground;
  std::vector<double> lambda_grid;
  std::vector<double> eta_grid;
  std::vector<double> time_grid;  // units of 1/omega_c
  double chi = 1e-3;              // units of omega_c
  std::vector<Method> methods;
  double cutoff_tol = 1e-8;
  std::string output_path = ".";

  // ConfigError on the first violated invariant.
  void validate() const;
};

// "a, b, c" or "start:step:stop" (inclusive, values rounded to 12 significant digits).
std::vector<double> parse_grid(const std::string& text);

// One `key = value` per line, '#' starts a comment. figure = figN loads that
// figure's defaults first; later keys override. Unknown keys are errors.
SweepConfig parse_config(std::istream& in);
SweepConfig load_config(const std::string& path);

SweepConfig default_config(Figure f);

// lambda on [lo, hi]: step 0.02, 0.005 on [0.9, 1.1], extra points near 1
// (1 +- k 5e-4 for k < 10, 1 +- 1e-4, 1 +- 1e-5); lambda = 1 itself is left out.
std::vector<double> near_critical_grid(double lo, double hi);

struct Record {
  std::string figure;
  std::string method;
  double lambda = 0.0;
  double eta = 0.0;
  double chi = 0.0;
  double omega_c_t = 0.0;
  bool has_time = false;
  std::string value_name;
  double value = 0.0;
  int cutoff = 0;
  bool converged = false;
  double wall_time = 0.0;
  std::string note;
};

struct RunOptions {
  int threads = 1;
  std::uint64_t seed = 0;  // recorded only
};

struct RunReport {
  int schema_version = 1;
  std::string figure;
  std::vector<Record> records;
  std::string config_hash;
  std::string code_version;
  std::uint64_t seed = 0;
  std::string kernel_isa;

  int degraded_count() const;
};

// Validates, then evaluates every grid point. Non-convergent points are kept
// as degraded records (converged = false).
RunReport run(const SweepConfig& config, const RunOptions& opts = {});

// Canonical text of a config; its FNV-1a hash is the provenance hash.
std::string canonical_text(const SweepConfig& config);
std::string config_hash(const SweepConfig& config);
const char* code_version();

void write_csv(const RunReport& report, std::ostream& out);
void write_json(const RunReport& report, std::ostream& out);
// <dir>/<figure>.csv and <dir>/report.json; creates dir.
void write_outputs(const RunReport& report, const std::string& dir);

struct DispersiveReport {
  std::vector<double> times;
  // 2 |<sigma_->| of the probe from the full probe + Rabi evolution
  std::vector<double> exact;
  // 2 |alpha* beta| |D(t)| from the two branch Hamiltonians
  std::vector<double> predicted;
  double max_relative_deviation = 0.0;
  int cutoff = 0;
  bool dispersive_regime = true;  // |delta_s| >= 10 g_s sqrt(<n> + 1)
};

DispersiveReport validate_dispersive(const RabiParams& p, const ProbeParams& probe, const std::vector<double>& times,
                                     double cutoff_tol = 1e-8);

}  // namespace qrm
