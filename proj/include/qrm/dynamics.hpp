#pragma once

// Branch time evolution, the decoherence factor D(t) = <G| e^{i H_g t} e^{-i H_e t} |G>,
// the Loschmidt echo L = |D|^2 and the probe's reduced state.

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qrm/analytic.hpp"
#include "qrm/hamiltonians.hpp"
#include "qrm/spectra.hpp"

namespace qrm {

enum class Method { exact, effective, variational, analytic };

const char* to_string(Method m);
// ConfigError on an unknown name.
Method parse_method(const std::string& name);

struct EchoSnapshot {
  double omega_c = 0.0;
  double omega_0 = 0.0;
  double g = 0.0;
  double lambda = 0.0;
  double eta = 0.0;
  double chi = 0.0;
  double omega_s = 0.0;
  double g_s = 0.0;
  double delta_s = 0.0;
  double alpha_disp = 0.0;  // common frame displacement used by the exact/effective paths
  Method method = Method::exact;
  int cutoff = 0;           // n_max; 0 for the closed-form methods
};

struct EchoSeries {
  std::vector<double> times;
  std::vector<cplx> d_values;
  std::vector<double> l_values;
  // 1 - L, computed without cancellation (||Phi_e - D Phi_g||^2 for the spectral path)
  std::vector<double> decay_values;
  double gamma_used = std::numeric_limits<double>::quiet_NaN();
  EchoSnapshot params_snapshot;
};

// psi(t) = V exp(-i Lambda t) V^dag psi0. InvalidStateError if psi0 is not
// normalized, DimensionError on a size mismatch.
QuantumState evolve(const SpectralDecomposition& decomp, const QuantumState& psi0, double t);

EchoSeries decoherence_factor(const Operator& h_g, const Operator& h_e, const QuantumState& ground,
                              const std::vector<double>& times);
EchoSeries decoherence_factor(const SpectralDecomposition& g, const SpectralDecomposition& e,
                              const QuantumState& ground, const std::vector<double>& times);

// rho in the (|e>, |g>) basis; InvalidStateError when |d| > 1 + 1e-10.
Eigen::Matrix2cd probe_reduced_state(const ProbeParams& probe, cplx d);

struct EchoOptions {
  double cutoff_tol = 1e-8;
  int n_start = 16;
  int threads = 1;
};

// One lambda column of a sweep. On failure `error` is set, `converged` is
// false and the series is empty.
struct EchoPoint {
  double lambda = 0.0;
  EchoSeries series;
  bool converged = false;
  bool critical = false;  // failed inside the guard band around lambda = 1
  std::string error;
  double wall_time = 0.0;  // seconds
};

// Echo at one coupling. For exact/effective the Fock cutoff is converged on
// the ground energy of the branch-free Hamiltonian in the frame used (bare for
// lambda <= 1, displaced by alpha_lambda above), then that cutoff serves both
// branches. Throws on non-convergence or a phase-domain violation.
EchoSeries echo_series(const RabiParams& p, const ProbeParams& probe, const std::vector<double>& times,
                       Method method, const EchoOptions& opts = {});

// Sweeps lambda at fixed omega_c and omega_0 (g follows lambda). Points are
// returned in grid order; per-point failures are recorded, not thrown.
std::vector<EchoPoint> loschmidt_echo_sweep(const RabiParams& p, const ProbeParams& probe,
                                            const std::vector<double>& lambdas, const std::vector<double>& times,
                                            Method method, const EchoOptions& opts = {});

// Runs fn(i) for i in [0, n) on up to `threads` workers. fn must not throw.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace qrm
