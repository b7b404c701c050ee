#include "qrm/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

#include "qrm/error.hpp"
#include "qrm/kernels.hpp"
#include "qrm/variational.hpp"

namespace qrm {
namespace {

constexpr double kNormTol = 1e-10;

// Split-complex scratch vector for the kernels.
struct Split {
  std::vector<double> re, im;
  explicit Split(std::size_t n = 0) : re(n), im(n) {}
  static Split from(const CVector& v) {
    Split s(v.size());
    for (Eigen::Index k = 0; k < v.size(); ++k) {
      s.re[k] = v[k].real();
      s.im[k] = v[k].imag();
    }
    return s;
  }
  CVector to_vector() const {
    CVector v(re.size());
    for (std::size_t k = 0; k < re.size(); ++k) v[k] = {re[k], im[k]};
    return v;
  }
};

void require_normalized(const QuantumState& psi, const char* what) {
  if (std::abs(psi.norm() - 1.0) > kNormTol) {
    std::ostringstream os;
    os << what << ": state must be normalized (norm " << psi.norm() << ")";
    throw InvalidStateError(os.str());
  }
}

void require_same_space(const std::vector<int>& a, const std::vector<int>& b, const char* what) {
  if (a != b) throw DimensionError(std::string(what) + ": Hilbert space dimensions differ");
}

// out_k = exp(-i e_k t) c_k
void phases_complex(const Eigen::VectorXd& e, double t, Eigen::VectorXcd& out, const CVector& c) {
  out.resize(c.size());
  for (Eigen::Index k = 0; k < c.size(); ++k) out[k] = std::polar(1.0, -e[k] * t) * c[k];
}

void fill_from_d(EchoSeries& s) {
  s.l_values.resize(s.d_values.size());
  for (std::size_t k = 0; k < s.d_values.size(); ++k) s.l_values[k] = std::norm(s.d_values[k]);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

EchoSeries closed_form_series(double gamma, double chi, const std::vector<double>& times) {
  EchoSeries s;
  s.times = times;
  s.gamma_used = gamma;
  for (double t : times) {
    const double x = -4.0 * gamma * chi * chi * t * t;
    s.l_values.push_back(std::exp(x));
    s.decay_values.push_back(-std::expm1(x));
    s.d_values.emplace_back(std::exp(0.5 * x), 0.0);
  }
  return s;
}

}  // namespace

const char* to_string(Method m) {
  switch (m) {
    case Method::exact: return "exact";
    case Method::effective: return "effective";
    case Method::variational: return "variational";
    case Method::analytic: return "analytic";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  for (Method m : {Method::exact, Method::effective, Method::variational, Method::analytic}) {
    if (name == to_string(m)) return m;
  }
  throw ConfigError("unknown method '" + name + "' (expected exact, effective, variational or analytic)");
}

QuantumState evolve(const SpectralDecomposition& decomp, const QuantumState& psi0, double t) {
  if (psi0.dim() != decomp.dim()) throw DimensionError("evolve: state and Hamiltonian dimensions differ");
  require_normalized(psi0, "evolve");
  if (t == 0.0) return psi0;
  const std::size_t n = decomp.dim();
  if (!decomp.is_real()) {
    const CMatrix v = decomp.vectors();
    Eigen::VectorXcd c;
    phases_complex(decomp.energies(), t, c, v.adjoint() * psi0.amplitudes());
    return QuantumState(v * c, psi0.dims());
  }
  const auto& k = kernels::active();
  const double* v = decomp.real_vectors().data();
  const Split in = Split::from(psi0.amplitudes());
  Split c(n), rot(n), out(n);
  k.gemv_t(v, n, n, in.re.data(), in.im.data(), c.re.data(), c.im.data());
  kernels::phase_rotate(decomp.energies().data(), t, c.re.data(), c.im.data(), rot.re.data(), rot.im.data(), n);
  k.gemv(v, n, n, rot.re.data(), rot.im.data(), out.re.data(), out.im.data());
  return QuantumState(out.to_vector(), psi0.dims());
}

EchoSeries decoherence_factor(const SpectralDecomposition& g, const SpectralDecomposition& e,
                              const QuantumState& ground, const std::vector<double>& times) {
  require_same_space(g.dims(), e.dims(), "decoherence_factor");
  require_same_space(g.dims(), ground.dims(), "decoherence_factor");
  require_normalized(ground, "decoherence_factor");

  EchoSeries s;
  s.times = times;
  s.d_values.reserve(times.size());
  s.decay_values.reserve(times.size());

  if (!g.is_real() || !e.is_real()) {
    const CMatrix vg = g.vectors();
    const CMatrix ve = e.vectors();
    const CMatrix m = vg.adjoint() * ve;
    const CVector cg = vg.adjoint() * ground.amplitudes();
    const CVector ce = ve.adjoint() * ground.amplitudes();
    Eigen::VectorXcd u, w;
    for (double t : times) {
      phases_complex(g.energies(), t, u, cg);
      phases_complex(e.energies(), t, w, ce);
      CVector y = m * w;
      const cplx d = u.dot(y);
      y -= d * u;
      s.d_values.push_back(d);
      s.decay_values.push_back(y.squaredNorm());
    }
    fill_from_d(s);
    return s;
  }

  // Everything is expressed in the H_g eigenbasis: u = exp(-i E_g t) V_g^T G is
  // Phi_g(t) and y = V_g^T V_e exp(-i E_e t) V_e^T G is Phi_e(t).
  const std::size_t n = g.dim();
  const Eigen::MatrixXd m = g.real_vectors().transpose() * e.real_vectors();
  const Split in = Split::from(ground.amplitudes());
  Split cg(n), ce(n), u(n), w(n), y(n);
  const auto& k = kernels::active();
  k.gemv_t(g.real_vectors().data(), n, n, in.re.data(), in.im.data(), cg.re.data(), cg.im.data());
  k.gemv_t(e.real_vectors().data(), n, n, in.re.data(), in.im.data(), ce.re.data(), ce.im.data());
  for (double t : times) {
    kernels::phase_rotate(g.energies().data(), t, cg.re.data(), cg.im.data(), u.re.data(), u.im.data(), n);
    kernels::phase_rotate(e.energies().data(), t, ce.re.data(), ce.im.data(), w.re.data(), w.im.data(), n);
    k.gemv(m.data(), n, n, w.re.data(), w.im.data(), y.re.data(), y.im.data());
    const cplx d = k.dot_conj(u.re.data(), u.im.data(), y.re.data(), y.im.data(), n);
    k.axpy_neg(d, u.re.data(), u.im.data(), y.re.data(), y.im.data(), n);
    s.d_values.push_back(d);
    s.decay_values.push_back(k.norm_sq(y.re.data(), y.im.data(), n));
  }
  fill_from_d(s);
  return s;
}

EchoSeries decoherence_factor(const Operator& h_g, const Operator& h_e, const QuantumState& ground,
                              const std::vector<double>& times) {
  require_same_space(h_g.dims(), h_e.dims(), "decoherence_factor");
  require_same_space(h_g.dims(), ground.dims(), "decoherence_factor");
  return decoherence_factor(diagonalize(h_g), diagonalize(h_e), ground, times);
}

Eigen::Matrix2cd probe_reduced_state(const ProbeParams& probe, cplx d) {
  if (std::abs(d) > 1.0 + 1e-10) {
    std::ostringstream os;
    os << "probe_reduced_state: |d| = " << std::abs(d) << " exceeds 1";
    throw InvalidStateError(os.str());
  }
  Eigen::Matrix2cd rho;
  const cplx coherence = d * std::conj(probe.alpha) * probe.beta;  // <e| rho |g>
  rho(0, 0) = std::norm(probe.beta);
  rho(1, 1) = std::norm(probe.alpha);
  rho(0, 1) = coherence;
  rho(1, 0) = std::conj(coherence);
  return rho;
}

EchoSeries echo_series(const RabiParams& p, const ProbeParams& probe, const std::vector<double>& times,
                       Method method, const EchoOptions& opts) {
  EchoSnapshot snap;
  snap.omega_c = p.omega_c();
  snap.omega_0 = p.omega_0();
  snap.g = p.g();
  snap.lambda = p.lambda();
  snap.eta = p.eta();
  snap.chi = probe.chi;
  snap.omega_s = probe.omega_s;
  snap.g_s = probe.g_s;
  snap.delta_s = probe.delta_s;
  snap.method = method;

  const double lambda = p.lambda();
  EchoSeries s;
  if (method == Method::analytic) {
    s = closed_form_series(analytic_ground_state(p).gamma, probe.chi, times);
  } else if (method == Method::variational) {
    const VariationalSolution sol = solve_variational(phase_of(lambda), p);
    if (!sol.gamma_valid) {
      std::ostringstream os;
      os.precision(17);
      os << "variational gamma' = " << sol.gamma_prime << " is negative (fourth-order correction dominates)";
      throw ConvergenceError(os.str());
    }
    s = closed_form_series(sol.gamma_prime, probe.chi, times);
  } else {
    const bool displaced = lambda > 1.0;
    const double alpha = displaced ? displacement_amplitude(p) : 0.0;
    snap.alpha_disp = alpha;
    HamiltonianFactory bare;
    std::function<Operator(Branch, FockCutoff)> branch;
    if (method == Method::exact) {
      bare = [&](FockCutoff c) { return displaced ? build_displaced_rabi(p, alpha, c).first : build_rabi(p, c); };
      branch = [&](Branch b, FockCutoff c) {
        return displaced ? build_displaced_branch(p, probe, b, alpha, c) : build_branch(p, probe, b, c);
      };
    } else {
      bare = [&](FockCutoff c) { return displaced ? build_effective_sp(p, c) : build_effective_np(p, c); };
      branch = [&](Branch b, FockCutoff c) { return build_effective_branch(p, probe, b, c); };
    }
    const CutoffSearch search = converge_cutoff(bare, opts.cutoff_tol, opts.n_start);
    const FockCutoff cutoff = search.cutoff;
    const GroundStateResult gs = ground_state(bare(cutoff));
    s = decoherence_factor(branch(Branch::g, cutoff), branch(Branch::e, cutoff), gs.state, times);
    s.gamma_used = photon_moments(gs.state, BosonLayout::trailing(gs.state.dims(), alpha)).gamma;
    snap.cutoff = cutoff.n_max;
  }
  s.params_snapshot = snap;
  return s;
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  const int workers = std::max(1, std::min(threads, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

std::vector<EchoPoint> loschmidt_echo_sweep(const RabiParams& p, const ProbeParams& probe,
                                            const std::vector<double>& lambdas, const std::vector<double>& times,
                                            Method method, const EchoOptions& opts) {
  if (lambdas.empty() || times.empty()) throw ConfigError("loschmidt_echo_sweep: grids must be non-empty");
  std::vector<EchoPoint> points(lambdas.size());
  parallel_for(static_cast<int>(lambdas.size()), opts.threads, [&](int i) {
    EchoPoint& pt = points[i];
    pt.lambda = lambdas[i];
    const auto t0 = std::chrono::steady_clock::now();
    try {
      // g follows lambda at the bare omega_c and omega_0
      const double g = 0.5 * lambdas[i] * std::sqrt(p.omega_0() * p.omega_c());
      pt.series = echo_series(RabiParams(p.omega_c(), p.omega_0(), g), probe, times, method, opts);
      pt.converged = true;
    } catch (const PhaseDomainError& e) {
      pt.error = e.what();
      pt.critical = e.critical();
    } catch (const std::exception& e) {
      pt.error = e.what();
    }
    pt.wall_time = seconds_since(t0);
  });
  return points;
}

}  // namespace qrm
