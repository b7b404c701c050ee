#include "qrm/hamiltonians.hpp"

#include <cmath>
#include <sstream>

#include "qrm/error.hpp"

namespace qrm {
namespace {

Operator checked_hermitian(Operator h, const char* what) {
  if (!h.is_hermitian(1e-12)) {
    std::ostringstream os;
    os << what << ": constructed operator is not Hermitian (defect " << h.hermiticity_defect() << ")";
    throw InternalError(os.str());
  }
  return h;
}

Operator spin_identity() { return Operator::identity({2}); }

double branch_sign(Branch b) { return b == Branch::e ? 1.0 : -1.0; }

// w a^dag a - c2 (a+a^dag)^2 + c4 (a+a^dag)^4 + c0
Operator quartic_oscillator(double w, double c2, double c4, double c0, FockCutoff cutoff) {
  Operator h = w * number_operator(cutoff);
  h -= c2 * quadrature_power(cutoff, 2);
  h += c4 * quadrature_power(cutoff, 4);
  h += c0 * Operator::identity({cutoff.dim()});
  return h;
}

}  // namespace

RabiParams::RabiParams(double omega_c, double omega_0, double g) : omega_c_(omega_c), omega_0_(omega_0), g_(g) {
  if (!(omega_c > 0.0) || !(omega_0 > 0.0)) throw ConfigError("RabiParams: frequencies must be positive");
  if (!(g >= 0.0) || !std::isfinite(g)) throw ConfigError("RabiParams: coupling must be finite and non-negative");
}

RabiParams RabiParams::from_lambda(double lambda, double eta, double omega_c) {
  if (!(lambda >= 0.0)) throw ConfigError("RabiParams: lambda must be non-negative");
  const double omega_0 = eta * omega_c;
  return {omega_c, omega_0, lambda * std::sqrt(omega_0 * omega_c) / 2.0};
}

double RabiParams::lambda() const noexcept { return 2.0 * g_ / std::sqrt(omega_0_ * omega_c_); }

ProbeParams ProbeParams::from_coupling(double omega_c, double omega_s, double g_s, cplx alpha, cplx beta) {
  ProbeParams p;
  p.omega_s = omega_s;
  p.g_s = g_s;
  p.delta_s = omega_s - omega_c;
  if (p.delta_s == 0.0) throw ConfigError("ProbeParams: resonant probe (delta_s = 0) has no dispersive limit");
  p.chi = g_s * g_s / p.delta_s;
  p.alpha = alpha;
  p.beta = beta;
  p.validate();
  return p;
}

ProbeParams ProbeParams::from_chi(double omega_c, double chi, double detuning_ratio) {
  if (chi == 0.0) return from_coupling(omega_c, omega_c + detuning_ratio, 0.0);
  // g_s = |chi| R, delta_s = chi R^2 gives g_s^2 / delta_s = chi and |delta_s| / g_s = R.
  const double g_s = std::abs(chi) * detuning_ratio;
  const double delta = chi * detuning_ratio * detuning_ratio;
  ProbeParams p = from_coupling(omega_c, omega_c + delta, g_s);
  p.chi = chi;  // exact value requested, not the round-tripped one
  return p;
}

void ProbeParams::validate() const {
  const double norm = std::norm(alpha) + std::norm(beta);
  if (std::abs(norm - 1.0) > 1e-12) throw ConfigError("ProbeParams: |alpha|^2 + |beta|^2 must equal 1");
  if (!(std::abs(delta_s) > 0.0)) throw ConfigError("ProbeParams: delta_s must be nonzero");
  const double expected = g_s * g_s / delta_s;
  if (std::abs(chi - expected) > 1e-12 * std::max(1.0, std::abs(expected))) {
    throw ConfigError("ProbeParams: chi must equal g_s^2 / delta_s");
  }
}

double DisplacedFrame::low_branch_linear_coefficient(const RabiParams& p) const {
  return p.omega_c() * alpha_disp + p.g() * std::sin(2.0 * theta);
}

DisplacedFrame displaced_frame(const RabiParams& p, double alpha_disp) {
  const double lambda = p.lambda();
  DisplacedFrame f;
  f.alpha_disp = alpha_disp;
  f.theta = 0.5 * std::atan(-4.0 * p.g() * alpha_disp / p.omega_0());
  f.omega0_tilde = lambda * lambda * p.omega_0();
  f.g_tilde = lambda > 0.0 ? std::sqrt(p.omega_c() * p.omega_0()) / (2.0 * lambda) : 0.0;
  return f;
}

double displacement_amplitude(const RabiParams& p) {
  const double lambda = p.lambda();
  if (!(lambda > 1.0)) throw PhaseDomainError("alpha_lambda is real only for lambda > 1", lambda == 1.0);
  const double l2 = lambda * lambda;
  return std::sqrt(p.omega_0() * (l2 * l2 - 1.0) / (4.0 * l2 * p.omega_c()));
}

Operator build_rabi(const RabiParams& p, FockCutoff cutoff) {
  const Operator a = annihilation(cutoff);
  const Operator x = a + a.adjoint();
  Operator h = tensor(spin_identity(), p.omega_c() * number_operator(cutoff));
  h += tensor(0.5 * p.omega_0() * pauli(Axis::z), Operator::identity({cutoff.dim()}));
  h -= tensor(p.g() * pauli(Axis::x), x);
  return checked_hermitian(std::move(h), "build_rabi");
}

double branch_offset(const ProbeParams& probe, Branch branch) {
  return branch == Branch::e ? 0.5 * probe.omega_s + probe.chi : -0.5 * probe.omega_s;
}

Operator build_branch(const RabiParams& p, const ProbeParams& probe, Branch branch, FockCutoff cutoff) {
  const RabiParams shifted = p.with_cavity(p.omega_c() + branch_sign(branch) * probe.chi);
  Operator h = build_rabi(shifted, cutoff);
  h += branch_offset(probe, branch) * Operator::identity(h.dims());
  return checked_hermitian(std::move(h), "build_branch");
}

Operator build_tripartite(const RabiParams& p, const ProbeParams& probe, FockCutoff cutoff) {
  const Operator a = annihilation(cutoff);
  const Operator rabi = build_rabi(p, cutoff);
  Operator h = tensor(spin_identity(), rabi);
  h += tensor(0.5 * probe.omega_s * pauli(Axis::z), Operator::identity({2, cutoff.dim()}));
  // -g_s (a^dag sigma_-^(s) + sigma_+^(s) a)
  h -= probe.g_s * tensor(sigma_minus(), tensor(spin_identity(), a.adjoint()));
  h -= probe.g_s * tensor(sigma_plus(), tensor(spin_identity(), a));
  return checked_hermitian(std::move(h), "build_tripartite");
}

Operator displaced_number(double alpha, FockCutoff cutoff) {
  const Operator a = annihilation(cutoff);
  const Operator id = Operator::identity({cutoff.dim()});
  // (a^dag + alpha)(a + alpha) = n + alpha (a + a^dag) + alpha^2
  Operator n = number_operator(cutoff);
  n += alpha * (a + a.adjoint());
  n += alpha * alpha * id;
  return n;
}

std::pair<Operator, DisplacedFrame> build_displaced_rabi(const RabiParams& p, double alpha_disp,
                                                         FockCutoff cutoff) {
  const Operator a = annihilation(cutoff);
  const Operator x = a + a.adjoint();
  const Operator boson_id = Operator::identity({cutoff.dim()});
  Operator h = tensor(spin_identity(), p.omega_c() * displaced_number(alpha_disp, cutoff));
  h -= tensor(p.g() * pauli(Axis::x), x);
  h += tensor(0.5 * p.omega_0() * pauli(Axis::z), boson_id);
  h -= tensor(2.0 * p.g() * alpha_disp * pauli(Axis::x), boson_id);
  return {checked_hermitian(std::move(h), "build_displaced_rabi"), displaced_frame(p, alpha_disp)};
}

Operator build_displaced_branch(const RabiParams& p, const ProbeParams& probe, Branch branch, double alpha_disp,
                                FockCutoff cutoff) {
  const RabiParams shifted = p.with_cavity(p.omega_c() + branch_sign(branch) * probe.chi);
  Operator h = build_displaced_rabi(shifted, alpha_disp, cutoff).first;
  h += branch_offset(probe, branch) * Operator::identity(h.dims());
  return checked_hermitian(std::move(h), "build_displaced_branch");
}

Operator build_effective_np(const RabiParams& p, FockCutoff cutoff) {
  const double wc = p.omega_c();
  const double w0 = p.omega_0();
  const double l2 = p.lambda() * p.lambda();
  Operator h = quartic_oscillator(wc, wc * l2 / 4.0, l2 * l2 * wc * wc / (16.0 * w0),
                                  -w0 / 2.0 + l2 * wc * wc / (4.0 * w0), cutoff);
  return checked_hermitian(std::move(h), "build_effective_np");
}

Operator build_effective_sp(const RabiParams& p, FockCutoff cutoff) {
  const double alpha = displacement_amplitude(p);
  const DisplacedFrame f = displaced_frame(p, alpha);
  const double wc = p.omega_c();
  const double gt2 = f.g_tilde * f.g_tilde;
  const double wt = f.omega0_tilde;
  Operator h = quartic_oscillator(wc, gt2 / wt, gt2 * gt2 / (wt * wt * wt),
                                  -wt / 2.0 + gt2 * wc / (wt * wt * wt) + wc * alpha * alpha, cutoff);
  return checked_hermitian(std::move(h), "build_effective_sp");
}

Operator build_effective_branch(const RabiParams& p, const ProbeParams& probe, Branch branch, FockCutoff cutoff) {
  const double sign = branch_sign(branch);
  Operator h = [&] {
    if (p.lambda() <= 1.0) {
      return build_effective_np(p.with_cavity(p.omega_c() + sign * probe.chi), cutoff);
    }
    const double alpha = displacement_amplitude(p);
    Operator sp = build_effective_sp(p, cutoff);
    sp += sign * probe.chi * displaced_number(alpha, cutoff);
    return sp;
  }();
  h += branch_offset(probe, branch) * Operator::identity(h.dims());
  return checked_hermitian(std::move(h), "build_effective_branch");
}

}  // namespace qrm
