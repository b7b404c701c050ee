#include "qrm/analytic.hpp"

#include <cmath>
#include <sstream>

#include "qrm/error.hpp"

namespace qrm {
namespace {

[[noreturn]] void domain_error(const char* what, double lambda) {
  std::ostringstream os;
  os.precision(17);
  os << what << " (lambda = " << lambda << ")";
  throw PhaseDomainError(os.str(), in_critical_guard(lambda));
}

double sinh_sq(double x) {
  const double s = std::sinh(x);
  return s * s;
}

}  // namespace

const char* to_string(Phase phase) { return phase == Phase::normal ? "normal" : "superradiant"; }

bool in_critical_guard(double lambda) { return std::abs(lambda - 1.0) < kCriticalGuard; }

double squeezing_np(double lambda) {
  if (!(lambda >= 0.0)) domain_error("squeezing_np: lambda must be non-negative", lambda);
  if (lambda >= 1.0 || in_critical_guard(lambda)) {
    domain_error("squeezing_np: normal-phase squeezing diverges at lambda >= 1", lambda);
  }
  return -0.25 * std::log1p(-lambda * lambda);
}

double variance_np(const RabiParams& p) {
  const double r = squeezing_np(p.lambda());
  const double q = p.g() / p.omega_0();
  return 0.5 * sinh_sq(2.0 * r) + q * q * std::exp(-2.0 * r);
}

SuperradiantFrame superradiant_frame(const RabiParams& p) {
  const double lambda = p.lambda();
  if (lambda <= 1.0 || in_critical_guard(lambda)) {
    domain_error("superradiant_frame: defined only for lambda > 1 outside the critical guard", lambda);
  }
  const double l4 = std::pow(lambda, 4);
  SuperradiantFrame f;
  f.alpha_lambda = displacement_amplitude(p);
  f.r_sp = -0.25 * std::log1p(-1.0 / l4);
  return f;
}

double variance_sp(const RabiParams& p) {
  const SuperradiantFrame f = superradiant_frame(p);
  const double lambda = p.lambda();
  const double q2 = 1.0 / (4.0 * std::pow(lambda, 6) * p.eta());
  const double a2 = f.alpha_lambda * f.alpha_lambda;
  return 0.5 * sinh_sq(2.0 * f.r_sp) + a2 * std::exp(2.0 * f.r_sp) + q2 * std::exp(-2.0 * f.r_sp);
}

AnalyticGroundState analytic_ground_state(const RabiParams& p) {
  const double lambda = p.lambda();
  const double wc = p.omega_c();
  AnalyticGroundState s;
  if (lambda < 1.0) {
    s.phase = Phase::normal;
    s.r = squeezing_np(lambda);
    s.epsilon = wc * std::sqrt(1.0 - lambda * lambda);
    // low branch of (eps - omega_c + omega_0 sigma_z) / 2
    s.energy = 0.5 * (s.epsilon - wc - p.omega_0());
    s.gamma = variance_np(p);
    const double q = p.g() / p.omega_0();
    s.mean_n = sinh_sq(s.r) + q * q;
    return s;
  }
  const SuperradiantFrame f = superradiant_frame(p);
  const DisplacedFrame frame = displaced_frame(p, f.alpha_lambda);
  const double a2 = f.alpha_lambda * f.alpha_lambda;
  s.phase = Phase::superradiant;
  s.r = f.r_sp;
  s.alpha_disp = f.alpha_lambda;
  s.epsilon = wc * std::sqrt(1.0 - 1.0 / std::pow(lambda, 4));
  // The rotated atom splits by omega0~ = lambda^2 omega_0 in this frame.
  s.energy = 0.5 * (s.epsilon - wc - frame.omega0_tilde) + wc * a2;
  s.gamma = variance_sp(p);
  const double q = frame.g_tilde / frame.omega0_tilde;
  s.mean_n = sinh_sq(s.r) + q * q + a2;
  return s;
}

double short_time_le(double gamma, double chi, double t) {
  if (!(gamma >= 0.0)) throw PhaseDomainError("short_time_le: gamma must be non-negative");
  return std::exp(-4.0 * gamma * chi * chi * t * t);
}

}  // namespace qrm
