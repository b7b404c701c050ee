#include "qrm/variational.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

#include <quadmath.h>

#include "qrm/error.hpp"
#include "qrm/spectra.hpp"

namespace qrm {
namespace {

using qd = __float128;
using cqd = __complex128;

void require_phase(Phase expected, const VariationalSolution& sol, const char* what) {
  if (sol.phase != expected) {
    throw PhaseDomainError(std::string(what) + ": solution was solved for the " + to_string(sol.phase) +
                           " phase, not the " + to_string(expected) + " phase");
  }
}

double sinh_sq(double x) {
  const double s = std::sinh(x);
  return s * s;
}

struct SpCoefficients {
  double alpha2;
  double q2;  // (g~/omega0~)^2
  double q4;  // (g~/omega0~)^4
  double omega0_tilde;
};

SpCoefficients sp_coefficients(const RabiParams& p) {
  const double alpha = displacement_amplitude(p);
  const DisplacedFrame f = displaced_frame(p, alpha);
  const double q = f.g_tilde / f.omega0_tilde;
  return {alpha * alpha, q * q, q * q * q * q, f.omega0_tilde};
}

}  // namespace

Phase phase_of(double lambda) {
  if (in_critical_guard(lambda)) {
    std::ostringstream os;
    os.precision(17);
    os << "lambda = " << lambda << " lies in the critical guard band";
    throw PhaseDomainError(os.str(), true);
  }
  return lambda < 1.0 ? Phase::normal : Phase::superradiant;
}

StationarityCubic stationarity_cubic(Phase phase, const RabiParams& p) {
  const double lambda = p.lambda();
  const double eta = p.eta();
  if (phase == Phase::normal) {
    const double l2 = lambda * lambda;
    return {3.0 * l2 * l2 / (2.0 * eta), 1.0 - l2};
  }
  if (!(lambda > 0.0)) throw PhaseDomainError("superradiant cubic needs lambda > 0");
  const double l4 = std::pow(lambda, 4);
  return {3.0 / (2.0 * eta * std::pow(lambda, 10)), 1.0 - 1.0 / l4};
}

double bracket_positive_root(const StationarityCubic& f) {
  // c3 = 0 only at lambda = 0, where the cubic degenerates to x^2 = 1.
  if (!(f.c3 > 0.0) && !(f.c3 == 0.0 && f.c2 > 0.0)) {
    throw InternalError("stationarity cubic needs a positive leading coefficient");
  }
  if (f.c3 == 0.0) return 1.0 / std::sqrt(f.c2);
  double lo = 0.0;
  // c2 > 0: at 1/sqrt(c2) the quadratic term alone reaches 1, at cbrt(1/c3) the cubic one does.
  // c2 <= 0: past 2|c2|/c3 we have c3 x + c2 >= c3 x / 2, and c3 x^3 / 2 >= 1 past cbrt(2/c3).
  double hi = f.c2 > 0.0 ? std::min(1.0 / std::sqrt(f.c2), std::cbrt(1.0 / f.c3))
                         : std::max(std::cbrt(2.0 / f.c3), 2.0 * -f.c2 / f.c3);
  if (f(hi) < 0.0) throw InternalError("stationarity cubic: upper bracket has the wrong sign");
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double fx = f(x);
    if (fx == 0.0) return x;
    (fx < 0.0 ? lo : hi) = x;
    const double d = f.derivative(x);
    double next = d > 0.0 ? x - fx / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 2.0 * std::numeric_limits<double>::epsilon() * x || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) {
      x = next;
      break;
    }
    x = next;
  }
  // polish: pick the better of x and its neighbours
  double best = x;
  for (double cand : {std::nextafter(x, 0.0), std::nextafter(x, hi + 1.0)}) {
    if (std::abs(f(cand)) < std::abs(f(best))) best = cand;
  }
  return best;
}

ClosedFormRoot closed_form_root(Phase phase, const RabiParams& p) {
  if (!(p.lambda() > 0.0)) throw PhaseDomainError("closed-form root is singular at lambda = 0");
  // The three terms cancel to O(1) from O(eta / lambda^4), so quad precision is used.
  const qd lambda = p.lambda();
  const qd eta = p.eta();
  const qd sqrt3 = sqrtq(qd(3.0));
  const qd third = qd(1.0) / qd(3.0);
  ClosedFormRoot out;
  if (phase == Phase::normal) {
    const qd l4 = powq(lambda, 4);
    const qd m = lambda * lambda - qd(1.0);  // lambda^2 - 1
    const qd poly = m * m * m;            // lambda^6 - 3 lambda^4 + 3 lambda^2 - 1
    const cqd radicand = qd(243.0) * powq(lambda, 16) * eta * eta + poly * qd(16.0) * powq(lambda, 8) * powq(eta, 4);
    const cqd a = qd(9.0) * sqrt3 * csqrtq(radicand) + qd(243.0) * powq(lambda, 8) * eta + poly * qd(8.0) * powq(eta, 3);
    const cqd c = cpowq(a, third);
    const cqd x = c / (qd(9.0) * l4) + qd(2.0) * m * eta / (qd(9.0) * l4) + qd(4.0) * m * m * eta * eta / (qd(9.0) * l4 * c);
    out.x = static_cast<double>(crealq(x));
    out.intermediate = {static_cast<long double>(crealq(a)), static_cast<long double>(cimagq(a))};
    return out;
  }
  const qd m = powq(lambda, 4) - qd(1.0);  // lambda^4 - 1
  const qd poly = -m * m * m;           // 1 - lambda^12 + 3 lambda^8 - 3 lambda^4
  const cqd radicand = qd(243.0) * powq(lambda, 20) * eta * eta + poly * qd(16.0) * powq(lambda, 28) * powq(eta, 4);
  const cqd b = qd(9.0) * sqrt3 * csqrtq(radicand) + qd(243.0) * powq(lambda, 10) * eta +
                poly * qd(8.0) * powq(lambda, 18) * powq(eta, 3);
  const cqd c = cpowq(b, third);
  const cqd x = c / qd(9.0) - qd(2.0) * m * powq(lambda, 6) * eta / qd(9.0) +
                qd(4.0) * m * m * powq(lambda, 12) * eta * eta / (qd(9.0) * c);
  out.x = static_cast<double>(crealq(x));
  out.intermediate = {static_cast<long double>(crealq(b)), static_cast<long double>(cimagq(b))};
  return out;
}

double variational_energy(Phase phase, double s, const RabiParams& p) {
  const double wc = p.omega_c();
  const double w0 = p.omega_0();
  const double lambda = p.lambda();
  const double x = std::exp(2.0 * s);
  if (phase == Phase::normal) {
    const double l2 = lambda * lambda;
    return wc * sinh_sq(s) - wc * l2 / 4.0 * x + 3.0 * l2 * l2 * wc * wc / (16.0 * w0) * x * x - w0 / 2.0 +
           l2 * wc * wc / (4.0 * w0);
  }
  const SpCoefficients c = sp_coefficients(p);
  const double l4 = std::pow(lambda, 4);
  const double wt = c.omega0_tilde;
  return wc * sinh_sq(s) - wc / (4.0 * l4) * x + 3.0 * wc * wc / (16.0 * wt * l4 * l4) * x * x - wt / 2.0 +
         wc * wc / (4.0 * wt * l4) + wc * c.alpha2;
}

double variational_energy_second_derivative(Phase phase, double s, const RabiParams& p) {
  const double wc = p.omega_c();
  const double lambda = p.lambda();
  const double x = std::exp(2.0 * s);
  if (phase == Phase::normal) {
    const double l2 = lambda * lambda;
    return 2.0 * wc * std::cosh(2.0 * s) - wc * l2 * x + 3.0 * l2 * l2 * wc * wc / p.omega_0() * x * x;
  }
  const double l4 = std::pow(lambda, 4);
  const double wt = lambda * lambda * p.omega_0();
  return 2.0 * wc * std::cosh(2.0 * s) - wc / l4 * x + 3.0 * wc * wc / (wt * l4 * l4) * x * x;
}

VariationalSolution solve_squeeze(Phase phase, const RabiParams& p) {
  if (phase == Phase::superradiant && !(p.lambda() > 1.0)) {
    throw PhaseDomainError("superradiant variational solution needs lambda > 1");
  }
  const StationarityCubic cubic = stationarity_cubic(phase, p);
  const double x = bracket_positive_root(cubic);
  if (!(x > 0.0) || !std::isfinite(x)) throw InternalError("stationarity cubic has no positive root");

  VariationalSolution sol;
  sol.phase = phase;
  sol.s = 0.5 * std::log(x);
  sol.residual = std::abs(cubic(x));
  sol.second_derivative = variational_energy_second_derivative(phase, sol.s, p);

  sol.diagnostics.x_bracket = x;
  if (p.lambda() == 0.0) {
    // decoupled: s = 0 exactly and the closed form has nothing to check
    sol.diagnostics.x_closed_form = x;
    return sol;
  }
  const ClosedFormRoot cf = closed_form_root(phase, p);
  sol.diagnostics.x_closed_form = cf.x;
  sol.diagnostics.intermediate = cf.intermediate;
  sol.diagnostics.relative_disagreement = std::abs(cf.x - x) / x;
  if (!(sol.diagnostics.relative_disagreement <= kDualPathTolerance)) {
    std::ostringstream os;
    os.precision(17);
    os << "closed-form and bracketing roots disagree: x=" << x << " vs " << cf.x << " (lambda=" << p.lambda()
       << ", eta=" << p.eta() << ")";
    throw InternalError(os.str());
  }
  return sol;
}

double gs_energy(Phase phase, VariationalSolution& sol, const RabiParams& p) {
  require_phase(phase, sol, "gs_energy");
  sol.energy = variational_energy(phase, sol.s, p);
  return sol.energy;
}

PhotonMoments photon_stats(Phase phase, VariationalSolution& sol, const RabiParams& p) {
  require_phase(phase, sol, "photon_stats");
  const double s = sol.s;
  const double x = std::exp(2.0 * s);
  PhotonMoments m;
  if (phase == Phase::normal) {
    const double q2 = std::pow(p.g() / p.omega_0(), 2);
    const double q4 = q2 * q2;
    m.mean_n = sinh_sq(s) + q2 - 8.0 * q4 * x;
    m.gamma = 0.5 * sinh_sq(2.0 * s) + q2 / x - 8.0 * q4 * x * x;
  } else {
    const SpCoefficients c = sp_coefficients(p);
    m.mean_n = sinh_sq(s) + c.q2 - 8.0 * c.q4 / 3.0 * x + c.alpha2;
    m.gamma = 0.5 * sinh_sq(2.0 * s) + c.q2 / x + (c.alpha2 - 8.0 * c.q4 / 3.0 * x) * x;
  }
  sol.mean_n = m.mean_n;
  sol.gamma_prime = m.gamma;
  sol.gamma_valid = m.gamma >= 0.0;
  return m;
}

VariationalSolution solve_variational(Phase phase, const RabiParams& p) {
  VariationalSolution sol = solve_squeeze(phase, p);
  gs_energy(phase, sol, p);
  photon_stats(phase, sol, p);
  return sol;
}

}  // namespace qrm
