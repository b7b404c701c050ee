#pragma once

// Finite-eta variational ground states with a single-mode squeezed trial state
// S(s)|0> on the low spin branch of the effective Hamiltonians.
//
// The stationarity condition dE/ds = 0 becomes, with x = exp(2s),
//     c3 x^3 + c2 x^2 - 1 = 0,   c3 > 0,
// normal phase:       c3 = 3 lambda^4 / (2 eta),        c2 = 1 - lambda^2
// superradiant phase: c3 = 3 / (2 eta lambda^10),       c2 = 1 - lambda^-4.
// It has exactly one positive root (value -1 at x = 0, convex growth after the
// only positive turning point). The root is found by a safeguarded
// Newton/bisection search; the Cardano-type closed forms are evaluated as an
// independent cross-check.

#include <complex>
#include <string>

#include "qrm/analytic.hpp"
#include "qrm/spectra.hpp"

namespace qrm {

struct StationarityCubic {
  double c3 = 0.0;
  double c2 = 0.0;

  double operator()(double x) const { return (c3 * x + c2) * x * x - 1.0; }
  double derivative(double x) const { return (3.0 * c3 * x + 2.0 * c2) * x; }
};

StationarityCubic stationarity_cubic(Phase phase, const RabiParams& p);

// Unique positive root of the cubic by bracketing.
double bracket_positive_root(const StationarityCubic& cubic);

struct ClosedFormRoot {
  double x = 0.0;
  // A (normal) or B (superradiant) of the closed form, as evaluated.
  std::complex<long double> intermediate;
};

// The Cardano-type closed forms, evaluated in quad precision with
// principal complex cube roots and the real part taken at the end.
ClosedFormRoot closed_form_root(Phase phase, const RabiParams& p);

struct VariationalDiagnostics {
  double x_bracket = 0.0;
  double x_closed_form = 0.0;
  std::complex<long double> intermediate;
  double relative_disagreement = 0.0;
};

struct VariationalSolution {
  Phase phase = Phase::normal;
  double s = 0.0;
  double energy = 0.0;
  double mean_n = 0.0;
  double gamma_prime = 0.0;
  double residual = 0.0;           // |cubic(exp(2s))|
  double second_derivative = 0.0;  // d^2 E / ds^2 at s
  // false when the fourth-order correction drives gamma' negative
  bool gamma_valid = true;
  VariationalDiagnostics diagnostics;
};

inline constexpr double kDualPathTolerance = 1e-10;

// Populates s, residual, second_derivative and diagnostics. Throws
// InternalError if the closed form and the bracketing root disagree beyond
// kDualPathTolerance (relative, on x = exp(2s)).
VariationalSolution solve_squeeze(Phase phase, const RabiParams& p);

// E^G(s) of the phase, including constants (and omega_c alpha_lambda^2 in the superradiant phase).
double variational_energy(Phase phase, double s, const RabiParams& p);
double variational_energy_second_derivative(Phase phase, double s, const RabiParams& p);

// Fill sol.energy / sol.mean_n, sol.gamma_prime; PhaseDomainError on a phase mismatch.
double gs_energy(Phase phase, VariationalSolution& sol, const RabiParams& p);
PhotonMoments photon_stats(Phase phase, VariationalSolution& sol, const RabiParams& p);

// solve_squeeze + gs_energy + photon_stats.
VariationalSolution solve_variational(Phase phase, const RabiParams& p);

// Phase from lambda (normal below 1, superradiant above); guard band rejected.
Phase phase_of(double lambda);

}  // namespace qrm
