#pragma once

// Infinite-eta closed forms on the low spin branch, plus the short-time echo law.

#include "qrm/hamiltonians.hpp"

namespace qrm {

enum class Phase { normal, superradiant };

const char* to_string(Phase phase);

// |lambda - 1| below this is treated as the critical point; closed forms
// refuse to evaluate there.
inline constexpr double kCriticalGuard = 1e-6;

bool in_critical_guard(double lambda);

struct AnalyticGroundState {
  Phase phase = Phase::normal;
  double r = 0.0;
  double alpha_disp = 0.0;
  double epsilon = 0.0;
  double energy = 0.0;
  double gamma = 0.0;
  double mean_n = 0.0;
};

// r_np = -ln(1 - lambda^2) / 4, for 0 <= lambda < 1.
double squeezing_np(double lambda);

// 1/2 sinh^2(2 r_np) + (g/omega_0)^2 exp(-2 r_np)
double variance_np(const RabiParams& p);

struct SuperradiantFrame {
  double alpha_lambda = 0.0;
  double r_sp = 0.0;  // -ln(1 - lambda^-4) / 4
};

SuperradiantFrame superradiant_frame(const RabiParams& p);

// 1/2 sinh^2(2 r_sp) + alpha_lambda^2 exp(2 r_sp) + (g~/omega0~)^2 exp(-2 r_sp),
// with (g~/omega0~)^2 = 1 / (4 lambda^6 eta).
double variance_sp(const RabiParams& p);

// Phase chosen from lambda; PhaseDomainError inside the critical guard band.
AnalyticGroundState analytic_ground_state(const RabiParams& p);

// exp(-4 gamma chi^2 t^2)
double short_time_le(double gamma, double chi, double t);

}  // namespace qrm
