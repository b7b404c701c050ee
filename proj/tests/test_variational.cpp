#include <doctest.h>

#include <cmath>

#include "qrm/error.hpp"
#include "qrm/variational.hpp"

using namespace qrm;

namespace {

struct RootCase {
  Phase phase;
  double lambda;
  double eta;
  double s;  // 50-digit polynomial root, rounded
};

const RootCase kRoots[] = {
    {Phase::normal, 0.99, 1e3, 0.88995819795990873681},
    {Phase::normal, 0.5, 1e4, 0.071916909725845033745},
    {Phase::normal, 0.99, 1e5, 0.97798222996381703384},
    {Phase::normal, 0.9, 1e7, 0.41518250462748357902},
    {Phase::superradiant, 1.01, 1e3, 0.7730981581263378568},
    {Phase::superradiant, 1.5, 1e4, 0.055014566556674613244},
    {Phase::superradiant, 1.01, 1e5, 0.8104827713206572608},
};

}  // namespace

TEST_CASE("cubic coefficients") {
  const StationarityCubic n = stationarity_cubic(Phase::normal, RabiParams::from_lambda(0.5, 100.0));
  CHECK(n.c3 == doctest::Approx(3.0 * 0.0625 / 200.0));
  CHECK(n.c2 == doctest::Approx(0.75));
  const StationarityCubic s = stationarity_cubic(Phase::superradiant, RabiParams::from_lambda(2.0, 100.0));
  CHECK(s.c3 == doctest::Approx(3.0 / (200.0 * 1024.0)));
  CHECK(s.c2 == doctest::Approx(1.0 - 1.0 / 16.0));
  CHECK(n(0.0) == -1.0);
}

TEST_CASE("positive root against high-precision oracle") {
  for (const RootCase& c : kRoots) {
    CAPTURE(c.lambda);
    CAPTURE(c.eta);
    const RabiParams p = RabiParams::from_lambda(c.lambda, c.eta);
    const VariationalSolution sol = solve_squeeze(c.phase, p);
    CHECK(sol.s == doctest::Approx(c.s).epsilon(1e-12));
    CHECK(sol.residual < 1e-12);
    CHECK(sol.diagnostics.relative_disagreement <= kDualPathTolerance);
    CHECK(sol.second_derivative > 0.0);
    const ClosedFormRoot cf = closed_form_root(c.phase, p);
    CHECK(std::log(cf.x) / 2.0 == doctest::Approx(c.s).epsilon(1e-11));
  }
}

TEST_CASE("residual example") {
  const VariationalSolution sol = solve_squeeze(Phase::normal, RabiParams::from_lambda(0.99, 1e3));
  CHECK(sol.residual < 1e-12);
}

TEST_CASE("stationary point of the energy") {
  for (const RootCase& c : kRoots) {
    const RabiParams p = RabiParams::from_lambda(c.lambda, c.eta);
    const VariationalSolution sol = solve_squeeze(c.phase, p);
    const double h = 1e-4;
    const double ep = variational_energy(c.phase, sol.s + h, p);
    const double em = variational_energy(c.phase, sol.s - h, p);
    const double e0 = variational_energy(c.phase, sol.s, p);
    const double scale = std::max(1.0, std::abs(e0));
    CHECK(std::abs(ep - em) / (2 * h) < 1e-6 * scale);
    const double fd2 = (ep - 2 * e0 + em) / (h * h);
    CHECK(fd2 == doctest::Approx(sol.second_derivative).epsilon(1e-3 * scale / std::abs(sol.second_derivative) + 1e-4));
    CHECK(ep > e0);
    CHECK(em > e0);
  }
}

TEST_CASE("approaches the infinite-eta squeezing") {
  for (double lambda : {0.5, 0.9, 0.99}) {
    const double r = squeezing_np(lambda);
    const double d3 = std::abs(solve_squeeze(Phase::normal, RabiParams::from_lambda(lambda, 1e3)).s - r);
    const double d5 = std::abs(solve_squeeze(Phase::normal, RabiParams::from_lambda(lambda, 1e5)).s - r);
    CAPTURE(lambda);
    CHECK(d5 * 10.0 <= d3);
  }
  for (double lambda : {1.01, 1.1, 1.5}) {
    const double r = superradiant_frame(RabiParams::from_lambda(lambda, 1e3)).r_sp;
    const double d3 = std::abs(solve_squeeze(Phase::superradiant, RabiParams::from_lambda(lambda, 1e3)).s - r);
    const double d5 = std::abs(solve_squeeze(Phase::superradiant, RabiParams::from_lambda(lambda, 1e5)).s - r);
    CAPTURE(lambda);
    CHECK(d5 * 10.0 <= d3);
  }
}

TEST_CASE("decoupled limit") {
  const RabiParams p = RabiParams::from_lambda(0.0, 50.0);
  const VariationalSolution sol = solve_variational(Phase::normal, p);
  CHECK(sol.s == 0.0);
  CHECK(sol.energy == doctest::Approx(-25.0));
  CHECK(sol.mean_n == 0.0);
  CHECK(sol.gamma_prime == 0.0);
  CHECK(sol.gamma_valid);
}

TEST_CASE("phase mismatch") {
  const RabiParams p = RabiParams::from_lambda(0.8, 100.0);
  VariationalSolution sol = solve_squeeze(Phase::normal, p);
  CHECK_THROWS_AS(gs_energy(Phase::superradiant, sol, p), PhaseDomainError);
  CHECK_THROWS_AS(photon_stats(Phase::superradiant, sol, p), PhaseDomainError);
  CHECK_THROWS_AS(solve_squeeze(Phase::superradiant, p), PhaseDomainError);
  CHECK_THROWS_AS(phase_of(1.0), PhaseDomainError);
  CHECK(phase_of(0.9) == Phase::normal);
  CHECK(phase_of(1.1) == Phase::superradiant);
}

TEST_CASE("statistics near the infinite-eta values at large eta") {
  const RabiParams np = RabiParams::from_lambda(0.6, 1e6);
  const VariationalSolution a = solve_variational(Phase::normal, np);
  CHECK(a.gamma_prime == doctest::Approx(variance_np(np)).epsilon(1e-3));
  const RabiParams sp = RabiParams::from_lambda(1.3, 1e6);
  const VariationalSolution b = solve_variational(Phase::superradiant, sp);
  CHECK(b.gamma_prime == doctest::Approx(variance_sp(sp)).epsilon(1e-3));
  CHECK(b.mean_n > superradiant_frame(sp).alpha_lambda * superradiant_frame(sp).alpha_lambda);
}
