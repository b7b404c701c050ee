// Randomized invariants. QRM_TEST_SEED overrides the default seed.

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>

#include "qrm/dynamics.hpp"
#include "qrm/variational.hpp"

using namespace qrm;

namespace {

std::mt19937_64 make_rng() {
  const char* env = std::getenv("QRM_TEST_SEED");
  const std::uint64_t seed = env ? std::strtoull(env, nullptr, 10) : 20240607ULL;
  MESSAGE("seed " << seed);
  return std::mt19937_64(seed);
}

double uniform(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

Operator random_operator(std::mt19937_64& rng, std::vector<int> dims) {
  const int n = product_dim(dims);
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cplx(uniform(rng, -1, 1), uniform(rng, -1, 1));
  return Operator(m, dims);
}

double max_diff(const Operator& a, const Operator& b) { return (a - b).max_abs(); }

}  // namespace

TEST_CASE("tensor products") {
  auto rng = make_rng();
  for (int trial = 0; trial < 10; ++trial) {
    const Operator a = random_operator(rng, {2}), b = random_operator(rng, {3});
    const Operator c = random_operator(rng, {2}), d = random_operator(rng, {3});
    CHECK(max_diff(tensor(a, b) * tensor(c, d), tensor(a * c, b * d)) < 1e-13);
    const Operator e = random_operator(rng, {2});
    const Operator left = tensor(tensor(a, b), e), right = tensor(a, tensor(b, e));
    CHECK(max_diff(left, right) <= 8 * std::numeric_limits<double>::epsilon());
    CHECK(left.dims() == std::vector<int>{2, 3, 2});
  }
}

TEST_CASE("ladder commutator on retained levels") {
  for (int n : {1, 2, 7, 40}) {
    const FockCutoff c{n};
    const CMatrix k = commutator(annihilation(c), creation(c)).matrix();
    CHECK((k.topLeftCorner(n, n) - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff() <= 4 * n * std::numeric_limits<double>::epsilon());
  }
}

TEST_CASE("displacement inverse") {
  auto rng = make_rng();
  for (int trial = 0; trial < 5; ++trial) {
    const double alpha = uniform(rng, -3.0, 3.0);
    const FockCutoff c{60 + static_cast<int>(uniform(rng, 0, 20))};
    const Operator prod = displacement(-alpha, c) * displacement(alpha, c);
    CHECK(max_diff(prod, Operator::identity({c.dim()})) < 1e-8);
  }
}

TEST_CASE("builders are Hermitian for random parameters") {
  auto rng = make_rng();
  for (int trial = 0; trial < 10; ++trial) {
    const RabiParams p = RabiParams::from_lambda(uniform(rng, 0.0, 2.0), uniform(rng, 1.0, 200.0), uniform(rng, 0.5, 2.0));
    const ProbeParams probe = ProbeParams::from_chi(p.omega_c(), uniform(rng, -0.05, 0.05));
    const FockCutoff c{24};
    for (const Operator& h : {build_rabi(p, c), build_branch(p, probe, Branch::e, c), build_branch(p, probe, Branch::g, c),
                              build_tripartite(p, probe, FockCutoff{8}), build_displaced_rabi(p, 1.3, c).first,
                              build_effective_np(p, c)}) {
      CHECK(h.hermiticity_defect() <= 1e-12 * h.max_abs());
    }
    const Operator n = tensor(Operator::identity({2}), number_operator(c));
    const Operator diff = build_branch(p, probe, Branch::e, c) - build_branch(p, probe, Branch::g, c) -
                          2.0 * probe.chi * n - (probe.omega_s + probe.chi) * Operator::identity(n.dims());
    CHECK(diff.max_abs() < 1e-12 * std::max(1.0, build_rabi(p, c).max_abs()));
  }
}

TEST_CASE("parity commutes with the Rabi Hamiltonian") {
  auto rng = make_rng();
  for (int trial = 0; trial < 10; ++trial) {
    const RabiParams p(uniform(rng, 0.1, 3.0), uniform(rng, 0.1, 50.0), uniform(rng, 0.0, 5.0));
    const FockCutoff c{30};
    const Operator h = build_rabi(p, c);
    const Operator pi = parity_operator(c);
    CHECK(commutator(pi, h).max_abs() < 1e-10 * h.max_abs());
  }
}

TEST_CASE("displaced spectrum matches the bare spectrum") {
  auto rng = make_rng();
  for (int trial = 0; trial < 4; ++trial) {
    const RabiParams p = RabiParams::from_lambda(uniform(rng, 0.2, 1.8), uniform(rng, 2.0, 10.0));
    const double alpha = uniform(rng, -1.5, 1.5);
    const FockCutoff c{120};
    const Eigen::VectorXd a = eigenvalues(build_rabi(p, c)).head(10);
    const Eigen::VectorXd b = eigenvalues(build_displaced_rabi(p, alpha, c).first).head(10);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-8 * std::max(1.0, a.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("effective normal Hamiltonian without coupling") {
  const RabiParams p = RabiParams::from_lambda(0.0, 37.0);
  const Eigen::VectorXd e = eigenvalues(build_effective_np(p, FockCutoff{20}));
  for (int k = 0; k < e.size(); ++k) CHECK(e[k] == k - 18.5);
}

TEST_CASE("decompositions reconstruct and cutoff energies decrease") {
  auto rng = make_rng();
  for (int trial = 0; trial < 5; ++trial) {
    const RabiParams p = RabiParams::from_lambda(uniform(rng, 0.1, 0.99), uniform(rng, 5.0, 500.0));
    const Operator h = build_rabi(p, FockCutoff{50});
    CHECK(diagonalize(h).reconstruction_error(h) < 1e-9);
    const CutoffSearch s = converge_cutoff([&](FockCutoff c) { return build_rabi(p, c); }, 1e-9);
    CHECK(s.monotone);
    for (std::size_t k = 1; k < s.energies.size(); ++k) CHECK(s.energies[k] <= s.energies[k - 1] + s.tolerance_used);
  }
}

TEST_CASE("ground states below the critical point have definite parity") {
  auto rng = make_rng();
  for (int trial = 0; trial < 5; ++trial) {
    const RabiParams p = RabiParams::from_lambda(uniform(rng, 0.05, 0.99), uniform(rng, 5.0, 100.0));
    const GroundStateResult gs = ground_state([&](FockCutoff c) { return build_rabi(p, c); }, 1e-10);
    const double par = std::abs(expectation(parity_operator(gs.cutoff_used), gs.state));
    CHECK(par > 1.0 - 1e-8);
  }
}

TEST_CASE("Fock states have zero variance") {
  for (int k : {0, 1, 5, 19}) {
    const QuantumState f = QuantumState::basis({2, 20}, {1, k});
    const PhotonMoments m = photon_moments(f, BosonLayout::trailing(f.dims()));
    CHECK(m.mean_n == k);
    CHECK(m.gamma == 0.0);
  }
}

TEST_CASE("variational stationarity over random parameters") {
  auto rng = make_rng();
  for (int trial = 0; trial < 40; ++trial) {
    const bool normal = trial % 2 == 0;
    const double lambda = normal ? uniform(rng, 0.05, 0.999) : uniform(rng, 1.001, 3.0);
    const double eta = std::pow(10.0, uniform(rng, 2.0, 6.0));
    const Phase phase = normal ? Phase::normal : Phase::superradiant;
    const VariationalSolution sol = solve_squeeze(phase, RabiParams::from_lambda(lambda, eta));
    CAPTURE(lambda);
    CAPTURE(eta);
    CHECK(sol.residual < 1e-10);
    CHECK(sol.second_derivative > 0.0);
    CHECK(sol.diagnostics.relative_disagreement <= kDualPathTolerance);
  }
}

TEST_CASE("variational squeezing converges like 1/eta") {
  for (double lambda : {0.5, 0.9, 0.99, 1.1, 2.0}) {
    const Phase phase = lambda < 1.0 ? Phase::normal : Phase::superradiant;
    const double r = lambda < 1.0 ? squeezing_np(lambda) : superradiant_frame(RabiParams::from_lambda(lambda, 1.0)).r_sp;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (double eta : {1e3, 1e4, 1e5}) {
      const double x = std::log(eta);
      const double y = std::log(std::abs(solve_squeeze(phase, RabiParams::from_lambda(lambda, eta)).s - r));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double slope = (3 * sxy - sx * sy) / (3 * sxx - sx * sx);
    CAPTURE(lambda);
    CHECK(-slope >= 0.8);
    CHECK(-slope <= 1.2);
  }
}

TEST_CASE("evolution is unitary and echoes stay in range") {
  auto rng = make_rng();
  for (int trial = 0; trial < 3; ++trial) {
    const RabiParams p = RabiParams::from_lambda(uniform(rng, 0.1, 0.95), uniform(rng, 5.0, 50.0));
    const ProbeParams probe = ProbeParams::from_chi(1.0, uniform(rng, 1e-3, 5e-2));
    const FockCutoff c{60};
    const SpectralDecomposition d = diagonalize(build_branch(p, probe, Branch::e, c));
    const QuantumState g = ground_state(build_rabi(p, c)).state;
    std::vector<double> times;
    for (int k = 0; k < 8; ++k) times.push_back(uniform(rng, 0.0, 200.0));
    std::sort(times.begin(), times.end());
    for (double t : times) CHECK(std::abs(evolve(d, g, t).norm() - 1.0) < 1e-10);
    const EchoSeries s = decoherence_factor(build_branch(p, probe, Branch::g, c), build_branch(p, probe, Branch::e, c), g, times);
    for (std::size_t k = 0; k < times.size(); ++k) {
      CHECK(s.l_values[k] >= 0.0);
      CHECK(s.l_values[k] <= 1.0 + 1e-10);
      CHECK(std::abs(s.l_values[k] - std::norm(s.d_values[k])) < 1e-12);
    }
  }
}

TEST_CASE("short-time echo matches the quadratic law to quartic order") {
  // The spin-virtual part of the variance dephases at rate omega_0, so the
  // expansion is taken for omega_0 t < 1.
  const RabiParams p = RabiParams::from_lambda(0.5, 50.0);
  const ProbeParams probe = ProbeParams::from_chi(1.0, 1e-2);
  const FockCutoff c{60};
  const GroundStateResult gs = ground_state(build_rabi(p, c));
  const double gamma = photon_moments(gs.state, BosonLayout::trailing(gs.state.dims())).gamma;
  const std::vector<double> t{0.02, 0.01, 0.005, 0.0025};
  const EchoSeries s = decoherence_factor(build_branch(p, probe, Branch::g, c), build_branch(p, probe, Branch::e, c),
                                          gs.state, t);
  std::vector<double> scaled;
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double law_decay = -std::expm1(-4.0 * gamma * probe.chi * probe.chi * t[k] * t[k]);
    scaled.push_back(std::abs(s.decay_values[k] - law_decay) / (probe.chi * probe.chi * t[k] * t[k]));
  }
  for (std::size_t k = 1; k < scaled.size(); ++k) CHECK(scaled[k] * 3.0 < scaled[k - 1]);
}
