#include <doctest.h>

#include <cmath>

#include "qrm/error.hpp"
#include "qrm/hamiltonians.hpp"
#include "qrm/spectra.hpp"

using namespace qrm;

TEST_CASE("diagonalize and ground_state on a toy matrix") {
  CMatrix m = CMatrix::Zero(3, 3);
  m(0, 0) = 3.0;
  m(1, 1) = 1.0;
  m(2, 2) = 2.0;
  const Operator h(m, {3});
  const GroundStateResult gs = ground_state(h);
  CHECK(gs.energy == 1.0);
  CHECK(gs.state[1] == cplx(1.0));
  CHECK_FALSE(gs.converged);

  const SpectralDecomposition d = diagonalize(h);
  CHECK(d.is_real());
  CHECK(d.energies()[2] == 3.0);
  CHECK(d.reconstruction_error(h) < 1e-15);
}

TEST_CASE("non-Hermitian input is rejected") {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(diagonalize(Operator(m, {2})), NotHermitianError);
  CHECK_THROWS_AS(eigenvalues(Operator(m, {2})), NotHermitianError);
}

TEST_CASE("complex Hermitian decomposition") {
  const Operator h = pauli(Axis::y) + 0.3 * pauli(Axis::z);
  const SpectralDecomposition d = diagonalize(h);
  CHECK_FALSE(d.is_real());
  CHECK(d.energies()[0] == doctest::Approx(-std::sqrt(1.09)));
  CHECK(d.reconstruction_error(h) < 1e-14);
}

TEST_CASE("global phase convention") {
  const QuantumState s(CVector::Constant(2, cplx(0.0, -1.0)) * (1.0 / std::sqrt(2.0)), {2});
  const QuantumState f = fix_global_phase(s);
  CHECK(f[0].real() > 0.0);
  CHECK(std::abs(f[0].imag()) < 1e-16);
  CHECK(std::abs(f[1] - f[0]) < 1e-16);
}

TEST_CASE("decoupled Rabi ground state") {
  const RabiParams p(1.0, 4.0, 0.0);
  const GroundStateResult gs = ground_state(build_rabi(p, FockCutoff{8}));
  CHECK(gs.energy == -2.0);
  CHECK(gs.state[9] == cplx(1.0));
  const PhotonMoments m = photon_moments(gs.state, BosonLayout::trailing(gs.state.dims()));
  CHECK(m.mean_n == 0.0);
  CHECK(m.gamma == 0.0);
}

TEST_CASE("photon moments") {
  const QuantumState fock3 = QuantumState::basis({2, 10}, {1, 3});
  const PhotonMoments m = photon_moments(fock3, BosonLayout::trailing(fock3.dims()));
  CHECK(m.mean_n == 3.0);
  CHECK(m.gamma == 0.0);

  const FockCutoff c{60};
  const QuantumState sq = apply(squeeze(0.3, c), QuantumState::basis({61}, {0}));
  const PhotonMoments s = photon_moments(sq, BosonLayout::trailing(sq.dims()));
  CHECK(s.mean_n == doctest::Approx(std::pow(std::sinh(0.3), 2)).epsilon(1e-10));
  CHECK(s.mean_n == doctest::Approx(0.0927326).epsilon(1e-6));
  CHECK(s.gamma == doctest::Approx(0.5 * std::pow(std::sinh(0.6), 2)).epsilon(1e-10));
  CHECK(s.gamma == doctest::Approx(0.202664).epsilon(1e-6));

  // in a frame displaced by alpha the lab photon number is (a^dag + alpha)(a + alpha): vacuum there has <n> = alpha^2
  const QuantumState vac = QuantumState::basis({20}, {0});
  const PhotonMoments d = photon_moments(vac, BosonLayout::trailing(vac.dims(), 3.0));
  CHECK(d.mean_n == doctest::Approx(9.0));
  CHECK(d.gamma == doctest::Approx(9.0));

  CHECK_THROWS_AS(photon_moments(vac, BosonLayout::trailing({2, 10})), DimensionError);
}

TEST_CASE("parity operator") {
  const FockCutoff c{6};
  const Operator pi = parity_operator(c);
  const QuantumState g0 = QuantumState::basis({2, 7}, {1, 0});
  CHECK(std::abs(expectation(pi, g0) - cplx(1.0)) < 1e-15);
  const QuantumState e0 = QuantumState::basis({2, 7}, {0, 0});
  CHECK(std::abs(expectation(pi, e0) + cplx(1.0)) < 1e-15);
  CHECK(((pi * pi).matrix() - CMatrix::Identity(14, 14)).cwiseAbs().maxCoeff() == 0.0);
  const Operator h = build_rabi(RabiParams(1.0, 2.0, 0.7), c);
  CHECK(commutator(pi, h).max_abs() < 1e-10 * h.max_abs());
}

TEST_CASE("cutoff convergence") {
  const RabiParams g0(1.0, 4.0, 0.0);
  const CutoffSearch s = converge_cutoff([&](FockCutoff c) { return build_rabi(g0, c); }, 1e-12);
  CHECK(s.cutoff.n_max == 16);
  CHECK(s.energy_drift == 0.0);

  const RabiParams p = RabiParams::from_lambda(0.99, 5000.0);
  const auto builder = [&](FockCutoff c) { return build_rabi(p, c); };
  const CutoffSearch r = converge_cutoff(builder, 1e-9);
  CHECK(r.monotone);
  CHECK(r.energy_drift < r.tolerance_used);
  const double e2 = eigenvalues(builder(FockCutoff{2 * r.cutoff.n_max}))[0];
  CHECK(std::abs(e2 - r.energy) < r.tolerance_used);
  for (std::size_t k = 1; k < r.energies.size(); ++k) CHECK(r.energies[k] <= r.energies[k - 1] + 1e-9);

  const GroundStateResult gs = ground_state(builder, 1e-9);
  CHECK(gs.converged);
  CHECK(gs.cutoff_used == r.cutoff);
  CHECK(gs.energy_drift < 1e-9 * 10);

  CHECK_THROWS_AS(converge_cutoff(builder, 0.0), ConfigError);
  CHECK_THROWS_AS(converge_cutoff(builder, 1e-9, 16, 32), ConvergenceError);
}

TEST_CASE("the displaced frame absorbs the superradiant displacement") {
  const RabiParams p = RabiParams::from_lambda(1.5, 5000.0);
  const double alpha = displacement_amplitude(p);
  CHECK(alpha * alpha == doctest::Approx(5000.0 * 4.0625 / 9.0).epsilon(1e-13));
  const CutoffSearch disp =
      converge_cutoff([&](FockCutoff c) { return build_displaced_rabi(p, alpha, c).first; }, 1e-6);
  CHECK(disp.cutoff.n_max <= 32);
  // the bare frame needs more than 2 alpha^2 levels before the energy can settle
  const Eigen::VectorXd bare = eigenvalues(build_rabi(p, FockCutoff{4 * disp.cutoff.n_max}));
  CHECK(bare[0] > disp.energy + 1.0);
}

TEST_CASE("reconstruction invariant on a Rabi Hamiltonian") {
  const Operator h = build_rabi(RabiParams::from_lambda(0.9, 50.0), FockCutoff{40});
  CHECK(diagonalize(h).reconstruction_error(h) < 1e-9);
}
