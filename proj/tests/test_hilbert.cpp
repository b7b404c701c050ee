#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "qrm/diagnostics.hpp"
#include "qrm/error.hpp"
#include "qrm/hilbert.hpp"

using namespace qrm;

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double max_diff(const Operator& a, const Operator& b) { return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff(); }

Operator random_op(int n, unsigned seed) {
  std::srand(seed);
  return Operator(CMatrix::Random(n, n), {n});
}

}  // namespace

TEST_CASE("annihilation operator") {
  const Operator a1 = annihilation(FockCutoff{1});
  CHECK(a1.dim() == 2);
  CHECK(a1(0, 1) == cplx(1.0));
  CHECK(a1(0, 0) == cplx(0.0));
  CHECK(a1(1, 0) == cplx(0.0));
  CHECK(a1(1, 1) == cplx(0.0));

  const Operator a = annihilation(FockCutoff{4});
  for (int n = 0; n < 4; ++n) CHECK(a(n, n + 1).real() == doctest::Approx(std::sqrt(n + 1.0)).epsilon(1e-15));
  const Operator n4 = a.adjoint() * a;
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 5; ++c) CHECK(std::abs(n4(r, c) - cplx(r == c ? r : 0.0)) <= 4 * kEps);
  CHECK(max_diff(n4, number_operator(FockCutoff{4})) <= 4 * kEps);
  CHECK(max_diff(creation(FockCutoff{4}), a.adjoint()) == 0.0);
}

TEST_CASE("canonical commutator holds below the truncation edge") {
  const FockCutoff c{4};
  const Operator a = annihilation(c);
  const Operator comm = commutator(a, a.adjoint());
  for (int r = 0; r < 4; ++r)
    for (int k = 0; k < 5; ++k) CHECK(std::abs(comm(r, k) - cplx(r == k ? 1.0 : 0.0)) <= 8 * kEps);
  CHECK(comm(4, 4).real() == doctest::Approx(-4.0));
}

TEST_CASE("builders reject n_max = 0") {
  CHECK_THROWS_AS(annihilation(FockCutoff{0}), TruncationError);
  CHECK_THROWS_AS(number_operator(FockCutoff{0}), TruncationError);
  CHECK_THROWS_AS(quadrature_power(FockCutoff{0}, 2), TruncationError);
  CHECK_THROWS_AS(squeeze(0.1, FockCutoff{1}), TruncationError);
}

TEST_CASE("pauli matrices") {
  const Operator x = pauli(Axis::x), y = pauli(Axis::y), z = pauli(Axis::z);
  CHECK(z(0, 0) == cplx(1.0));
  CHECK(z(1, 1) == cplx(-1.0));
  CHECK(max_diff(x * x, Operator::identity({2})) == 0.0);
  CHECK(max_diff(x * y, cplx(0.0, 1.0) * z) == 0.0);
  CHECK(max_diff(sigma_plus() + sigma_minus(), x) == 0.0);
  // sigma_+ raises |g> (index 1) to |e> (index 0)
  CHECK(sigma_plus()(0, 1) == cplx(1.0));
}

TEST_CASE("tensor product") {
  CHECK(max_diff(tensor(Operator::identity({2}), Operator::identity({3})), Operator::identity({6})) == 0.0);
  const FockCutoff c{3};
  const Operator lhs = tensor(pauli(Axis::z), Operator::identity({4})) * tensor(Operator::identity({2}), number_operator(c));
  CHECK(max_diff(lhs, tensor(pauli(Axis::z), number_operator(c))) == 0.0);
  CHECK(tensor(pauli(Axis::z), number_operator(c)).dims() == std::vector<int>{2, 4});

  const Operator a = random_op(2, 1), b = random_op(3, 2);
  CHECK(std::abs(tensor(a, b).trace() - a.trace() * b.trace()) < 1e-14);

  const Operator c3 = random_op(2, 3), d = random_op(3, 4);
  CHECK(max_diff(tensor(a, b) * tensor(c3, d), tensor(a * c3, b * d)) < 1e-14);
  // complex products round differently under regrouping
  CHECK(max_diff(tensor(tensor(a, b), c3), tensor(a, tensor(b, c3))) <= 4 * kEps);
}

TEST_CASE("operator arithmetic checks dimensions") {
  CHECK_THROWS_AS(Operator::identity({2}) + Operator::identity({3}), DimensionError);
  CHECK_THROWS_AS(Operator(CMatrix::Identity(4, 4), {3}), DimensionError);
}

TEST_CASE("quadrature powers are exact projections") {
  const FockCutoff c{6};
  const Operator x = annihilation(c) + creation(c);
  CHECK(max_diff(quadrature_power(c, 1), x) == 0.0);
  // (a + a^dag)^2 = a^2 + a^dag^2 + 2n + 1; the diagonal must not dip at n_max
  const Operator x2 = quadrature_power(c, 2);
  for (int n = 0; n <= 6; ++n) CHECK(x2(n, n).real() == doctest::Approx(2.0 * n + 1.0));
  // <n|x^4|n> = 6n^2 + 6n + 3
  const Operator x4 = quadrature_power(c, 4);
  for (int n = 0; n <= 6; ++n) CHECK(x4(n, n).real() == doctest::Approx(6.0 * n * n + 6.0 * n + 3.0));
}

TEST_CASE("displacement") {
  CHECK(max_diff(displacement(0.0, FockCutoff{10}), Operator::identity({11})) < 1e-15);

  const FockCutoff c40{40};
  const Operator d = displacement(2.0, c40);
  const QuantumState vac = QuantumState::basis({41}, {0});
  const QuantumState coh = apply(d, vac);
  CHECK(expectation(number_operator(c40), coh).real() == doctest::Approx(4.0).epsilon(1e-6));

  const FockCutoff c60{60};
  const Operator d3 = displacement(3.0, c60);
  CHECK(max_diff(d3.adjoint() * d3, Operator::identity({61})) < 1e-8);
  CHECK(max_diff(displacement(-3.0, c60) * d3, Operator::identity({61})) < 1e-8);
}

TEST_CASE("displacement warns on an inadequate cutoff") {
  std::vector<std::string> seen;
  const WarningSink old = set_warning_sink([&](const std::string& m) { seen.push_back(m); });
  displacement(3.0, FockCutoff{10});
  CHECK(seen.size() == 1);
  displacement(1.0, FockCutoff{10});
  CHECK(seen.size() == 1);
  set_warning_sink(old);
  CHECK(displacement_cutoff_adequate(2.0, FockCutoff{16}));
  CHECK_FALSE(displacement_cutoff_adequate(2.0, FockCutoff{15}));
}

TEST_CASE("squeeze") {
  CHECK(max_diff(squeeze(0.0, FockCutoff{10}), Operator::identity({11})) < 1e-15);

  const FockCutoff c{40};
  const QuantumState vac = QuantumState::basis({41}, {0});
  const QuantumState sq = apply(squeeze(0.5, c), vac);
  CHECK(expectation(number_operator(c), sq).real() == doctest::Approx(std::pow(std::sinh(0.5), 2)).epsilon(1e-6));

  const QuantumState s3 = apply(squeeze(0.3, c), vac);
  const Operator q = (1.0 / std::sqrt(2.0)) * quadrature_power(c, 1);
  const double mean = expectation(q, s3).real();
  const double var = expectation(q * q, s3).real() - mean * mean;
  CHECK(var == doctest::Approx(std::exp(0.6) / 2.0).epsilon(1e-6));
  CHECK(squeeze_cutoff_adequate(0.5, FockCutoff{23}));
  CHECK_FALSE(squeeze_cutoff_adequate(1.0, FockCutoff{20}));
}

TEST_CASE("states") {
  const QuantumState s = QuantumState::basis({2, 3}, {1, 2});
  CHECK(s.dim() == 6);
  CHECK(s[5] == cplx(1.0));
  CHECK(s.norm() == 1.0);
  const QuantumState u(CVector::Constant(4, cplx(1.0, 1.0)), {4});
  CHECK(u.normalized().norm() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(QuantumState(CVector::Ones(3), {2, 2}), DimensionError);
  CHECK_THROWS_AS(apply(Operator::identity({3}), s), DimensionError);
}
