#include "qrm/hilbert.hpp"

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "qrm/diagnostics.hpp"
#include "qrm/error.hpp"

namespace qrm {
namespace {

void require_cutoff(FockCutoff cutoff, int minimum, const char* what) {
  if (cutoff.n_max < minimum) {
    std::ostringstream os;
    os << what << ": Fock cutoff n_max=" << cutoff.n_max << " is below the minimum " << minimum;
    throw TruncationError(os.str());
  }
}

void require_same_dims(const std::vector<int>& a, const std::vector<int>& b, const char* what) {
  if (a != b) throw DimensionError(std::string(what) + ": subsystem dimensions differ");
}

Eigen::MatrixXd real_annihilation(int dim) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
  for (int n = 0; n + 1 < dim; ++n) a(n, n + 1) = std::sqrt(static_cast<double>(n + 1));
  return a;
}

Operator from_real(const Eigen::MatrixXd& m, std::vector<int> dims) {
  return Operator(m.cast<cplx>(), std::move(dims));
}

// exp(generator) for a real antisymmetric generator; the result is real orthogonal.
Operator unitary_exp(const Eigen::MatrixXd& generator, int dim) {
  Eigen::MatrixXd u = generator.exp();
  const double defect =
      (u.transpose() * u - Eigen::MatrixXd::Identity(dim, dim)).cwiseAbs().maxCoeff();
  if (defect > 1e-10) {
    throw InternalError("matrix exponential lost unitarity (defect " + std::to_string(defect) + ")");
  }
  return from_real(u, {dim});
}

}  // namespace

int product_dim(const std::vector<int>& dims) {
  return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<>());
}

Operator::Operator(CMatrix entries, std::vector<int> dims) : m_(std::move(entries)), dims_(std::move(dims)) {
  if (m_.rows() != m_.cols()) throw DimensionError("operator matrix is not square");
  if (dims_.empty() || product_dim(dims_) != m_.rows()) {
    throw DimensionError("operator dimension does not match the product of subsystem dimensions");
  }
}

Operator Operator::identity(std::vector<int> dims) {
  const int d = product_dim(dims);
  return Operator(CMatrix::Identity(d, d), std::move(dims));
}

Operator Operator::zero(std::vector<int> dims) {
  const int d = product_dim(dims);
  return Operator(CMatrix::Zero(d, d), std::move(dims));
}

Operator Operator::adjoint() const { return Operator(m_.adjoint(), dims_); }

double Operator::max_abs() const { return m_.size() == 0 ? 0.0 : m_.cwiseAbs().maxCoeff(); }

double Operator::hermiticity_defect() const {
  return m_.size() == 0 ? 0.0 : (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

bool Operator::is_hermitian(double rel_tol) const {
  return hermiticity_defect() <= rel_tol * max_abs();
}

bool Operator::is_real() const {
  return m_.size() == 0 || m_.imag().cwiseAbs().maxCoeff() == 0.0;
}

Operator& Operator::operator+=(const Operator& rhs) {
  require_same_dims(dims_, rhs.dims_, "operator +");
  m_ += rhs.m_;
  return *this;
}

Operator& Operator::operator-=(const Operator& rhs) {
  require_same_dims(dims_, rhs.dims_, "operator -");
  m_ -= rhs.m_;
  return *this;
}

Operator& Operator::operator*=(cplx s) {
  m_ *= s;
  return *this;
}

Operator operator*(const Operator& a, const Operator& b) {
  require_same_dims(a.dims_, b.dims_, "operator *");
  return Operator(a.m_ * b.m_, a.dims_);
}

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

QuantumState::QuantumState(CVector amplitudes, std::vector<int> dims)
    : v_(std::move(amplitudes)), dims_(std::move(dims)) {
  if (dims_.empty() || product_dim(dims_) != v_.size()) {
    throw DimensionError("state length does not match the product of subsystem dimensions");
  }
}

QuantumState QuantumState::basis(std::vector<int> dims, std::initializer_list<int> levels) {
  if (levels.size() != dims.size()) throw DimensionError("basis: one level per subsystem required");
  int index = 0;
  auto level = levels.begin();
  for (int d : dims) {
    if (*level < 0 || *level >= d) throw DimensionError("basis: level out of range");
    index = index * d + *level++;
  }
  CVector v = CVector::Zero(product_dim(dims));
  v[index] = 1.0;
  return QuantumState(std::move(v), std::move(dims));
}

QuantumState QuantumState::normalized() const {
  const double n = norm();
  if (n == 0.0) throw InternalError("cannot normalize the zero vector");
  return QuantumState(v_ / n, dims_);
}

cplx inner(const QuantumState& a, const QuantumState& b) {
  require_same_dims(a.dims(), b.dims(), "inner");
  return a.amplitudes().dot(b.amplitudes());
}

QuantumState apply(const Operator& op, const QuantumState& psi) {
  require_same_dims(op.dims(), psi.dims(), "apply");
  return QuantumState(op.matrix() * psi.amplitudes(), psi.dims());
}

cplx expectation(const Operator& op, const QuantumState& psi) { return inner(psi, apply(op, psi)); }

Operator annihilation(FockCutoff cutoff) {
  require_cutoff(cutoff, 1, "annihilation");
  return from_real(real_annihilation(cutoff.dim()), {cutoff.dim()});
}

Operator creation(FockCutoff cutoff) { return annihilation(cutoff).adjoint(); }

Operator number_operator(FockCutoff cutoff) {
  require_cutoff(cutoff, 1, "number_operator");
  Eigen::VectorXd n = Eigen::VectorXd::LinSpaced(cutoff.dim(), 0.0, cutoff.n_max);
  return from_real(n.asDiagonal().toDenseMatrix(), {cutoff.dim()});
}

Operator quadrature_power(FockCutoff cutoff, int power) {
  require_cutoff(cutoff, 1, "quadrature_power");
  if (power < 0) throw DimensionError("quadrature_power: negative power");
  const int dim = cutoff.dim();
  const int padded = dim + power;
  const Eigen::MatrixXd a = real_annihilation(padded);
  const Eigen::MatrixXd x = a + a.transpose();
  Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(padded, padded);
  for (int k = 0; k < power; ++k) acc = acc * x;
  return from_real(acc.topLeftCorner(dim, dim), {dim});
}

Operator pauli(Axis axis) {
  CMatrix m(2, 2);
  switch (axis) {
    case Axis::x:
      m << 0.0, 1.0, 1.0, 0.0;
      break;
    case Axis::y:
      // sigma_y = i(|g><e| - |e><g|)
      m << 0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0;
      break;
    case Axis::z:
      m << 1.0, 0.0, 0.0, -1.0;
      break;
  }
  return Operator(std::move(m), {2});
}

Operator sigma_plus() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  return Operator(std::move(m), {2});
}

Operator sigma_minus() { return sigma_plus().adjoint(); }

Operator tensor(const Operator& a, const Operator& b) {
  std::vector<int> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  CMatrix k = Eigen::kroneckerProduct(a.matrix(), b.matrix()).eval();
  return Operator(std::move(k), std::move(dims));
}

bool displacement_cutoff_adequate(double alpha, FockCutoff cutoff) {
  return cutoff.n_max >= alpha * alpha + 6.0 * std::abs(alpha);
}

bool squeeze_cutoff_adequate(double r, FockCutoff cutoff) {
  const double s = std::sinh(r);
  return cutoff.n_max >= 10.0 * s * s + 20.0;
}

Operator displacement(double alpha, FockCutoff cutoff) {
  require_cutoff(cutoff, 1, "displacement");
  if (!displacement_cutoff_adequate(alpha, cutoff)) {
    std::ostringstream os;
    os << "displacement(alpha=" << alpha << ") with n_max=" << cutoff.n_max
       << " is below the adequacy bound alpha^2 + 6|alpha|";
    warn(os.str());
  }
  const Eigen::MatrixXd a = real_annihilation(cutoff.dim());
  return unitary_exp(alpha * (a.transpose() - a), cutoff.dim());
}

Operator squeeze(double r, FockCutoff cutoff) {
  require_cutoff(cutoff, 2, "squeeze");
  if (!squeeze_cutoff_adequate(r, cutoff)) {
    std::ostringstream os;
    os << "squeeze(r=" << r << ") with n_max=" << cutoff.n_max
       << " is below the adequacy bound 10 sinh^2(r) + 20";
    warn(os.str());
  }
  const Eigen::MatrixXd a = real_annihilation(cutoff.dim());
  const Eigen::MatrixXd ad = a.transpose();
  return unitary_exp(0.5 * r * (ad * ad - a * a), cutoff.dim());
}

}  // namespace qrm
