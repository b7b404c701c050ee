#pragma once

// Operator algebra on the truncated spin (x) boson Hilbert space.
//
// Conventions: composite spaces list the spin factor(s) first and the boson
// factor last; the spin basis is ordered (|e>, |g>), so sigma_z = diag(+1, -1).

#include <Eigen/Dense>

#include <complex>
#include <initializer_list>
#include <vector>

namespace qrm {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Highest retained Fock level; the boson space has dimension n_max + 1.
struct FockCutoff {
  int n_max = 1;

  constexpr int dim() const noexcept { return n_max + 1; }
  friend constexpr bool operator==(FockCutoff, FockCutoff) = default;
};

// Dense square operator with the subsystem dimensions it acts on.
class Operator {
 public:
  Operator() = default;
  Operator(CMatrix entries, std::vector<int> dims);

  static Operator identity(std::vector<int> dims);
  static Operator zero(std::vector<int> dims);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const std::vector<int>& dims() const noexcept { return dims_; }
  const CMatrix& matrix() const noexcept { return m_; }
  cplx operator()(int row, int col) const { return m_(row, col); }

  Operator adjoint() const;
  cplx trace() const { return m_.trace(); }

  // Largest entry modulus, the norm used by every tolerance in this library.
  double max_abs() const;
  // max |A - A^dag| entry-wise.
  double hermiticity_defect() const;
  bool is_hermitian(double rel_tol = 1e-12) const;
  // True when every imaginary part is exactly zero.
  bool is_real() const;

  Operator& operator+=(const Operator& rhs);
  Operator& operator-=(const Operator& rhs);
  Operator& operator*=(cplx s);

  friend Operator operator+(Operator a, const Operator& b) { return a += b; }
  friend Operator operator-(Operator a, const Operator& b) { return a -= b; }
  friend Operator operator*(Operator a, cplx s) { return a *= s; }
  friend Operator operator*(cplx s, Operator a) { return a *= s; }
  friend Operator operator*(double s, Operator a) { return a *= cplx(s, 0.0); }
  friend Operator operator*(const Operator& a, const Operator& b);

 private:
  CMatrix m_;
  std::vector<int> dims_;
};

Operator commutator(const Operator& a, const Operator& b);

class QuantumState {
 public:
  QuantumState() = default;
  QuantumState(CVector amplitudes, std::vector<int> dims);

  // Product basis state; `levels` holds one index per subsystem.
  static QuantumState basis(std::vector<int> dims, std::initializer_list<int> levels);

  int dim() const noexcept { return static_cast<int>(v_.size()); }
  const std::vector<int>& dims() const noexcept { return dims_; }
  const CVector& amplitudes() const noexcept { return v_; }
  cplx operator[](int i) const { return v_[i]; }

  double norm() const { return v_.norm(); }
  QuantumState normalized() const;

 private:
  CVector v_;
  std::vector<int> dims_;
};

// <a|b>
cplx inner(const QuantumState& a, const QuantumState& b);
QuantumState apply(const Operator& op, const QuantumState& psi);
cplx expectation(const Operator& op, const QuantumState& psi);

int product_dim(const std::vector<int>& dims);

Operator annihilation(FockCutoff cutoff);
Operator creation(FockCutoff cutoff);
Operator number_operator(FockCutoff cutoff);

// Exact projection of (a + a^dag)^power onto the retained levels. Products of
// truncated ladder matrices are wrong near n_max, so the power is formed in a
// padded space and then cut back.
Operator quadrature_power(FockCutoff cutoff, int power);

enum class Axis { x, y, z };

Operator pauli(Axis axis);
Operator sigma_plus();   // |e><g|
Operator sigma_minus();  // |g><e|

Operator tensor(const Operator& a, const Operator& b);

// Truncation adequacy heuristics for the unitaries below.
bool displacement_cutoff_adequate(double alpha, FockCutoff cutoff);
bool squeeze_cutoff_adequate(double r, FockCutoff cutoff);

// D(alpha) = exp[alpha (a^dag - a)] on the truncated space. Warns (through
// qrm::warn) when the cutoff is too small for the requested alpha.
Operator displacement(double alpha, FockCutoff cutoff);

// S(r) = exp[r (a^dag^2 - a^2) / 2]; requires n_max >= 2.
Operator squeeze(double r, FockCutoff cutoff);

}  // namespace qrm
