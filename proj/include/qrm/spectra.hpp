#pragma once

// Dense Hermitian eigendecomposition, ground states, photon statistics,
// parity and Fock-cutoff convergence.

#include <functional>
#include <limits>
#include <vector>

#include "qrm/hilbert.hpp"

namespace qrm {

// H = V diag(energies) V^dag, energies ascending. Real symmetric input keeps
// real eigenvectors (every Hamiltonian in this library is real).
class SpectralDecomposition {
 public:
  SpectralDecomposition(Eigen::VectorXd energies, Eigen::MatrixXd vectors, std::vector<int> dims);
  SpectralDecomposition(Eigen::VectorXd energies, CMatrix vectors, std::vector<int> dims);

  int dim() const noexcept { return static_cast<int>(energies_.size()); }
  const std::vector<int>& dims() const noexcept { return dims_; }
  const Eigen::VectorXd& energies() const noexcept { return energies_; }
  bool is_real() const noexcept { return real_; }
  // Valid only when is_real().
  const Eigen::MatrixXd& real_vectors() const noexcept { return rvec_; }
  CMatrix vectors() const;
  QuantumState eigenstate(int k) const;

  // max |H - V diag(E) V^dag| / max |H|
  double reconstruction_error(const Operator& h) const;

 private:
  Eigen::VectorXd energies_;
  Eigen::MatrixXd rvec_;
  CMatrix cvec_;
  std::vector<int> dims_;
  bool real_;
};

// Throws NotHermitianError when ||H - H^dag||_max > 1e-12 ||H||_max.
SpectralDecomposition diagonalize(const Operator& h);
// Eigenvalues only (ascending); cheaper than diagonalize.
Eigen::VectorXd eigenvalues(const Operator& h);

struct GroundStateResult {
  double energy = 0.0;
  QuantumState state;
  FockCutoff cutoff_used;
  bool converged = false;
  double energy_drift = std::numeric_limits<double>::infinity();  // |E(n_max) - E(2 n_max)|
};

// Rescales a state so its largest-magnitude amplitude is real and positive
// (first such index on ties).
QuantumState fix_global_phase(const QuantumState& psi);

// Lowest eigenpair of a fixed operator. No cutoff study is made, so
// `converged` is false and `energy_drift` infinite; cutoff_used is read from
// the last (boson) factor.
GroundStateResult ground_state(const Operator& h);

using HamiltonianFactory = std::function<Operator(FockCutoff)>;

struct CutoffSearch {
  FockCutoff cutoff;
  double energy = 0.0;        // ground energy at `cutoff`
  double energy_drift = 0.0;  // |E(cutoff) - E(2 cutoff)|
  // max(requested tolerance, rounding floor of the eigensolver at this norm)
  double tolerance_used = 0.0;
  std::vector<int> tested;
  std::vector<double> energies;
  // E non-increasing along the doubling sequence (within the rounding floor).
  bool monotone = true;
};

inline constexpr int kCutoffCap = 4096;

// Doubles n_start, 2 n_start, ... until the ground energy moves by less than
// `tol` under one more doubling. ConvergenceError when the next doubling
// would pass the cap.
CutoffSearch converge_cutoff(const HamiltonianFactory& builder, double tol, int n_start = 16,
                             int n_cap = kCutoffCap);

// converge_cutoff followed by the ground state at the returned cutoff.
GroundStateResult ground_state(const HamiltonianFactory& builder, double tol, int n_start = 16);

// Which factor of a composite space is the boson, and the frame displacement:
// with displacement alpha the photon number is (a^dag + alpha)(a + alpha).
struct BosonLayout {
  std::vector<int> dims;
  int boson_factor = 0;
  double displacement = 0.0;

  // Boson as the last factor of `dims`.
  static BosonLayout trailing(std::vector<int> dims, double displacement = 0.0);
};

struct PhotonMoments {
  double mean_n = 0.0;
  double gamma = 0.0;  // <n^2> - <n>^2
};

PhotonMoments photon_moments(const QuantumState& psi, const BosonLayout& layout);

// exp{i pi [a^dag a + (1 + sigma_z)/2]} on spin (x) Fock.
Operator parity_operator(FockCutoff cutoff);

}  // namespace qrm
