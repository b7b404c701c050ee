#include "qrm/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qrm/error.hpp"

namespace qrm {
namespace {

void require_hermitian(const Operator& h) {
  if (!h.is_hermitian(1e-12)) {
    std::ostringstream os;
    os << "eigendecomposition requires a Hermitian operator (defect " << h.hermiticity_defect() << ")";
    throw NotHermitianError(os.str());
  }
}

// Rounding floor of a dense symmetric eigensolve: eigenvalues are only good
// to a small multiple of eps * ||H||.
double rounding_floor(const Operator& h) {
  return 64.0 * std::numeric_limits<double>::epsilon() * h.max_abs() * std::sqrt(static_cast<double>(h.dim()));
}

template <class Solver>
void require_success(const Solver& solver) {
  if (solver.info() != Eigen::Success) throw ConvergenceError("Hermitian eigensolver did not converge");
}

// Applies `op` to the boson index of `psi` in `layout` without forming the full operator.
CVector apply_on_boson(const CVector& psi, const BosonLayout& layout, const Eigen::MatrixXd& op) {
  const int nb = layout.dims[layout.boson_factor];
  int inner = 1;
  for (std::size_t k = layout.boson_factor + 1; k < layout.dims.size(); ++k) inner *= layout.dims[k];
  const int outer = static_cast<int>(psi.size()) / (nb * inner);
  CVector out = CVector::Zero(psi.size());
  for (int o = 0; o < outer; ++o) {
    for (int i = 0; i < inner; ++i) {
      const int base = o * nb * inner + i;
      for (int col = 0; col < nb; ++col) {
        const cplx v = psi[base + col * inner];
        if (v == cplx(0.0)) continue;
        for (int row = 0; row < nb; ++row) {
          const double m = op(row, col);
          if (m != 0.0) out[base + row * inner] += m * v;
        }
      }
    }
  }
  return out;
}

}  // namespace

SpectralDecomposition::SpectralDecomposition(Eigen::VectorXd energies, Eigen::MatrixXd vectors,
                                             std::vector<int> dims)
    : energies_(std::move(energies)), rvec_(std::move(vectors)), dims_(std::move(dims)), real_(true) {}

SpectralDecomposition::SpectralDecomposition(Eigen::VectorXd energies, CMatrix vectors, std::vector<int> dims)
    : energies_(std::move(energies)), cvec_(std::move(vectors)), dims_(std::move(dims)), real_(false) {}

CMatrix SpectralDecomposition::vectors() const { return real_ ? CMatrix(rvec_.cast<cplx>()) : cvec_; }

QuantumState SpectralDecomposition::eigenstate(int k) const {
  CVector v = real_ ? CVector(rvec_.col(k).cast<cplx>()) : CVector(cvec_.col(k));
  return QuantumState(std::move(v), dims_);
}

double SpectralDecomposition::reconstruction_error(const Operator& h) const {
  const CMatrix v = vectors();
  const CMatrix rebuilt = v * energies_.cast<cplx>().asDiagonal() * v.adjoint();
  return (h.matrix() - rebuilt).cwiseAbs().maxCoeff() / std::max(h.max_abs(), 1e-300);
}

SpectralDecomposition diagonalize(const Operator& h) {
  require_hermitian(h);
  if (h.is_real()) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.matrix().real());
    require_success(solver);
    return {solver.eigenvalues(), solver.eigenvectors(), h.dims()};
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.matrix());
  require_success(solver);
  return {solver.eigenvalues(), CMatrix(solver.eigenvectors()), h.dims()};
}

Eigen::VectorXd eigenvalues(const Operator& h) {
  require_hermitian(h);
  if (h.is_real()) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.matrix().real(), Eigen::EigenvaluesOnly);
    require_success(solver);
    return solver.eigenvalues();
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.matrix(), Eigen::EigenvaluesOnly);
  require_success(solver);
  return solver.eigenvalues();
}

QuantumState fix_global_phase(const QuantumState& psi) {
  const CVector& v = psi.amplitudes();
  int best = 0;
  double best_abs = -1.0;
  for (int k = 0; k < v.size(); ++k) {
    // strict comparison keeps the first index on ties
    if (std::abs(v[k]) > best_abs * (1.0 + 1e-12)) {
      best_abs = std::abs(v[k]);
      best = k;
    }
  }
  if (best_abs <= 0.0) return psi;
  const cplx phase = std::conj(v[best]) / best_abs;
  return QuantumState(v * phase, psi.dims());
}

GroundStateResult ground_state(const Operator& h) {
  const SpectralDecomposition d = diagonalize(h);
  GroundStateResult r;
  r.energy = d.energies()[0];
  r.state = fix_global_phase(d.eigenstate(0).normalized());
  r.cutoff_used = FockCutoff{h.dims().back() - 1};
  return r;
}

CutoffSearch converge_cutoff(const HamiltonianFactory& builder, double tol, int n_start, int n_cap) {
  if (!(tol > 0.0)) throw ConfigError("converge_cutoff: tolerance must be positive");
  if (n_start < 1) throw TruncationError("converge_cutoff: n_start must be at least 1");

  CutoffSearch s;
  auto energy_at = [&](int n, double& floor) {
    const Operator h = builder(FockCutoff{n});
    floor = rounding_floor(h);
    const double e = eigenvalues(h)[0];
    s.tested.push_back(n);
    s.energies.push_back(e);
    return e;
  };

  double floor_n = 0.0;
  double e_n = energy_at(n_start, floor_n);
  for (int n = n_start;; n *= 2) {
    if (2 * n > n_cap) {
      std::ostringstream os;
      os << "Fock cutoff did not converge to " << tol << " below the cap " << n_cap << " (last drift "
         << (s.energies.size() > 1 ? std::abs(s.energies.end()[-1] - s.energies.end()[-2]) : 0.0) << ")";
      throw ConvergenceError(os.str());
    }
    double floor_2n = 0.0;
    const double e_2n = energy_at(2 * n, floor_2n);
    const double floor = std::max(floor_n, floor_2n);
    if (e_2n > e_n + floor) s.monotone = false;
    const double drift = std::abs(e_n - e_2n);
    const double tol_used = std::max(tol, floor);
    if (drift < tol_used) {
      s.cutoff = FockCutoff{n};
      s.energy = e_n;
      s.energy_drift = drift;
      s.tolerance_used = tol_used;
      return s;
    }
    e_n = e_2n;
    floor_n = floor_2n;
  }
}

GroundStateResult ground_state(const HamiltonianFactory& builder, double tol, int n_start) {
  const CutoffSearch search = converge_cutoff(builder, tol, n_start);
  GroundStateResult r = ground_state(builder(search.cutoff));
  r.cutoff_used = search.cutoff;
  r.converged = true;
  r.energy_drift = search.energy_drift;
  return r;
}

BosonLayout BosonLayout::trailing(std::vector<int> dims, double displacement) {
  BosonLayout l;
  l.boson_factor = static_cast<int>(dims.size()) - 1;
  l.dims = std::move(dims);
  l.displacement = displacement;
  return l;
}

PhotonMoments photon_moments(const QuantumState& psi, const BosonLayout& layout) {
  if (layout.boson_factor < 0 || layout.boson_factor >= static_cast<int>(layout.dims.size()) ||
      psi.dims() != layout.dims) {
    throw DimensionError("photon_moments: state dimensions do not match the layout");
  }
  const int nb = layout.dims[layout.boson_factor];
  if (nb < 2) throw TruncationError("photon_moments: boson factor needs at least two levels");
  const double alpha = layout.displacement;
  Eigen::MatrixXd n = Eigen::MatrixXd::Zero(nb, nb);
  for (int k = 0; k < nb; ++k) n(k, k) = k + alpha * alpha;
  for (int k = 0; k + 1 < nb; ++k) n(k, k + 1) = n(k + 1, k) = alpha * std::sqrt(static_cast<double>(k + 1));

  const CVector& v = psi.amplitudes();
  const CVector nv = apply_on_boson(v, layout, n);
  const double mean = v.dot(nv).real();
  const double second = nv.squaredNorm();
  PhotonMoments m;
  m.mean_n = mean;
  // N is Hermitian, so <N^2> = ||N psi||^2; clamp rounding below zero.
  m.gamma = std::max(0.0, second - mean * mean);
  return m;
}

Operator parity_operator(FockCutoff cutoff) {
  const int nb = cutoff.dim();
  CMatrix m = CMatrix::Zero(2 * nb, 2 * nb);
  for (int s = 0; s < 2; ++s) {
    // spin index 0 is |e> (sigma_z = +1) and adds one excitation
    const int spin_excitation = s == 0 ? 1 : 0;
    for (int n = 0; n < nb; ++n) m(s * nb + n, s * nb + n) = ((n + spin_excitation) % 2 == 0) ? 1.0 : -1.0;
  }
  return Operator(std::move(m), {2, nb});
}

}  // namespace qrm
