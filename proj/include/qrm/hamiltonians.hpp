#pragma once

// Hamiltonians of the quantum Rabi model, its probe-conditioned branches, the
// full probe + Rabi tripartite model, the displaced frame, and the fourth-order
// effective boson Hamiltonians of both phases. Every builder keeps constant
// terms so ground energies are directly comparable across constructions.

#include <utility>

#include "qrm/hilbert.hpp"

namespace qrm {

// omega_c a^dag a + (omega_0/2) sigma_z - g sigma_x (a + a^dag).
// lambda and eta are always derived, never stored.
class RabiParams {
 public:
  RabiParams(double omega_c, double omega_0, double g);

  static RabiParams from_lambda(double lambda, double eta, double omega_c = 1.0);

  double omega_c() const noexcept { return omega_c_; }
  double omega_0() const noexcept { return omega_0_; }
  double g() const noexcept { return g_; }

  // 2g / sqrt(omega_0 omega_c); the transition sits at lambda = 1.
  double lambda() const noexcept;
  // omega_0 / omega_c
  double eta() const noexcept { return omega_0_ / omega_c_; }

  // Same atom and coupling, cavity frequency replaced.
  RabiParams with_cavity(double omega_c) const { return {omega_c, omega_0_, g_}; }

 private:
  double omega_c_;
  double omega_0_;
  double g_;
};

// Auxiliary probe atom, dispersively coupled to the cavity.
struct ProbeParams {
  double omega_s = 0.0;
  double g_s = 0.0;
  double delta_s = 1.0;  // omega_s - omega_c
  double chi = 0.0;      // g_s^2 / delta_s
  cplx alpha{M_SQRT1_2, 0.0};  // amplitude on |g>_s
  cplx beta{M_SQRT1_2, 0.0};   // amplitude on |e>_s

  // delta_s and chi derived from the probe frequency and coupling.
  static ProbeParams from_coupling(double omega_c, double omega_s, double g_s, cplx alpha = {M_SQRT1_2, 0.0},
                                   cplx beta = {M_SQRT1_2, 0.0});
  // A probe realizing `chi` with delta_s / g_s = detuning_ratio.
  static ProbeParams from_chi(double omega_c, double chi, double detuning_ratio = 100.0);

  // Throws ConfigError on |alpha|^2+|beta|^2 != 1, chi != g_s^2/delta_s, or delta_s = 0.
  void validate() const;
};

enum class Branch { e, g };

// Displaced-frame record for D(alpha); theta diagonalizes
// (omega_0/2) sigma_z - 2 g alpha sigma_x, i.e. tan(2 theta) = -4 g alpha / omega_0.
struct DisplacedFrame {
  double alpha_disp = 0.0;
  double theta = 0.0;
  double omega0_tilde = 0.0;  // lambda^2 omega_0
  double g_tilde = 0.0;       // sqrt(omega_c omega_0) / (2 lambda)

  // omega_c alpha + g sin(2 theta); vanishes at alpha = +-alpha_lambda.
  double low_branch_linear_coefficient(const RabiParams& p) const;
};

DisplacedFrame displaced_frame(const RabiParams& p, double alpha_disp);

// sqrt(omega_0 (lambda^4 - 1) / (4 lambda^2 omega_c)); PhaseDomainError for lambda <= 1.
double displacement_amplitude(const RabiParams& p);

Operator build_rabi(const RabiParams& p, FockCutoff cutoff);

// Probe-conditioned Rabi Hamiltonian: cavity frequency omega_c +- chi, plus
// (omega_s/2 + chi) on branch e and -omega_s/2 on branch g.
Operator build_branch(const RabiParams& p, const ProbeParams& probe, Branch branch, FockCutoff cutoff);

// probe (x) Rabi spin (x) Fock, with a Jaynes-Cummings probe before the dispersive reduction.
Operator build_tripartite(const RabiParams& p, const ProbeParams& probe, FockCutoff cutoff);

// D^dag(alpha) H_Rabi D(alpha), expanded term by term:
// omega_c (a^dag + alpha)(a + alpha) - g (a + a^dag) sigma_x + (omega_0/2) sigma_z - 2 g alpha sigma_x.
std::pair<Operator, DisplacedFrame> build_displaced_rabi(const RabiParams& p, double alpha_disp,
                                                         FockCutoff cutoff);

// Branch Hamiltonian in a displaced frame shared by both branches.
Operator build_displaced_branch(const RabiParams& p, const ProbeParams& probe, Branch branch, double alpha_disp,
                                FockCutoff cutoff);

// Normal-phase fourth-order effective Hamiltonian on the boson space alone.
Operator build_effective_np(const RabiParams& p, FockCutoff cutoff);

// Superradiant fourth-order effective Hamiltonian in the alpha_lambda frame;
// PhaseDomainError for lambda <= 1.
Operator build_effective_sp(const RabiParams& p, FockCutoff cutoff);

// Probe-conditioned effective Hamiltonians. Normal phase: the normal-phase
// effective Hamiltonian of the branch Rabi model (cavity omega_c +- chi).
// Superradiant phase: build_effective_sp at the bare parameters plus
// +-chi (a^dag + alpha_lambda)(a + alpha_lambda), i.e. one common frame for both branches.
Operator build_effective_branch(const RabiParams& p, const ProbeParams& probe, Branch branch, FockCutoff cutoff);

// (a^dag + alpha)(a + alpha) on the boson space: the lab-frame photon number seen from a displaced frame.
Operator displaced_number(double alpha, FockCutoff cutoff);

// Constant (identity) part that the probe adds to a branch.
double branch_offset(const ProbeParams& probe, Branch branch);

}  // namespace qrm
