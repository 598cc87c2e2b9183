// thermalops.hpp — finite thermal operations: a system coupled to one
// thermal environment copy through an energy-conserving joint unitary.
//
// The unitary commutes with H_S + H_E, so it is block diagonal over the
// degenerate subspaces of the total energy. Everything downstream (the
// induced population kernel, the coherence multipliers, the entropy
// production and its population/coherence split, the conservation laws)
// follows from that block structure.
#pragma once

#include "qept/linalg.hpp"
#include "qept/qstate.hpp"

#include <cstdint>
#include <vector>

namespace qept::thermalops {

struct ThermalOperation {
    linalg::SpectralHamiltonian h_s;
    linalg::SpectralHamiltonian h_e;
    linalg::SpectralHamiltonian h_total; // H_S (x) 1 + 1 (x) H_E
    double beta = 0.0;
    ComplexMatrix u;                // joint unitary, computational tensor basis
    qstate::DensityMatrix rho_e_eq; // thermal environment state
    qstate::PopulationVector q;     // its eigenbasis weights

    int d_s() const { return h_s.dim(); }
    int d_e() const { return h_e.dim(); }
    int dim() const { return h_total.dim(); }
};

// Haar-random block unitary on every degenerate subspace of the total
// energy; one-dimensional blocks get exactly 1. Deterministic in the seed.
ThermalOperation random_energy_conserving_unitary(const linalg::SpectralHamiltonian& h_s,
                                                  const linalg::SpectralHamiltonian& h_e,
                                                  double beta, std::uint64_t seed);

// Wraps a caller-supplied joint unitary. Throws ValidationError unless u is
// unitary and commutes with the total energy (both at the fixed tolerances).
ThermalOperation from_unitary(const linalg::SpectralHamiltonian& h_s,
                              const linalg::SpectralHamiltonian& h_e, double beta,
                              const ComplexMatrix& u);

// U = exp(-i V t) for an interaction that commutes with the total energy;
// throws NonCommutingPotentialError otherwise.
ThermalOperation from_potential(const linalg::SpectralHamiltonian& h_s,
                                const linalg::SpectralHamiltonian& h_e, double beta,
                                const ComplexMatrix& v, double t);

// Exchange generator: theta * sum over each degenerate total-energy block
// of (|u_i><u_j| + |u_j><u_i|) for all pairs inside the block. With t = 1
// this produces the partial-swap family; theta = pi/2 is the full swap on
// two-dimensional resonant blocks.
ComplexMatrix exchange_potential(const linalg::SpectralHamiltonian& h_total, double theta);

// from_potential(exchange_potential(theta), t = 1).
ThermalOperation partial_swap(const linalg::SpectralHamiltonian& h_s,
                              const linalg::SpectralHamiltonian& h_e, double beta,
                              double theta);

struct ApplyResult {
    qstate::DensityMatrix rho_se; // U (rho_S (x) rho_E^eq) U^dag
    qstate::DensityMatrix rho_s;  // reduced system state
    qstate::DensityMatrix rho_e;  // reduced environment state
};

ApplyResult apply(const ThermalOperation& op, const qstate::DensityMatrix& rho_s);

// Reduced-channel data: Kraus operators M_{mu nu} = sqrt(q_mu) <nu|U|mu>,
// the induced population kernel and the coherence multipliers.
struct ChannelSummary {
    std::vector<ComplexMatrix> kraus; // index mu * d_e + nu
    RealMatrix q_kernel;              // q_kernel(m, n) = P(m | n), columns sum to 1
    ComplexMatrix alpha;              // c'_{nm} = alpha(n, m) c_{nm}
    bool alpha_valid = false;         // requires a nondegenerate Bohr spectrum
    double completeness_residual = 0.0; // max |sum M^dag M - 1|
};

ChannelSummary channel_summary(const ThermalOperation& op);

// Entropy production of one application and its split into a population
// part and a coherence part, all computed from relative-entropy drops of
// the reduced system state.
struct ProductionTotals {
    double sigma = 0.0;   // beta * (F(rho_S) - F(rho'_S))
    double sigma_d = 0.0; // KL(p || p_eq) - KL(p' || p_eq)
    double xi = 0.0;      // C(rho_S) - C(rho'_S)
};

ProductionTotals entropy_production_totals(const ThermalOperation& op,
                                           const qstate::DensityMatrix& rho_s);

// The exact bookkeeping identities of one thermal operation, evaluated on a
// concrete state. Every residual should vanish to numerical precision.
struct ConservationReport {
    ProductionTotals totals;
    double s_rel_env = 0.0;     // S(rho'_E || rho_E^eq)
    double mutual_info = 0.0;   // I(S : E) after the interaction
    double coherence_initial = 0.0;     // C(rho_S)
    double coherence_joint_final = 0.0; // C(rho'_SE), total-energy blocks
    double coherence_s_final = 0.0;     // C(rho'_S)
    double coherence_e_final = 0.0;     // C(rho'_E)
    double correlated_coherence_final = 0.0; // C_cc of rho'_SE

    double residual_production_split = 0.0; // sigma - s_rel_env - mutual_info
    double residual_dephased_entropy = 0.0; // S(deph rho'_SE) - S(deph rho_SE)
    double residual_global_coherence = 0.0; // C(rho'_SE) - C(rho_S)
    double residual_coherence_split = 0.0;  // xi - (C(rho'_SE) - C(rho'_S))
    double residual_coherence_transfer = 0.0; // xi - C(rho'_E) - C_cc
    double residual_joint_entropy = 0.0;    // S(rho'_SE) - S(rho_SE)

    int blocks_total = 0;      // degenerate total-energy subspaces
    int blocks_nontrivial = 0; // those with dimension >= 2
};

ConservationReport conservation_report(const ThermalOperation& op,
                                       const qstate::DensityMatrix& rho_s);

// Repeated collisions with fresh environment copies.
struct CollisionPoint {
    int k = 0;
    qstate::DensityMatrix rho_s;
    double distance_to_thermal = 0.0; // trace distance to the system Gibbs state
    ProductionTotals step;            // production of collision k (zero for k = 0)
    double s_rel_env = 0.0;           // per-collision environment displacement
    double mutual_info = 0.0;         // per-collision correlations built
    double cumulative_sigma = 0.0;
};

std::vector<CollisionPoint> collision_sequence(const ThermalOperation& op,
                                               const qstate::DensityMatrix& rho0, int n);

} // namespace qept::thermalops
