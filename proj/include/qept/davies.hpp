// davies.hpp — weak-coupling thermal master equation in the energy
// eigenbasis: population jumps obey detailed balance, coherences decay
// independently of the populations, and the entropy production rate splits
// into a population part and a coherence part.
//
// Requires a nondegenerate system Hamiltonian so the eigenbasis (and with
// it the population/coherence split) is unambiguous.
#pragma once

#include "qept/linalg.hpp"
#include "qept/qstate.hpp"

#include <vector>

namespace qept::davies {

// One dissipative channel: downward jump from -> to with rate gamma, where
// E_from > E_to. The matching upward rate gamma * exp(-beta (E_from - E_to))
// is implied.
struct DownwardRate {
    int from = 0;
    int to = 0;
    double gamma = 0.0;
};

// Generator of the population dynamics, dp/dt = W p.
// w(n, m) is the jump rate m -> n for n != m; each diagonal entry holds
// minus its column's off-diagonal sum, so columns sum to zero.
struct RateMatrix {
    RealMatrix w;
    RealVector energies; // ascending, matching the eigenbasis
    double beta = 0.0;
    bool irreducible = false; // true when the jump graph connects all levels

    int dim() const { return static_cast<int>(energies.size()); }
};

// Assembles W from downward channels, filling in the detailed-balance
// upward rates. Throws DegenerateSpectrumError for degenerate spectra,
// NegativeRateError for gamma < 0, DomainError for malformed level pairs.
RateMatrix build_rate_matrix(const linalg::SpectralHamiltonian& h, double beta,
                             const std::vector<DownwardRate>& downward);

// dp/dt = W p.
RealVector pauli_derivative(const RateMatrix& rates, const RealVector& p);

// Decay rate of the (n, m) coherence: half the total escape rate out of
// levels n and m.
double coherence_decay_rate(const RateMatrix& rates, int n, int m);

// Full master-equation derivative of a state given in the original basis:
// populations evolve under W, each eigenbasis coherence rotates at its Bohr
// frequency and decays at its own rate.
ComplexMatrix master_derivative(const RateMatrix& rates,
                                const linalg::SpectralHamiltonian& h,
                                const ComplexMatrix& rho);

// Instantaneous entropy-production bookkeeping. Divergent entries (states
// sitting on the boundary of the state space) are reported as +infinity
// with the divergent flag set.
struct ProductionRates {
    double total = 0.0;            // Pi = diagonal + coherent
    double diagonal = 0.0;         // population (classical) part
    double coherent = 0.0;         // coherence-erasure part
    double flux = 0.0;             // Phi, entropy flow into the bath
    double free_energy_rate = 0.0; // -beta dF/dt, independent cross-check
    bool divergent = false;
};

ProductionRates production_rates(const qstate::DensityMatrix& rho,
                                 const linalg::SpectralHamiltonian& h,
                                 const RateMatrix& rates);

// Phi = -beta sum_n E_n dp_n/dt.
double entropy_flux(const RealVector& p_dot, const RealVector& energies, double beta);

// One recorded instant of a relaxation run.
struct DaviesPoint {
    double t = 0.0;
    qstate::DensityMatrix rho;
    double entropy = 0.0;     // S(rho)
    double coherence = 0.0;   // C(rho)
    double free_energy = 0.0; // tr(H rho) - T S(rho)
    ProductionRates rates;
};

struct PropagationResult {
    std::vector<DaviesPoint> points;
};

// Fixed-step fourth-order Runge-Kutta integration from t = 0 to t_max,
// recording every step (including t = 0). The state is validated after
// every step; a validation failure is reported as StepTooLargeError.
PropagationResult propagate(const qstate::DensityMatrix& rho0,
                            const linalg::SpectralHamiltonian& h,
                            const RateMatrix& rates, double dt, double t_max);

} // namespace qept::davies
