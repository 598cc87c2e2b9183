// qstate.hpp — density matrices, populations and the entropic functionals
// built on them (entropies, divergences, coherence, free-energy split).
//
// Conventions: entropies in nats; T = 1/beta with k_B = 1. Relative
// entropies return +infinity (not an exception) when the support condition
// fails.
#pragma once

#include "qept/linalg.hpp"

#include <vector>

namespace qept::qstate {

// Validated quantum state: Hermitian, unit trace, positive semidefinite.
// Construction repairs eigenvalues in [-psd_repair, 0) by clamping to zero
// and renormalising; anything more negative throws InvalidStateError.
class DensityMatrix {
public:
    static DensityMatrix from_matrix(const ComplexMatrix& m);

    const ComplexMatrix& matrix() const { return m_; }
    int dim() const { return static_cast<int>(m_.rows()); }

private:
    explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {}
    ComplexMatrix m_;
};

// Classical probability vector; entries in [-1e-12, 0) are clamped to zero,
// the total must be one within trace tolerance.
struct PopulationVector {
    std::vector<double> p;

    static PopulationVector from_values(std::vector<double> values);
    int dim() const { return static_cast<int>(p.size()); }
    double operator[](int i) const { return p[static_cast<std::size_t>(i)]; }
};

// Diagonal of rho in the eigenbasis of the supplied operator (never the
// computational basis).
PopulationVector populations(const DensityMatrix& rho,
                             const linalg::SpectralHamiltonian& h);

struct GibbsState {
    DensityMatrix rho;
    double log_partition = 0.0; // ln Z
};

// exp(-beta H) / Z with ln Z returned as a by-product. Stable for large
// beta (weights are shifted by the ground energy).
GibbsState gibbs_state(const linalg::SpectralHamiltonian& h, double beta);

// Thermal populations e^{-beta E_n} / Z.
PopulationVector gibbs_populations(const linalg::SpectralHamiltonian& h, double beta);

// -tr(rho ln rho); eigenvalues at or below the support tolerance contribute
// zero.
double von_neumann_entropy(const DensityMatrix& rho);

// Shannon entropy of a population vector, same zero convention.
double shannon_entropy(const PopulationVector& p);

// S(rho || sigma) = tr rho ln rho - tr rho ln sigma; +infinity when rho has
// weight outside sigma's support.
double quantum_relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

// Classical KL divergence with the same support conventions.
double kl_divergence(const PopulationVector& p, const PopulationVector& q);

// Relative entropy of coherence C(rho) = S(dephase(rho)) - S(rho), with
// dephasing in the eigenbasis of h (degenerate blocks keep their inner
// coherences).
double relative_entropy_of_coherence(const DensityMatrix& rho,
                                     const linalg::SpectralHamiltonian& h);

// F = tr(H rho) - T S(rho) split as F_eq + T KL(p||p_eq) + T C(rho).
struct FreeEnergySplit {
    double total = 0.0;          // F
    double equilibrium = 0.0;    // F_eq = -T ln Z
    double population_part = 0.0; // T KL(p || p_eq)
    double coherence_part = 0.0;  // T C(rho)
};

FreeEnergySplit free_energy_decomposition(const DensityMatrix& rho,
                                          const linalg::SpectralHamiltonian& h,
                                          double beta);

// I(S:E) = S(rho_S) + S(rho_E) - S(rho_SE) for a (d_s * d_e)-dimensional
// composite state.
double mutual_information(const DensityMatrix& rho_se, int d_s, int d_e);

// Correlated coherence C_cc = C(rho_SE) - C(rho_S) - C(rho_E), global
// coherence taken against H_s (x) 1 + 1 (x) H_e.
double correlated_coherence(const DensityMatrix& rho_se,
                            const linalg::SpectralHamiltonian& h_s,
                            const linalg::SpectralHamiltonian& h_e);

// (1/2) ||rho - sigma||_1.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

} // namespace qept::qstate
