// linalg.hpp — dense Hermitian spectral kernel: deterministic
// eigendecompositions, spectral functions, tensor plumbing and dephasing.
#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace qept {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

namespace linalg {

// Max-norm (largest |entry|); zero for empty matrices.
double max_abs(const ComplexMatrix& m);

// Throws NotSquareError / NotHermitianError unless m is square and
// Hermitian within rel_tol * max(1, max_abs(m)).
void require_hermitian(const ComplexMatrix& m, double rel_tol, const char* who);

// (A + A^dag) / 2.
ComplexMatrix hermitize(const ComplexMatrix& m);

// A Hermitian operator together with its spectral data.
//
// Eigenvalues ascend; eigenvector columns follow the deterministic
// convention: inside each degenerate group the basis is rebuilt by
// Gram-Schmidt of the projected standard basis vectors in index order, and
// each column's largest-magnitude component is rotated to be real positive.
// Degeneracy groups chain transitively at tolerance
// degeneracy_rel * max(1, spectral range).
struct SpectralHamiltonian {
    ComplexMatrix matrix;                        // the operator itself
    RealVector eigenvalues;                      // ascending
    ComplexMatrix eigenvectors;                  // columns, orthonormal
    std::vector<std::vector<int>> degeneracy_groups;
    double degeneracy_tolerance = 0.0;

    int dim() const { return static_cast<int>(eigenvalues.size()); }
    bool nondegenerate() const;
    double bohr_frequency(int n, int m) const;   // E_n - E_m
    RealMatrix bohr_table() const;               // all E_n - E_m
    // True when every nonzero Bohr frequency is distinct from every other
    // (at the degeneracy tolerance); required for the scalar coherence
    // processing picture.
    bool bohr_nondegenerate() const;
};

// Full spectral decomposition with the deterministic conventions above.
SpectralHamiltonian hermitian_eigendecomposition(const ComplexMatrix& h);

// V f(E) V^dag. Throws DomainError if f is not finite at an eigenvalue.
ComplexMatrix spectral_function(const SpectralHamiltonian& h,
                                const std::function<double(double)>& f);

// exp(-i K t) for Hermitian K, built spectrally (exactly unitary up to
// rounding).
ComplexMatrix unitary_from_generator(const ComplexMatrix& k, double t);

// Kronecker product, system factor first: composite index n * d_e + mu.
ComplexMatrix kron_product(const ComplexMatrix& a, const ComplexMatrix& b);

enum class Keep { system, environment };

// Partial trace of a (d_s * d_e)-dimensional composite operator.
ComplexMatrix partial_trace(const ComplexMatrix& m, int d_s, int d_e, Keep keep);

// Energy dephasing: sum_g P_g rho P_g over the degeneracy groups of h.
// Coherences inside a degenerate group survive; cross-group entries die.
ComplexMatrix dephase(const ComplexMatrix& rho, const SpectralHamiltonian& h);

// Spectral data of H_s (x) 1 + 1 (x) H_e assembled from the factor
// decompositions: eigenvalues E_n + E_mu with product eigenvectors, sorted
// ascending and grouped at the combined spectral-range tolerance. Avoids
// re-diagonalising and keeps the product structure of degenerate blocks.
SpectralHamiltonian composite_spectral(const SpectralHamiltonian& h_s,
                                       const SpectralHamiltonian& h_e);

} // namespace linalg
} // namespace qept
