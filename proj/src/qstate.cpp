// qstate.cpp — state validation and entropic functionals.

#include "qept/qstate.hpp"

#include "qept/errors.hpp"
#include "qept/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace qept::qstate {

namespace {

constexpr double k_inf = std::numeric_limits<double>::infinity();

double xlnx(double x) {
    return x > tol::support ? x * std::log(x) : 0.0;
}

} // namespace

DensityMatrix DensityMatrix::from_matrix(const ComplexMatrix& m) {
    linalg::require_hermitian(m, tol::hermitian_rel, "DensityMatrix");
    const double tr = m.trace().real();
    if (std::abs(tr - 1.0) > tol::trace_check) {
        throw InvalidStateError("DensityMatrix: trace " + std::to_string(tr) +
                                " deviates from one beyond tolerance");
    }

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(linalg::hermitize(m));
    const RealVector& ev = solver.eigenvalues();
    const double min_ev = ev.minCoeff();
    if (min_ev < -tol::psd_repair) {
        throw InvalidStateError("DensityMatrix: eigenvalue " + std::to_string(min_ev) +
                                " below repair tolerance");
    }
    if (min_ev < 0.0) {
        // Clamp the small negatives and renormalise the spectrum.
        RealVector fixed = ev.cwiseMax(0.0);
        fixed /= fixed.sum();
        ComplexMatrix repaired = solver.eigenvectors() * fixed.asDiagonal() *
                                 solver.eigenvectors().adjoint();
        return DensityMatrix(linalg::hermitize(repaired));
    }
    return DensityMatrix(linalg::hermitize(m) / tr);
}

PopulationVector PopulationVector::from_values(std::vector<double> values) {
    double sum = 0.0;
    for (double& v : values) {
        if (v < -1e-12) {
            throw InvalidStateError("PopulationVector: entry " + std::to_string(v) +
                                    " below clamp tolerance");
        }
        if (v < 0.0) v = 0.0;
        sum += v;
    }
    if (std::abs(sum - 1.0) > tol::trace_check) {
        throw InvalidStateError("PopulationVector: total " + std::to_string(sum) +
                                " deviates from one beyond tolerance");
    }
    return PopulationVector{std::move(values)};
}

PopulationVector populations(const DensityMatrix& rho,
                             const linalg::SpectralHamiltonian& h) {
    if (rho.dim() != h.dim()) {
        throw DimensionMismatchError("populations: state dim " + std::to_string(rho.dim()) +
                                     " vs operator dim " + std::to_string(h.dim()));
    }
    const ComplexMatrix in_basis =
        h.eigenvectors.adjoint() * rho.matrix() * h.eigenvectors;
    std::vector<double> p(static_cast<std::size_t>(h.dim()));
    for (int i = 0; i < h.dim(); ++i) p[static_cast<std::size_t>(i)] = in_basis(i, i).real();
    return PopulationVector::from_values(std::move(p));
}

GibbsState gibbs_state(const linalg::SpectralHamiltonian& h, double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw NonFiniteBetaError("gibbs_state: beta must be finite and positive, got " +
                                 std::to_string(beta));
    }
    const int d = h.dim();
    const double e0 = h.eigenvalues[0];
    RealVector w(d);
    for (int i = 0; i < d; ++i) w[i] = std::exp(-beta * (h.eigenvalues[i] - e0));
    const double z0 = w.sum();
    w /= z0;
    ComplexMatrix m = h.eigenvectors * w.asDiagonal() * h.eigenvectors.adjoint();
    return GibbsState{DensityMatrix::from_matrix(linalg::hermitize(m)),
                      std::log(z0) - beta * e0};
}

PopulationVector gibbs_populations(const linalg::SpectralHamiltonian& h, double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw NonFiniteBetaError("gibbs_populations: beta must be finite and positive");
    }
    const int d = h.dim();
    const double e0 = h.eigenvalues[0];
    std::vector<double> w(static_cast<std::size_t>(d));
    double z0 = 0.0;
    for (int i = 0; i < d; ++i) {
        w[static_cast<std::size_t>(i)] = std::exp(-beta * (h.eigenvalues[i] - e0));
        z0 += w[static_cast<std::size_t>(i)];
    }
    for (double& v : w) v /= z0;
    return PopulationVector::from_values(std::move(w));
}

double von_neumann_entropy(const DensityMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho.matrix(),
                                                        Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (int i = 0; i < rho.dim(); ++i) s -= xlnx(solver.eigenvalues()[i]);
    return s;
}

double shannon_entropy(const PopulationVector& p) {
    double s = 0.0;
    for (double v : p.p) s -= xlnx(v);
    return s;
}

double quantum_relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim()) {
        throw DimensionMismatchError("quantum_relative_entropy: dims " +
                                     std::to_string(rho.dim()) + " vs " +
                                     std::to_string(sigma.dim()));
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> rs(rho.matrix());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> ss(sigma.matrix());

    double tr_rho_ln_rho = 0.0;
    for (int i = 0; i < rho.dim(); ++i) tr_rho_ln_rho += xlnx(rs.eigenvalues()[i]);

    double tr_rho_ln_sigma = 0.0;
    for (int j = 0; j < sigma.dim(); ++j) {
        const double s_j = ss.eigenvalues()[j];
        const double weight =
            (ss.eigenvectors().col(j).adjoint() * rho.matrix() *
             ss.eigenvectors().col(j))(0, 0).real();
        if (s_j > tol::support) {
            tr_rho_ln_sigma += weight * std::log(s_j);
        } else if (weight > 1e-12) {
            return k_inf; // rho has weight outside sigma's support
        }
    }
    return tr_rho_ln_rho - tr_rho_ln_sigma;
}

double kl_divergence(const PopulationVector& p, const PopulationVector& q) {
    if (p.dim() != q.dim()) {
        throw DimensionMismatchError("kl_divergence: dims " + std::to_string(p.dim()) +
                                     " vs " + std::to_string(q.dim()));
    }
    double kl = 0.0;
    for (int i = 0; i < p.dim(); ++i) {
        if (p[i] <= tol::support) continue;
        if (q[i] <= tol::support) return k_inf;
        kl += p[i] * std::log(p[i] / q[i]);
    }
    return kl;
}

double relative_entropy_of_coherence(const DensityMatrix& rho,
                                     const linalg::SpectralHamiltonian& h) {
    const DensityMatrix dephased =
        DensityMatrix::from_matrix(linalg::dephase(rho.matrix(), h));
    return von_neumann_entropy(dephased) - von_neumann_entropy(rho);
}

FreeEnergySplit free_energy_decomposition(const DensityMatrix& rho,
                                          const linalg::SpectralHamiltonian& h,
                                          double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw NonFiniteBetaError("free_energy_decomposition: beta must be positive");
    }
    const double temperature = 1.0 / beta;
    GibbsState eq = gibbs_state(h, beta);

    FreeEnergySplit split;
    split.total = (h.matrix * rho.matrix()).trace().real() -
                  temperature * von_neumann_entropy(rho);
    split.equilibrium = -temperature * eq.log_partition;
    split.population_part =
        temperature * kl_divergence(populations(rho, h), gibbs_populations(h, beta));
    split.coherence_part = temperature * relative_entropy_of_coherence(rho, h);
    return split;
}

double mutual_information(const DensityMatrix& rho_se, int d_s, int d_e) {
    const DensityMatrix rho_s = DensityMatrix::from_matrix(
        linalg::partial_trace(rho_se.matrix(), d_s, d_e, linalg::Keep::system));
    const DensityMatrix rho_e = DensityMatrix::from_matrix(
        linalg::partial_trace(rho_se.matrix(), d_s, d_e, linalg::Keep::environment));
    return von_neumann_entropy(rho_s) + von_neumann_entropy(rho_e) -
           von_neumann_entropy(rho_se);
}

double correlated_coherence(const DensityMatrix& rho_se,
                            const linalg::SpectralHamiltonian& h_s,
                            const linalg::SpectralHamiltonian& h_e) {
    const int d_s = h_s.dim();
    const int d_e = h_e.dim();
    const linalg::SpectralHamiltonian h_tot = linalg::composite_spectral(h_s, h_e);
    const DensityMatrix rho_s = DensityMatrix::from_matrix(
        linalg::partial_trace(rho_se.matrix(), d_s, d_e, linalg::Keep::system));
    const DensityMatrix rho_e = DensityMatrix::from_matrix(
        linalg::partial_trace(rho_se.matrix(), d_s, d_e, linalg::Keep::environment));
    return relative_entropy_of_coherence(rho_se, h_tot) -
           relative_entropy_of_coherence(rho_s, h_s) -
           relative_entropy_of_coherence(rho_e, h_e);
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim()) {
        throw DimensionMismatchError("trace_distance: dims " + std::to_string(rho.dim()) +
                                     " vs " + std::to_string(sigma.dim()));
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(
        ComplexMatrix(rho.matrix() - sigma.matrix()));
    return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

} // namespace qept::qstate
