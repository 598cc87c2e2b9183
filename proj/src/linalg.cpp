// linalg.cpp — spectral kernel implementation.

#include "qept/linalg.hpp"

#include "qept/errors.hpp"
#include "qept/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>

namespace qept::linalg {

namespace {

// Chain consecutive sorted eigenvalues into maximal groups at tolerance eps.
std::vector<std::vector<int>> chain_groups(const RealVector& evals, double eps) {
    std::vector<std::vector<int>> groups;
    const int d = static_cast<int>(evals.size());
    for (int i = 0; i < d; ++i) {
        if (i == 0 || evals[i] - evals[i - 1] > eps) {
            groups.emplace_back();
        }
        groups.back().push_back(i);
    }
    return groups;
}

// Rotate each column so its largest-magnitude component (lowest index on
// ties) is real positive.
void fix_phases(ComplexMatrix& v) {
    for (int c = 0; c < v.cols(); ++c) {
        int best = 0;
        double best_mag = -1.0;
        for (int r = 0; r < v.rows(); ++r) {
            const double mag = std::abs(v(r, c));
            if (mag > best_mag) { // strict: ties resolve to the lowest index
                best_mag = mag;
                best = r;
            }
        }
        const std::complex<double> z = v(best, c);
        if (std::abs(z) > 0.0) {
            v.col(c) *= std::conj(z) / std::abs(z);
        }
    }
}

// Replace the columns of a degenerate group by Gram-Schmidt of the
// projected standard basis vectors, taken in index order. The span is
// unchanged; the result no longer depends on the solver's arbitrary
// in-block rotation.
void canonicalize_group(ComplexMatrix& v, const std::vector<int>& group) {
    const int k = static_cast<int>(group.size());
    if (k < 2) return;
    const int d = static_cast<int>(v.rows());

    ComplexMatrix block(d, k);
    for (int j = 0; j < k; ++j) block.col(j) = v.col(group[j]);

    ComplexMatrix fresh(d, k);
    int accepted = 0;
    for (int e = 0; e < d && accepted < k; ++e) {
        // w = P e_e with P = block block^dag
        ComplexVector w = block * (block.adjoint().col(e));
        for (int j = 0; j < accepted; ++j) {
            w -= fresh.col(j) * (fresh.col(j).dot(w));
        }
        const double nrm = w.norm();
        if (nrm > 1e-8) {
            fresh.col(accepted++) = w / nrm;
        }
    }
    if (accepted < k) return; // projector numerically defective; keep solver basis

    for (int j = 0; j < k; ++j) v.col(group[j]) = fresh.col(j);
}

} // namespace

double max_abs(const ComplexMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void require_hermitian(const ComplexMatrix& m, double rel_tol, const char* who) {
    if (m.rows() != m.cols()) {
        throw NotSquareError(std::string(who) + ": matrix is " +
                             std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
    const double scale = std::max(1.0, max_abs(m));
    const double dev = max_abs(ComplexMatrix(m - m.adjoint()));
    if (dev > rel_tol * scale) {
        throw NotHermitianError(std::string(who) + ": |m - m^dag| = " +
                                std::to_string(dev) + " exceeds tolerance");
    }
}

ComplexMatrix hermitize(const ComplexMatrix& m) {
    return 0.5 * (m + m.adjoint());
}

bool SpectralHamiltonian::nondegenerate() const {
    return std::all_of(degeneracy_groups.begin(), degeneracy_groups.end(),
                       [](const std::vector<int>& g) { return g.size() == 1; });
}

double SpectralHamiltonian::bohr_frequency(int n, int m) const {
    return eigenvalues[n] - eigenvalues[m];
}

RealMatrix SpectralHamiltonian::bohr_table() const {
    const int d = dim();
    RealMatrix w(d, d);
    for (int n = 0; n < d; ++n)
        for (int m = 0; m < d; ++m) w(n, m) = eigenvalues[n] - eigenvalues[m];
    return w;
}

bool SpectralHamiltonian::bohr_nondegenerate() const {
    const int d = dim();
    std::vector<double> gaps;
    gaps.reserve(static_cast<std::size_t>(d) * (d - 1));
    for (int n = 0; n < d; ++n)
        for (int m = 0; m < d; ++m)
            if (n != m) gaps.push_back(eigenvalues[n] - eigenvalues[m]);
    std::sort(gaps.begin(), gaps.end());
    for (std::size_t i = 1; i < gaps.size(); ++i) {
        if (gaps[i] - gaps[i - 1] <= degeneracy_tolerance) return false;
    }
    return true;
}

SpectralHamiltonian hermitian_eigendecomposition(const ComplexMatrix& h) {
    require_hermitian(h, tol::hermitian_rel, "hermitian_eigendecomposition");

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitize(h));
    if (solver.info() != Eigen::Success) {
        throw DomainError("hermitian_eigendecomposition: solver failed to converge");
    }

    SpectralHamiltonian out;
    out.matrix = h;
    out.eigenvalues = solver.eigenvalues();
    out.eigenvectors = solver.eigenvectors();

    const double range = out.eigenvalues[out.dim() - 1] - out.eigenvalues[0];
    out.degeneracy_tolerance = tol::degeneracy_rel * std::max(1.0, range);
    out.degeneracy_groups = chain_groups(out.eigenvalues, out.degeneracy_tolerance);

    for (const auto& g : out.degeneracy_groups) canonicalize_group(out.eigenvectors, g);
    fix_phases(out.eigenvectors);
    return out;
}

ComplexMatrix spectral_function(const SpectralHamiltonian& h,
                                const std::function<double(double)>& f) {
    const int d = h.dim();
    RealVector fe(d);
    for (int i = 0; i < d; ++i) {
        fe[i] = f(h.eigenvalues[i]);
        if (!std::isfinite(fe[i])) {
            throw DomainError("spectral_function: f not finite at eigenvalue " +
                              std::to_string(h.eigenvalues[i]));
        }
    }
    return h.eigenvectors * fe.asDiagonal() * h.eigenvectors.adjoint();
}

ComplexMatrix unitary_from_generator(const ComplexMatrix& k, double t) {
    SpectralHamiltonian s = hermitian_eigendecomposition(k);
    const int d = s.dim();
    ComplexVector phase(d);
    for (int i = 0; i < d; ++i) {
        phase[i] = std::exp(std::complex<double>(0.0, -s.eigenvalues[i] * t));
    }
    return s.eigenvectors * phase.asDiagonal() * s.eigenvectors.adjoint();
}

ComplexMatrix kron_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, int d_s, int d_e, Keep keep) {
    if (d_s < 1 || d_e < 1 || m.rows() != m.cols() ||
        m.rows() != static_cast<long>(d_s) * d_e) {
        throw DimensionMismatchError("partial_trace: matrix is " +
                                     std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                                     ", expected " + std::to_string(d_s * d_e) + " square");
    }
    if (keep == Keep::system) {
        ComplexMatrix out = ComplexMatrix::Zero(d_s, d_s);
        for (int n = 0; n < d_s; ++n)
            for (int np = 0; np < d_s; ++np)
                for (int mu = 0; mu < d_e; ++mu)
                    out(n, np) += m(n * d_e + mu, np * d_e + mu);
        return out;
    }
    ComplexMatrix out = ComplexMatrix::Zero(d_e, d_e);
    for (int mu = 0; mu < d_e; ++mu)
        for (int nu = 0; nu < d_e; ++nu)
            for (int n = 0; n < d_s; ++n)
                out(mu, nu) += m(n * d_e + mu, n * d_e + nu);
    return out;
}

ComplexMatrix dephase(const ComplexMatrix& rho, const SpectralHamiltonian& h) {
    const int d = h.dim();
    if (rho.rows() != d || rho.cols() != d) {
        throw DimensionMismatchError("dephase: state dimension " +
                                     std::to_string(rho.rows()) +
                                     " does not match operator dimension " +
                                     std::to_string(d));
    }
    std::vector<int> group_of(d);
    for (std::size_t g = 0; g < h.degeneracy_groups.size(); ++g)
        for (int i : h.degeneracy_groups[g]) group_of[i] = static_cast<int>(g);

    ComplexMatrix in_basis = h.eigenvectors.adjoint() * rho * h.eigenvectors;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (group_of[i] != group_of[j]) in_basis(i, j) = 0.0;
    return h.eigenvectors * in_basis * h.eigenvectors.adjoint();
}

SpectralHamiltonian composite_spectral(const SpectralHamiltonian& h_s,
                                       const SpectralHamiltonian& h_e) {
    const int ds = h_s.dim();
    const int de = h_e.dim();
    const int d = ds * de;

    // Product eigenpairs (E_n + E_mu, v_n (x) v_mu), then a stable sort by
    // energy. Composite index before sorting is n * de + mu.
    std::vector<int> order(d);
    std::iota(order.begin(), order.end(), 0);
    RealVector total(d);
    for (int n = 0; n < ds; ++n)
        for (int mu = 0; mu < de; ++mu)
            total[n * de + mu] = h_s.eigenvalues[n] + h_e.eigenvalues[mu];
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return total[a] < total[b]; });

    SpectralHamiltonian out;
    out.eigenvalues.resize(d);
    out.eigenvectors.resize(d, d);
    for (int k = 0; k < d; ++k) {
        const int idx = order[k];
        const int n = idx / de;
        const int mu = idx % de;
        out.eigenvalues[k] = total[idx];
        // v_n (x) v_mu assembled directly
        for (int r = 0; r < ds; ++r)
            out.eigenvectors.block(r * de, k, de, 1) =
                h_s.eigenvectors(r, n) * h_e.eigenvectors.col(mu);
    }
    out.matrix = out.eigenvectors * out.eigenvalues.asDiagonal() *
                 out.eigenvectors.adjoint();
    const double range = out.eigenvalues[d - 1] - out.eigenvalues[0];
    out.degeneracy_tolerance = tol::degeneracy_rel * std::max(1.0, range);
    out.degeneracy_groups = chain_groups(out.eigenvalues, out.degeneracy_tolerance);
    return out;
}

} // namespace qept::linalg
