// davies.cpp — thermal master-equation generator, propagation and
// entropy-production bookkeeping.

#include "qept/davies.hpp"

#include "qept/errors.hpp"
#include "qept/tolerances.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

namespace qept::davies {

namespace {

constexpr double k_inf = std::numeric_limits<double>::infinity();
constexpr double k_weight_floor = 1e-12; // below this, flow into a dead level is noise

// Union-find connectivity over the jump graph.
bool graph_connected(const RealMatrix& w) {
    const int d = static_cast<int>(w.rows());
    std::vector<int> parent(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) parent[static_cast<std::size_t>(i)] = i;
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
        return x;
    };
    for (int n = 0; n < d; ++n)
        for (int m = 0; m < d; ++m)
            if (n != m && w(n, m) > 0.0) {
                int a = find(n), b = find(m);
                if (a != b) parent[static_cast<std::size_t>(a)] = b;
            }
    int root = find(0);
    for (int i = 1; i < d; ++i)
        if (find(i) != root) return false;
    return true;
}

} // namespace

RateMatrix build_rate_matrix(const linalg::SpectralHamiltonian& h, double beta,
                             const std::vector<DownwardRate>& downward) {
    if (!h.nondegenerate()) {
        throw DegenerateSpectrumError(
            "build_rate_matrix: spectrum has degenerate levels; the "
            "population/coherence split needs a nondegenerate eigenbasis");
    }
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw NonFiniteBetaError("build_rate_matrix: beta must be finite and positive");
    }
    const int d = h.dim();
    RateMatrix out;
    out.energies = h.eigenvalues;
    out.beta = beta;
    out.w = RealMatrix::Zero(d, d);

    for (const DownwardRate& r : downward) {
        if (r.from < 0 || r.from >= d || r.to < 0 || r.to >= d || r.from == r.to) {
            throw DomainError("build_rate_matrix: channel refers to invalid level pair (" +
                              std::to_string(r.from) + ", " + std::to_string(r.to) + ")");
        }
        if (r.gamma < 0.0) {
            throw NegativeRateError("build_rate_matrix: negative rate " +
                                    std::to_string(r.gamma));
        }
        const double gap = h.eigenvalues[r.from] - h.eigenvalues[r.to];
        if (gap <= 0.0) {
            throw DomainError("build_rate_matrix: downward channel must go from the "
                              "higher level to the lower one");
        }
        out.w(r.to, r.from) += r.gamma;                        // downward jump
        out.w(r.from, r.to) += r.gamma * std::exp(-beta * gap); // detailed balance
    }
    for (int m = 0; m < d; ++m) {
        double esc = 0.0;
        for (int n = 0; n < d; ++n)
            if (n != m) esc += out.w(n, m);
        out.w(m, m) = -esc;
    }
    out.irreducible = graph_connected(out.w);
    return out;
}

RealVector pauli_derivative(const RateMatrix& rates, const RealVector& p) {
    if (p.size() != rates.energies.size()) {
        throw DimensionMismatchError("pauli_derivative: population size mismatch");
    }
    return rates.w * p;
}

double coherence_decay_rate(const RateMatrix& rates, int n, int m) {
    const int d = rates.dim();
    if (n < 0 || n >= d || m < 0 || m >= d) {
        throw DomainError("coherence_decay_rate: level index out of range");
    }
    // escape rates sit on the diagonal with a minus sign
    return 0.5 * (-rates.w(n, n) - rates.w(m, m));
}

ComplexMatrix master_derivative(const RateMatrix& rates,
                                const linalg::SpectralHamiltonian& h,
                                const ComplexMatrix& rho) {
    const int d = h.dim();
    const ComplexMatrix r = h.eigenvectors.adjoint() * rho * h.eigenvectors;
    ComplexMatrix dr(d, d);
    RealVector p(d);
    for (int n = 0; n < d; ++n) p[n] = r(n, n).real();
    const RealVector p_dot = rates.w * p;
    for (int n = 0; n < d; ++n) {
        for (int m = 0; m < d; ++m) {
            if (n == m) {
                dr(n, n) = p_dot[n];
            } else {
                const std::complex<double> damp(
                    -coherence_decay_rate(rates, n, m), -h.bohr_frequency(n, m));
                dr(n, m) = damp * r(n, m);
            }
        }
    }
    return h.eigenvectors * dr * h.eigenvectors.adjoint();
}

double entropy_flux(const RealVector& p_dot, const RealVector& energies, double beta) {
    if (p_dot.size() != energies.size()) {
        throw DimensionMismatchError("entropy_flux: size mismatch");
    }
    return -beta * energies.dot(p_dot);
}

ProductionRates production_rates(const qstate::DensityMatrix& rho,
                                 const linalg::SpectralHamiltonian& h,
                                 const RateMatrix& rates) {
    const int d = h.dim();
    if (rho.dim() != d || rates.dim() != d) {
        throw DimensionMismatchError("production_rates: dimension mismatch");
    }
    const ComplexMatrix rho_dot = master_derivative(rates, h, rho.matrix());
    const qstate::PopulationVector pv = qstate::populations(rho, h);
    RealVector p(d);
    for (int n = 0; n < d; ++n) p[n] = pv[n];
    const RealVector p_dot = rates.w * p;

    ProductionRates out;
    out.flux = entropy_flux(p_dot, rates.energies, rates.beta);

    // population part: sum over channels of (a - b) ln(a / b) with
    // a, b the two opposing probability currents
    bool diag_divergent = false;
    double diagonal = 0.0;
    for (int n = 0; n < d; ++n) {
        for (int m = n + 1; m < d; ++m) {
            if (rates.w(n, m) <= 0.0 && rates.w(m, n) <= 0.0) continue;
            const double a = rates.w(n, m) * p[m];
            const double b = rates.w(m, n) * p[n];
            if (a <= tol::support && b <= tol::support) continue; // no flow
            if (a <= tol::support || b <= tol::support) {
                diag_divergent = true;
                continue;
            }
            diagonal += (a - b) * std::log(a / b);
        }
    }
    out.diagonal = diag_divergent ? k_inf : diagonal;

    // -tr(rho_dot ln rho) via first-order perturbation in the rho eigenbasis
    bool rho_divergent = false;
    double tr_dot_ln_rho = 0.0;
    {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho.matrix());
        for (int j = 0; j < d; ++j) {
            const double lam = es.eigenvalues()[j];
            const double weight =
                (es.eigenvectors().col(j).adjoint() * rho_dot *
                 es.eigenvectors().col(j))(0, 0).real();
            if (lam > tol::support) {
                tr_dot_ln_rho += weight * std::log(lam);
            } else if (std::abs(weight) > k_weight_floor) {
                rho_divergent = true;
            }
        }
    }

    // tr(dephased rho_dot ln dephased rho) = sum_n p_dot_n ln p_n here
    bool pop_divergent = false;
    double tr_dot_ln_pop = 0.0;
    for (int n = 0; n < d; ++n) {
        if (p[n] > tol::support) {
            tr_dot_ln_pop += p_dot[n] * std::log(p[n]);
        } else if (std::abs(p_dot[n]) > k_weight_floor) {
            pop_divergent = true;
        }
    }

    out.coherent = (rho_divergent || pop_divergent) ? k_inf : tr_dot_ln_pop - tr_dot_ln_rho;
    out.total = out.diagonal + out.coherent;
    out.free_energy_rate =
        rho_divergent ? k_inf
                      : -rates.beta * (h.matrix * rho_dot).trace().real() - tr_dot_ln_rho;
    out.divergent = diag_divergent || rho_divergent || pop_divergent;
    return out;
}

PropagationResult propagate(const qstate::DensityMatrix& rho0,
                            const linalg::SpectralHamiltonian& h,
                            const RateMatrix& rates, double dt, double t_max) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw DomainError("propagate: dt must be finite and positive");
    }
    if (!(t_max >= 0.0) || !std::isfinite(t_max)) {
        throw DomainError("propagate: t_max must be finite and nonnegative");
    }
    if (rho0.dim() != h.dim() || rates.dim() != h.dim()) {
        throw DimensionMismatchError("propagate: dimension mismatch");
    }
    const int d = h.dim();
    const double temperature = 1.0 / rates.beta;

    // work in the eigenbasis; the derivative never leaves it
    auto deriv = [&](const ComplexMatrix& r) {
        ComplexMatrix dr(d, d);
        RealVector p(d);
        for (int n = 0; n < d; ++n) p[n] = r(n, n).real();
        const RealVector p_dot = rates.w * p;
        for (int n = 0; n < d; ++n)
            for (int m = 0; m < d; ++m)
                dr(n, m) = (n == m)
                               ? std::complex<double>(p_dot[n], 0.0)
                               : std::complex<double>(-coherence_decay_rate(rates, n, m),
                                                      -h.bohr_frequency(n, m)) *
                                     r(n, m);
        return dr;
    };

    auto record = [&](double t, const qstate::DensityMatrix& state) {
        DaviesPoint pt{t, state, 0.0, 0.0, 0.0, {}};
        pt.entropy = qstate::von_neumann_entropy(state);
        pt.coherence = qstate::relative_entropy_of_coherence(state, h);
        pt.free_energy = (h.matrix * state.matrix()).trace().real() -
                         temperature * pt.entropy;
        pt.rates = production_rates(state, h, rates);
        return pt;
    };

    PropagationResult result;
    result.points.push_back(record(0.0, rho0));

    const long long full_steps = static_cast<long long>(std::floor(t_max / dt + 1e-9));
    const double remainder = t_max - static_cast<double>(full_steps) * dt;

    ComplexMatrix r = h.eigenvectors.adjoint() * rho0.matrix() * h.eigenvectors;
    long long step = 0;
    auto advance = [&](double hstep, double t_next) {
        const ComplexMatrix k1 = deriv(r);
        const ComplexMatrix k2 = deriv(r + (0.5 * hstep) * k1);
        const ComplexMatrix k3 = deriv(r + (0.5 * hstep) * k2);
        const ComplexMatrix k4 = deriv(r + hstep * k3);
        r += (hstep / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        ComplexMatrix back = h.eigenvectors * r * h.eigenvectors.adjoint();
        try {
            qstate::DensityMatrix state = qstate::DensityMatrix::from_matrix(back);
            result.points.push_back(record(t_next, state));
        } catch (const InvalidStateError& e) {
            throw StepTooLargeError(
                "propagate: state left the physical set at t = " + std::to_string(t_next) +
                " (" + e.what() + "); reduce dt");
        }
    };

    for (step = 1; step <= full_steps; ++step) {
        advance(dt, static_cast<double>(step) * dt);
    }
    if (remainder > 1e-12) {
        advance(remainder, t_max);
    }
    return result;
}

} // namespace qept::davies
