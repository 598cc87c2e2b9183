// trajectories.cpp — exact and sampled trajectory ensembles of a thermal
// operation.

#include "qept/trajectories.hpp"

#include "qept/errors.hpp"
#include "qept/random.hpp"
#include "qept/tolerances.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace qept::trajectories {

namespace {

// Everything both modes need: measurement eigensystems, the transition
// kernel between them, energy overlaps and the off-support backward mass.
struct Workspace {
    Eigensystem in;
    Eigensystem out;
    RealMatrix kernel;       // row (beta * d_e + nu), column (alpha * d_e + mu)
    RealMatrix overlaps_in;  // (n, alpha) = |<n|psi_alpha>|^2
    RealMatrix overlaps_out; // (m, beta)
    RealVector p_energy;     // p_n
    RealVector pp_energy;    // p'_m
    double lambda_b = 0.0;   // backward mass on zero-probability alpha
};

RealMatrix squared_magnitudes(const ComplexMatrix& m) {
    RealMatrix out(m.rows(), m.cols());
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) out(r, c) = std::norm(m(r, c));
    return out;
}

Workspace build_workspace(const thermalops::ThermalOperation& op,
                          const qstate::DensityMatrix& rho_s) {
    if (rho_s.dim() != op.d_s()) {
        throw DimensionMismatchError("trajectories: system state dimension mismatch");
    }
    const int d_s = op.d_s();
    const int d_e = op.d_e();

    Workspace ws;
    ws.in = state_eigensystem(rho_s);
    const thermalops::ApplyResult res = thermalops::apply(op, rho_s);
    ws.out = state_eigensystem(res.rho_s);

    const ComplexMatrix b_in = linalg::kron_product(ws.in.vectors, op.h_e.eigenvectors);
    const ComplexMatrix b_out = linalg::kron_product(ws.out.vectors, op.h_e.eigenvectors);
    ws.kernel = squared_magnitudes(b_out.adjoint() * op.u * b_in);

    ws.overlaps_in =
        squared_magnitudes(op.h_s.eigenvectors.adjoint() * ws.in.vectors);
    ws.overlaps_out =
        squared_magnitudes(op.h_s.eigenvectors.adjoint() * ws.out.vectors);

    const auto p = qstate::populations(rho_s, op.h_s);
    const auto pp = qstate::populations(res.rho_s, op.h_s);
    ws.p_energy = RealVector(d_s);
    ws.pp_energy = RealVector(d_s);
    for (int i = 0; i < d_s; ++i) {
        ws.p_energy[i] = p[i];
        ws.pp_energy[i] = pp[i];
    }

    for (int alpha = 0; alpha < d_s; ++alpha) {
        if (ws.in.probabilities[alpha] != 0.0) continue;
        for (int mu = 0; mu < d_e; ++mu) {
            const int col = alpha * d_e + mu;
            for (int beta = 0; beta < d_s; ++beta) {
                const double pp_b = ws.out.probabilities[beta];
                if (pp_b == 0.0) continue;
                for (int nu = 0; nu < d_e; ++nu) {
                    ws.lambda_b += pp_b * op.q[nu] * ws.kernel(beta * d_e + nu, col);
                }
            }
        }
    }
    return ws;
}

void require_positive(double value, const char* label) {
    if (!(value > 0.0)) {
        throw ZeroProbabilityOnSupportError(
            std::string("trajectories: ") + label +
            " vanished on a trajectory with positive forward probability");
    }
}

// Inverse-CDF draw over the first `count` entries of a weight accessor
// whose weights sum to ~1; falls back to the last positive entry when
// rounding pushes the target past the accumulated total.
template <typename WeightAt>
int draw_index(double r, int count, WeightAt weight_at) {
    double acc = 0.0;
    int last_positive = -1;
    for (int i = 0; i < count; ++i) {
        const double w = weight_at(i);
        if (w <= 0.0) continue;
        last_positive = i;
        acc += w;
        if (r < acc) return i;
    }
    if (last_positive < 0) {
        throw ZeroProbabilityOnSupportError(
            "trajectories: attempted to draw from an all-zero distribution");
    }
    return last_positive;
}

} // namespace

Eigensystem state_eigensystem(const qstate::DensityMatrix& rho) {
    const linalg::SpectralHamiltonian sh =
        linalg::hermitian_eigendecomposition(rho.matrix());
    RealVector p = sh.eigenvalues;
    double total = 0.0;
    for (int i = 0; i < p.size(); ++i) {
        if (p[i] <= tol::support) p[i] = 0.0;
        total += p[i];
    }
    if (!(total > 0.0)) {
        throw InvalidStateError("state_eigensystem: state has no support");
    }
    p /= total;
    return Eigensystem{std::move(p), sh.eigenvectors};
}

TrajectoryEnsemble enumerate_paths(const thermalops::ThermalOperation& op,
                                   const qstate::DensityMatrix& rho_s) {
    const int d_s = op.d_s();
    const int d_e = op.d_e();
    const double grid = std::pow(static_cast<double>(d_s), 4.0) *
                        std::pow(static_cast<double>(d_e), 2.0);
    if (grid > 1e6) {
        throw EnumerationTooLargeError(
            "enumerate_paths: " + std::to_string(grid) +
            " trajectories exceed the exact-enumeration budget; sample instead");
    }

    const Workspace ws = build_workspace(op, rho_s);
    TrajectoryEnsemble out;
    out.summary.exact = true;
    out.summary.backward_mass_off_support = ws.lambda_b;

    double sum_sigma = 0.0, sum_sigma_d = 0.0, sum_xi = 0.0;
    double sum_backward = 0.0, sum_exp_sigma_d = 0.0, dropped = 0.0;

    for (int alpha = 0; alpha < d_s; ++alpha) {
        const double p_a = ws.in.probabilities[alpha];
        if (p_a == 0.0) continue;
        for (int mu = 0; mu < d_e; ++mu) {
            const double q_mu = op.q[mu];
            const int col = alpha * d_e + mu;
            const double fwd_weight = p_a * q_mu;
            for (int beta = 0; beta < d_s; ++beta) {
                const double pp_b = ws.out.probabilities[beta];
                if (pp_b == 0.0) {
                    // numerical dust: the true forward mass here is below the
                    // support tolerance, so it is excluded rather than given
                    // an infinite entropy change
                    for (int nu = 0; nu < d_e; ++nu)
                        dropped += fwd_weight * ws.kernel(beta * d_e + nu, col);
                    continue;
                }
                for (int nu = 0; nu < d_e; ++nu) {
                    const double k = ws.kernel(beta * d_e + nu, col);
                    if (k <= 0.0) continue;
                    const double q_nu = op.q[nu];
                    const double sigma =
                        std::log(fwd_weight) - std::log(pp_b * q_nu);
                    for (int n = 0; n < d_s; ++n) {
                        const double o_n = ws.overlaps_in(n, alpha);
                        if (o_n <= 0.0) continue;
                        for (int m = 0; m < d_s; ++m) {
                            const double o_m = ws.overlaps_out(m, beta);
                            if (o_m <= 0.0) continue;
                            const double p_f = fwd_weight * k * o_n * o_m;
                            if (p_f <= 0.0) continue;
                            const double p_b = pp_b * q_nu * k * o_n * o_m;
                            const double p_n = ws.p_energy[n];
                            const double pp_m = ws.pp_energy[m];
                            require_positive(p_n, "initial energy population");
                            require_positive(pp_m, "final energy population");
                            const double sigma_d =
                                std::log(p_n * q_mu) - std::log(pp_m * q_nu);
                            const double xi =
                                std::log(p_a * pp_m) - std::log(pp_b * p_n);
                            sum_sigma += p_f * sigma;
                            sum_sigma_d += p_f * sigma_d;
                            sum_xi += p_f * xi;
                            sum_backward += p_b;
                            sum_exp_sigma_d += p_f * (pp_m * q_nu) / (p_n * q_mu);
                            if (p_f > tol::path) {
                                out.records.push_back(TrajectoryRecord{
                                    alpha, mu, n, beta, nu, m, p_f, p_b, sigma,
                                    sigma_d, xi});
                            } else {
                                dropped += p_f;
                            }
                        }
                    }
                }
            }
        }
    }

    out.summary.n_records = static_cast<long long>(out.records.size());
    out.summary.mean_sigma = sum_sigma;
    out.summary.mean_sigma_d = sum_sigma_d;
    out.summary.mean_xi = sum_xi;
    out.summary.exp_minus_sigma = sum_backward + ws.lambda_b;
    out.summary.exp_minus_sigma_d = sum_exp_sigma_d;
    out.summary.dropped_forward_mass = dropped;
    return out;
}

TrajectoryEnsemble sample_paths(const thermalops::ThermalOperation& op,
                                const qstate::DensityMatrix& rho_s, long long n_samples,
                                std::uint64_t seed) {
    if (n_samples <= 0) {
        throw DomainError("sample_paths: sample count must be positive");
    }
    const int d_s = op.d_s();
    const int d_e = op.d_e();
    const int d = d_s * d_e;
    const Workspace ws = build_workspace(op, rho_s);
    rng::Stream stream(seed);

    TrajectoryEnsemble out;
    out.summary.exact = false;
    out.summary.backward_mass_off_support = ws.lambda_b;
    out.records.reserve(static_cast<std::size_t>(n_samples));

    double s1 = 0.0, s2 = 0.0;   // sigma sums
    double d1 = 0.0, d2 = 0.0;   // sigma_d sums
    double x1 = 0.0, x2 = 0.0;   // xi sums
    double w1 = 0.0, w2 = 0.0;   // e^{-sigma} sums
    double v1 = 0.0, v2 = 0.0;   // e^{-sigma_d} sums

    for (long long i = 0; i < n_samples; ++i) {
        const int alpha =
            draw_index(stream.uniform(), d_s, [&](int j) { return ws.in.probabilities[j]; });
        const int mu = draw_index(stream.uniform(), d_e, [&](int j) { return op.q[j]; });
        const int col = alpha * d_e + mu;
        const int row = draw_index(stream.uniform(), d,
                                   [&](int j) { return ws.kernel(j, col); });
        const int beta = row / d_e;
        const int nu = row % d_e;
        const int n = draw_index(stream.uniform(), d_s,
                                 [&](int j) { return ws.overlaps_in(j, alpha); });
        const int m = draw_index(stream.uniform(), d_s,
                                 [&](int j) { return ws.overlaps_out(j, beta); });

        const double p_a = ws.in.probabilities[alpha];
        const double pp_b = ws.out.probabilities[beta];
        require_positive(pp_b, "final eigenstate probability");
        const double q_mu = op.q[mu];
        const double q_nu = op.q[nu];
        const double p_n = ws.p_energy[n];
        const double pp_m = ws.pp_energy[m];
        require_positive(p_n, "initial energy population");
        require_positive(pp_m, "final energy population");

        const double sigma = std::log(p_a * q_mu) - std::log(pp_b * q_nu);
        const double sigma_d = std::log(p_n * q_mu) - std::log(pp_m * q_nu);
        const double xi = std::log(p_a * pp_m) - std::log(pp_b * p_n);
        const double w = (pp_b * q_nu) / (p_a * q_mu);
        const double v = (pp_m * q_nu) / (p_n * q_mu);

        s1 += sigma;
        s2 += sigma * sigma;
        d1 += sigma_d;
        d2 += sigma_d * sigma_d;
        x1 += xi;
        x2 += xi * xi;
        w1 += w;
        w2 += w * w;
        v1 += v;
        v2 += v * v;

        const double k = ws.kernel(row, col);
        const double o_n = ws.overlaps_in(n, alpha);
        const double o_m = ws.overlaps_out(m, beta);
        out.records.push_back(TrajectoryRecord{alpha, mu, n, beta, nu, m,
                                               p_a * q_mu * k * o_n * o_m,
                                               pp_b * q_nu * k * o_n * o_m, sigma,
                                               sigma_d, xi});
    }

    const double nn = static_cast<double>(n_samples);
    auto finish = [&](double sum, double sumsq, double& mean, double& se) {
        mean = sum / nn;
        const double var =
            (n_samples > 1) ? std::max(0.0, (sumsq - nn * mean * mean) / (nn - 1.0))
                            : 0.0;
        se = std::sqrt(var / nn);
    };
    auto& sm = out.summary;
    finish(s1, s2, sm.mean_sigma, sm.se_sigma);
    finish(d1, d2, sm.mean_sigma_d, sm.se_sigma_d);
    finish(x1, x2, sm.mean_xi, sm.se_xi);
    finish(w1, w2, sm.exp_minus_sigma, sm.se_exp_minus_sigma);
    finish(v1, v2, sm.exp_minus_sigma_d, sm.se_exp_minus_sigma_d);
    sm.exp_minus_sigma += ws.lambda_b; // exact off-support correction
    sm.n_records = n_samples;
    return out;
}

} // namespace qept::trajectories
