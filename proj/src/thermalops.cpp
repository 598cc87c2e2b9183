// thermalops.cpp — construction, application and audit of finite thermal
// operations.

#include "qept/thermalops.hpp"

#include "qept/errors.hpp"
#include "qept/random.hpp"
#include "qept/tolerances.hpp"

#include <cmath>
#include <complex>
#include <string>
#include <utility>

namespace qept::thermalops {

namespace {

// Haar-distributed unitary: QR of a complex Ginibre matrix with the R
// diagonal's phases pulled into Q.
ComplexMatrix haar_unitary(int k, rng::Stream& stream) {
    ComplexMatrix g(k, k);
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) g(r, c) = stream.complex_normal();
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(k, k);
    for (int j = 0; j < k; ++j) {
        const std::complex<double> r_jj = qr.matrixQR()(j, j);
        const double mag = std::abs(r_jj);
        q.col(j) *= (mag > 1e-300) ? r_jj / mag : 1.0;
    }
    return q;
}

ThermalOperation assemble(const linalg::SpectralHamiltonian& h_s,
                          const linalg::SpectralHamiltonian& h_e, double beta,
                          ComplexMatrix u) {
    qstate::GibbsState env = qstate::gibbs_state(h_e, beta);
    return ThermalOperation{h_s,
                            h_e,
                            linalg::composite_spectral(h_s, h_e),
                            beta,
                            std::move(u),
                            env.rho,
                            qstate::gibbs_populations(h_e, beta)};
}

void require_energy_conserving(const ComplexMatrix& u,
                               const linalg::SpectralHamiltonian& h_total,
                               const char* who) {
    const double scale =
        std::max(1.0, linalg::max_abs(h_total.matrix) * linalg::max_abs(u));
    const double comm =
        linalg::max_abs(u * h_total.matrix - h_total.matrix * u);
    if (comm > tol::energy_commutator_rel * scale) {
        throw ValidationError(std::string(who) +
                              ": unitary does not commute with the total energy "
                              "(residual " +
                              std::to_string(comm) + ")");
    }
}

} // namespace

ThermalOperation random_energy_conserving_unitary(const linalg::SpectralHamiltonian& h_s,
                                                  const linalg::SpectralHamiltonian& h_e,
                                                  double beta, std::uint64_t seed) {
    const linalg::SpectralHamiltonian h_total = linalg::composite_spectral(h_s, h_e);
    const int d = h_total.dim();
    rng::Stream stream(seed);
    ComplexMatrix blocks = ComplexMatrix::Identity(d, d);
    for (const auto& group : h_total.degeneracy_groups) {
        const int k = static_cast<int>(group.size());
        if (k < 2) continue;
        const ComplexMatrix b = haar_unitary(k, stream);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) blocks(group[static_cast<std::size_t>(i)],
                                               group[static_cast<std::size_t>(j)]) = b(i, j);
    }
    ComplexMatrix u = h_total.eigenvectors * blocks * h_total.eigenvectors.adjoint();
    return assemble(h_s, h_e, beta, std::move(u));
}

ThermalOperation from_unitary(const linalg::SpectralHamiltonian& h_s,
                              const linalg::SpectralHamiltonian& h_e, double beta,
                              const ComplexMatrix& u) {
    const int d = h_s.dim() * h_e.dim();
    if (u.rows() != d || u.cols() != d) {
        throw ValidationError("from_unitary: operator is " + std::to_string(u.rows()) +
                              "x" + std::to_string(u.cols()) + ", expected " +
                              std::to_string(d));
    }
    const double unit_residual =
        linalg::max_abs(u.adjoint() * u - ComplexMatrix::Identity(d, d));
    if (unit_residual > tol::unitarity) {
        throw ValidationError("from_unitary: operator is not unitary (residual " +
                              std::to_string(unit_residual) + ")");
    }
    ThermalOperation op = assemble(h_s, h_e, beta, u);
    require_energy_conserving(u, op.h_total, "from_unitary");
    return op;
}

ThermalOperation from_potential(const linalg::SpectralHamiltonian& h_s,
                                const linalg::SpectralHamiltonian& h_e, double beta,
                                const ComplexMatrix& v, double t) {
    const linalg::SpectralHamiltonian h_total = linalg::composite_spectral(h_s, h_e);
    const int d = h_total.dim();
    if (v.rows() != d || v.cols() != d) {
        throw DimensionMismatchError("from_potential: potential is " +
                                     std::to_string(v.rows()) + "x" +
                                     std::to_string(v.cols()) + ", expected " +
                                     std::to_string(d));
    }
    linalg::require_hermitian(v, tol::hermitian_rel, "from_potential");
    const double scale =
        std::max(1.0, linalg::max_abs(h_total.matrix) * linalg::max_abs(v));
    const double comm = linalg::max_abs(v * h_total.matrix - h_total.matrix * v);
    if (comm > tol::energy_commutator_rel * scale) {
        throw NonCommutingPotentialError(
            "from_potential: interaction does not commute with the total energy "
            "(residual " +
            std::to_string(comm) + ")");
    }
    return assemble(h_s, h_e, beta, linalg::unitary_from_generator(v, t));
}

ComplexMatrix exchange_potential(const linalg::SpectralHamiltonian& h_total,
                                 double theta) {
    const int d = h_total.dim();
    ComplexMatrix v = ComplexMatrix::Zero(d, d);
    for (const auto& group : h_total.degeneracy_groups) {
        const int k = static_cast<int>(group.size());
        for (int i = 0; i < k; ++i) {
            for (int j = i + 1; j < k; ++j) {
                const auto& u_i = h_total.eigenvectors.col(group[static_cast<std::size_t>(i)]);
                const auto& u_j = h_total.eigenvectors.col(group[static_cast<std::size_t>(j)]);
                v += theta * (u_i * u_j.adjoint() + u_j * u_i.adjoint());
            }
        }
    }
    return v;
}

ThermalOperation partial_swap(const linalg::SpectralHamiltonian& h_s,
                              const linalg::SpectralHamiltonian& h_e, double beta,
                              double theta) {
    const linalg::SpectralHamiltonian h_total = linalg::composite_spectral(h_s, h_e);
    return from_potential(h_s, h_e, beta, exchange_potential(h_total, theta), 1.0);
}

ApplyResult apply(const ThermalOperation& op, const qstate::DensityMatrix& rho_s) {
    if (rho_s.dim() != op.d_s()) {
        throw DimensionMismatchError("apply: system state dimension mismatch");
    }
    const ComplexMatrix joint_in =
        linalg::kron_product(rho_s.matrix(), op.rho_e_eq.matrix());
    const ComplexMatrix joint_out = op.u * joint_in * op.u.adjoint();
    qstate::DensityMatrix rho_se = qstate::DensityMatrix::from_matrix(joint_out);
    qstate::DensityMatrix out_s = qstate::DensityMatrix::from_matrix(
        linalg::partial_trace(rho_se.matrix(), op.d_s(), op.d_e(), linalg::Keep::system));
    qstate::DensityMatrix out_e = qstate::DensityMatrix::from_matrix(linalg::partial_trace(
        rho_se.matrix(), op.d_s(), op.d_e(), linalg::Keep::environment));
    return ApplyResult{std::move(rho_se), std::move(out_s), std::move(out_e)};
}

ChannelSummary channel_summary(const ThermalOperation& op) {
    const int d_s = op.d_s();
    const int d_e = op.d_e();
    // joint unitary in the product energy eigenbasis
    const ComplexMatrix basis =
        linalg::kron_product(op.h_s.eigenvectors, op.h_e.eigenvectors);
    const ComplexMatrix u_eig = basis.adjoint() * op.u * basis;

    ChannelSummary out;
    out.kraus.reserve(static_cast<std::size_t>(d_e * d_e));
    for (int mu = 0; mu < d_e; ++mu) {
        const double root_q = std::sqrt(op.q[mu]);
        for (int nu = 0; nu < d_e; ++nu) {
            ComplexMatrix m(d_s, d_s);
            for (int row = 0; row < d_s; ++row)
                for (int col = 0; col < d_s; ++col)
                    m(row, col) = root_q * u_eig(row * d_e + nu, col * d_e + mu);
            out.kraus.push_back(std::move(m));
        }
    }

    out.q_kernel = RealMatrix::Zero(d_s, d_s);
    out.alpha = ComplexMatrix::Zero(d_s, d_s);
    ComplexMatrix completeness = ComplexMatrix::Zero(d_s, d_s);
    for (const ComplexMatrix& m : out.kraus) {
        for (int row = 0; row < d_s; ++row)
            for (int col = 0; col < d_s; ++col)
                out.q_kernel(row, col) += std::norm(m(row, col));
        for (int n = 0; n < d_s; ++n)
            for (int mm = 0; mm < d_s; ++mm)
                out.alpha(n, mm) += m(n, n) * std::conj(m(mm, mm));
        completeness += m.adjoint() * m;
    }
    out.completeness_residual =
        linalg::max_abs(completeness - ComplexMatrix::Identity(d_s, d_s));
    // the scalar multiplier picture needs every system coherence to evolve
    // alone, i.e. all Bohr frequencies distinct
    out.alpha_valid = op.h_s.bohr_nondegenerate();
    return out;
}

ProductionTotals entropy_production_totals(const ThermalOperation& op,
                                           const qstate::DensityMatrix& rho_s) {
    const qstate::GibbsState th = qstate::gibbs_state(op.h_s, op.beta);
    const qstate::PopulationVector p_eq = qstate::gibbs_populations(op.h_s, op.beta);
    const qstate::DensityMatrix after = apply(op, rho_s).rho_s;

    ProductionTotals t;
    t.sigma = qstate::quantum_relative_entropy(rho_s, th.rho) -
              qstate::quantum_relative_entropy(after, th.rho);
    t.sigma_d = qstate::kl_divergence(qstate::populations(rho_s, op.h_s), p_eq) -
                qstate::kl_divergence(qstate::populations(after, op.h_s), p_eq);
    t.xi = qstate::relative_entropy_of_coherence(rho_s, op.h_s) -
           qstate::relative_entropy_of_coherence(after, op.h_s);
    return t;
}

ConservationReport conservation_report(const ThermalOperation& op,
                                       const qstate::DensityMatrix& rho_s) {
    const int d_s = op.d_s();
    const int d_e = op.d_e();
    const ApplyResult res = apply(op, rho_s);
    const qstate::DensityMatrix joint_in = qstate::DensityMatrix::from_matrix(
        linalg::kron_product(rho_s.matrix(), op.rho_e_eq.matrix()));

    ConservationReport r;
    r.totals = entropy_production_totals(op, rho_s);
    r.s_rel_env = qstate::quantum_relative_entropy(res.rho_e, op.rho_e_eq);
    r.mutual_info = qstate::mutual_information(res.rho_se, d_s, d_e);

    r.coherence_initial = qstate::relative_entropy_of_coherence(rho_s, op.h_s);
    r.coherence_joint_final =
        qstate::relative_entropy_of_coherence(res.rho_se, op.h_total);
    r.coherence_s_final = qstate::relative_entropy_of_coherence(res.rho_s, op.h_s);
    r.coherence_e_final = qstate::relative_entropy_of_coherence(res.rho_e, op.h_e);
    r.correlated_coherence_final =
        qstate::correlated_coherence(res.rho_se, op.h_s, op.h_e);

    const double s_joint_in = qstate::von_neumann_entropy(joint_in);
    const double s_joint_out = qstate::von_neumann_entropy(res.rho_se);
    const double s_deph_in = qstate::von_neumann_entropy(
        qstate::DensityMatrix::from_matrix(linalg::dephase(joint_in.matrix(), op.h_total)));
    const double s_deph_out = qstate::von_neumann_entropy(qstate::DensityMatrix::from_matrix(
        linalg::dephase(res.rho_se.matrix(), op.h_total)));

    r.residual_production_split = r.totals.sigma - r.s_rel_env - r.mutual_info;
    r.residual_dephased_entropy = s_deph_out - s_deph_in;
    r.residual_global_coherence = r.coherence_joint_final - r.coherence_initial;
    r.residual_coherence_split =
        r.totals.xi - (r.coherence_joint_final - r.coherence_s_final);
    r.residual_coherence_transfer =
        r.totals.xi - r.coherence_e_final - r.correlated_coherence_final;
    r.residual_joint_entropy = s_joint_out - s_joint_in;

    r.blocks_total = static_cast<int>(op.h_total.degeneracy_groups.size());
    for (const auto& g : op.h_total.degeneracy_groups)
        if (g.size() >= 2) ++r.blocks_nontrivial;
    return r;
}

std::vector<CollisionPoint> collision_sequence(const ThermalOperation& op,
                                               const qstate::DensityMatrix& rho0, int n) {
    if (n < 0) throw DomainError("collision_sequence: negative collision count");
    const qstate::GibbsState th = qstate::gibbs_state(op.h_s, op.beta);

    std::vector<CollisionPoint> out;
    out.reserve(static_cast<std::size_t>(n) + 1);
    out.push_back(CollisionPoint{0, rho0, qstate::trace_distance(rho0, th.rho),
                                 {}, 0.0, 0.0, 0.0});

    qstate::DensityMatrix current = rho0;
    double cumulative = 0.0;
    for (int k = 1; k <= n; ++k) {
        const ProductionTotals step = entropy_production_totals(op, current);
        const ApplyResult res = apply(op, current);
        cumulative += step.sigma;
        out.push_back(CollisionPoint{
            k, res.rho_s, qstate::trace_distance(res.rho_s, th.rho), step,
            qstate::quantum_relative_entropy(res.rho_e, op.rho_e_eq),
            qstate::mutual_information(res.rho_se, op.d_s(), op.d_e()), cumulative});
        current = res.rho_s;
    }
    return out;
}

} // namespace qept::thermalops
