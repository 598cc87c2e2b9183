#include "doctest.h"

#include "qept/errors.hpp"
#include "qept/qstate.hpp"
#include "test_helpers.hpp"

#include <cmath>
#include <limits>

using namespace qept;
using qstate::DensityMatrix;
using qstate::PopulationVector;
using test_util::close;
using test_util::matrix_gap;

namespace {

// Frozen reference values (independent closed forms).
constexpr double kLn2 = 0.6931471805599453;           // ln 2
constexpr double kEntropyTwoThirds = 0.6365141682948128; // -2/3 ln 2/3 - 1/3 ln 1/3
constexpr double kRelEntPlusGibbs = 0.7520386983881371;  // (1/2) ln(9/2)
constexpr double kKlHalfVsGibbs = 0.05889151782819173;   // (1/2) ln(9/8)
constexpr double kLn32 = 0.4054651081081645;             // ln(3/2)

linalg::SpectralHamiltonian qubit_h() {
    ComplexMatrix h = ComplexMatrix::Zero(2, 2);
    h(1, 1) = 1.0;
    return linalg::hermitian_eigendecomposition(h);
}

DensityMatrix plus_state() {
    ComplexMatrix m(2, 2);
    m << 0.5, 0.5, 0.5, 0.5;
    return DensityMatrix::from_matrix(m);
}

DensityMatrix diag_state(double p0, double p1) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = p0;
    m(1, 1) = p1;
    return DensityMatrix::from_matrix(m);
}

} // namespace

TEST_CASE("density matrix validation and small-eigenvalue repair") {
    CHECK_NOTHROW(DensityMatrix::from_matrix(plus_state().matrix()));

    ComplexMatrix off_trace = 1.01 * ComplexMatrix::Identity(2, 2) * 0.5;
    CHECK_THROWS_AS(DensityMatrix::from_matrix(off_trace), InvalidStateError);

    ComplexMatrix nonpsd(2, 2);
    nonpsd << 1.0 + 1e-5, 0.0, 0.0, -1e-5;
    CHECK_THROWS_AS(DensityMatrix::from_matrix(nonpsd), InvalidStateError);

    ComplexMatrix small(2, 2);
    small << 1.0 + 5e-11, 0.0, 0.0, -5e-11;
    DensityMatrix repaired = DensityMatrix::from_matrix(small);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(repaired.matrix());
    CHECK(es.eigenvalues().minCoeff() >= 0.0);
    CHECK(close(repaired.matrix().trace().real(), 1.0, 1e-14));
}

TEST_CASE("populations are reported in the operator eigenbasis") {
    auto h = qubit_h();
    auto p = qstate::populations(plus_state(), h);
    CHECK(close(p[0], 0.5, 1e-14));
    CHECK(close(p[1], 0.5, 1e-14));

    // rotated operator: |+> is its ground state
    auto hx = linalg::hermitian_eigendecomposition([] {
        ComplexMatrix m(2, 2);
        m << 0, -1, -1, 0;
        return m;
    }());
    auto px = qstate::populations(plus_state(), hx);
    CHECK(close(px[0], 1.0, 1e-14));
    CHECK(close(px[1], 0.0, 1e-14));
}

TEST_CASE("thermal state at beta = ln 2 on the unit-gap qubit") {
    auto h = qubit_h();
    auto gs = qstate::gibbs_state(h, kLn2);
    CHECK(close(gs.rho.matrix()(0, 0).real(), 2.0 / 3.0, 1e-14));
    CHECK(close(gs.rho.matrix()(1, 1).real(), 1.0 / 3.0, 1e-14));
    CHECK(std::abs(gs.rho.matrix()(0, 1)) < 1e-15);
    CHECK(close(gs.log_partition, kLn32, 1e-14));

    auto p = qstate::gibbs_populations(h, kLn2);
    CHECK(close(p[0], 2.0 / 3.0, 1e-15));
    CHECK(close(p[1], 1.0 / 3.0, 1e-15));

    CHECK_THROWS_AS(qstate::gibbs_state(h, -1.0), NonFiniteBetaError);
    CHECK_THROWS_AS(qstate::gibbs_state(h, 0.0), NonFiniteBetaError);
}

TEST_CASE("thermal state is stable at extreme beta and shifted spectra") {
    auto h = qubit_h();
    auto gs = qstate::gibbs_state(h, 1000.0);
    CHECK(close(gs.rho.matrix()(0, 0).real(), 1.0, 1e-14));
    CHECK(std::isfinite(gs.log_partition));
    CHECK(close(gs.log_partition, 0.0, 1e-14));

    ComplexMatrix hs = ComplexMatrix::Zero(2, 2);
    hs(0, 0) = 1000.0;
    hs(1, 1) = 1001.0;
    auto shifted = qstate::gibbs_state(linalg::hermitian_eigendecomposition(hs), 1.0);
    CHECK(close(shifted.log_partition, std::log1p(std::exp(-1.0)) - 1000.0, 1e-10));
    CHECK(close(shifted.rho.matrix()(0, 0).real(), 1.0 / (1.0 + std::exp(-1.0)), 1e-14));
}

TEST_CASE("entropy oracles: pure, thermal, maximally mixed") {
    CHECK(close(qstate::von_neumann_entropy(plus_state()), 0.0, 1e-12));
    CHECK(close(qstate::von_neumann_entropy(diag_state(2.0 / 3.0, 1.0 / 3.0)),
                kEntropyTwoThirds, 1e-14));
    CHECK(close(qstate::von_neumann_entropy(diag_state(0.5, 0.5)), kLn2, 1e-14));

    auto p = PopulationVector::from_values({0.5, 0.5});
    CHECK(close(qstate::shannon_entropy(p), kLn2, 1e-15));
    CHECK(close(qstate::shannon_entropy(PopulationVector::from_values({1.0, 0.0})),
                0.0, 0.0));
}

TEST_CASE("quantum relative entropy oracles and support convention") {
    auto gibbs = diag_state(2.0 / 3.0, 1.0 / 3.0);
    CHECK(close(qstate::quantum_relative_entropy(plus_state(), gibbs),
                kRelEntPlusGibbs, 1e-13));
    CHECK(close(qstate::quantum_relative_entropy(gibbs, gibbs), 0.0, 1e-13));

    // weight outside the support
    auto mixed = diag_state(0.5, 0.5);
    auto pure0 = diag_state(1.0, 0.0);
    CHECK(qstate::quantum_relative_entropy(mixed, pure0) ==
          std::numeric_limits<double>::infinity());
    // the other order is finite: S(pure||mixed) = ln 2
    CHECK(close(qstate::quantum_relative_entropy(pure0, mixed), kLn2, 1e-13));

    // Klein inequality on random pairs
    for (std::uint64_t s = 0; s < 5; ++s) {
        auto a = test_util::random_density(3, 100 + s);
        auto b = test_util::random_density(3, 200 + s);
        CHECK(qstate::quantum_relative_entropy(a, b) >= -1e-12);
    }
}

TEST_CASE("classical divergence oracle and support convention") {
    auto half = PopulationVector::from_values({0.5, 0.5});
    auto gibbs = PopulationVector::from_values({2.0 / 3.0, 1.0 / 3.0});
    CHECK(close(qstate::kl_divergence(half, gibbs), kKlHalfVsGibbs, 1e-15));
    CHECK(close(qstate::kl_divergence(gibbs, gibbs), 0.0, 0.0));
    CHECK(qstate::kl_divergence(half, PopulationVector::from_values({1.0, 0.0})) ==
          std::numeric_limits<double>::infinity());
}

TEST_CASE("coherence measure: ln 2 for |+>, zero for incoherent states") {
    auto h = qubit_h();
    CHECK(close(qstate::relative_entropy_of_coherence(plus_state(), h), kLn2, 1e-12));
    CHECK(close(qstate::relative_entropy_of_coherence(diag_state(0.7, 0.3), h), 0.0, 1e-13));

    // fully degenerate operator: every state is block-incoherent
    auto flat = linalg::hermitian_eigendecomposition(ComplexMatrix::Identity(2, 2));
    CHECK(close(qstate::relative_entropy_of_coherence(plus_state(), flat), 0.0, 1e-13));
}

TEST_CASE("free-energy split: oracle for |+> and additivity on random states") {
    auto h = qubit_h();
    auto split = qstate::free_energy_decomposition(plus_state(), h, kLn2);
    CHECK(close(split.total - split.equilibrium, 1.0849625007211562, 1e-12));
    CHECK(close(split.population_part, kKlHalfVsGibbs / kLn2, 1e-12));
    CHECK(close(split.coherence_part, 1.0, 1e-12));
    CHECK(close(split.total, split.equilibrium + split.population_part + split.coherence_part,
                1e-12));

    // equilibrium state: both excess parts vanish
    auto eq = qstate::gibbs_state(h, kLn2);
    auto se = qstate::free_energy_decomposition(eq.rho, h, kLn2);
    CHECK(close(se.population_part, 0.0, 1e-12));
    CHECK(close(se.coherence_part, 0.0, 1e-12));
    CHECK(close(se.total, se.equilibrium, 1e-12));

    // nonequilibrium free energy equals T * relative entropy to the thermal state
    for (std::uint64_t s = 0; s < 5; ++s) {
        auto rho = test_util::random_density(2, 300 + s);
        auto sp = qstate::free_energy_decomposition(rho, h, kLn2);
        const double lhs = kLn2 * (sp.total - sp.equilibrium);
        CHECK(close(lhs, qstate::quantum_relative_entropy(rho, eq.rho), 1e-10));
        CHECK(close(sp.total, sp.equilibrium + sp.population_part + sp.coherence_part,
                    1e-10));
    }
}

TEST_CASE("mutual information: zero on products, 2 ln 2 on Bell pairs") {
    auto rs = test_util::random_density(2, 41);
    auto re = test_util::random_density(3, 42);
    auto joint = DensityMatrix::from_matrix(linalg::kron_product(rs.matrix(), re.matrix()));
    CHECK(close(qstate::mutual_information(joint, 2, 3), 0.0, 1e-12));

    ComplexVector bell = ComplexVector::Zero(4);
    bell[0] = bell[3] = 1.0 / std::sqrt(2.0);
    auto rho = DensityMatrix::from_matrix(bell * bell.adjoint());
    CHECK(close(qstate::mutual_information(rho, 2, 2), 2.0 * kLn2, 1e-12));
}

TEST_CASE("correlated coherence of a Bell pair is ln 2") {
    auto h = qubit_h();
    ComplexVector bell = ComplexVector::Zero(4);
    bell[0] = bell[3] = 1.0 / std::sqrt(2.0);
    auto rho = DensityMatrix::from_matrix(bell * bell.adjoint());
    CHECK(close(qstate::correlated_coherence(rho, h, h), kLn2, 1e-12));

    // incoherent product: no coherence anywhere
    auto a = diag_state(0.7, 0.3);
    auto b = diag_state(0.4, 0.6);
    auto prod = DensityMatrix::from_matrix(linalg::kron_product(a.matrix(), b.matrix()));
    CHECK(close(qstate::correlated_coherence(prod, h, h), 0.0, 1e-12));
}

TEST_CASE("trace distance endpoints") {
    auto p0 = diag_state(1.0, 0.0);
    auto p1 = diag_state(0.0, 1.0);
    CHECK(close(qstate::trace_distance(p0, p1), 1.0, 1e-14));
    CHECK(close(qstate::trace_distance(p0, p0), 0.0, 0.0));
    CHECK(close(qstate::trace_distance(p0, diag_state(0.5, 0.5)), 0.5, 1e-14));
}
