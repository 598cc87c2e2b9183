#include "doctest.h"

#include "qept/davies.hpp"
#include "qept/errors.hpp"
#include "qept/qstate.hpp"
#include "test_helpers.hpp"

#include <cmath>
#include <limits>

using namespace qept;
using test_util::close;

namespace {

constexpr double kLn2 = 0.6931471805599453;

// Unit-gap qubit with unit downward rate at beta = ln 2: the worked
// benchmark. Upward rate 1/2, relaxation rate 3/2, coherence decay 3/4,
// stationary populations (2/3, 1/3).
linalg::SpectralHamiltonian bench_h() {
    ComplexMatrix h = ComplexMatrix::Zero(2, 2);
    h(1, 1) = 1.0;
    return linalg::hermitian_eigendecomposition(h);
}

davies::RateMatrix bench_rates() {
    return davies::build_rate_matrix(bench_h(), kLn2, {{1, 0, 1.0}});
}

qstate::DensityMatrix plus_state() {
    ComplexMatrix m(2, 2);
    m << 0.5, 0.5, 0.5, 0.5;
    return qstate::DensityMatrix::from_matrix(m);
}

} // namespace

TEST_CASE("rate matrix satisfies detailed balance and conserves probability") {
    auto rm = bench_rates();
    CHECK(close(rm.w(0, 1), 1.0, 0.0));   // downward
    CHECK(close(rm.w(1, 0), 0.5, 1e-15)); // upward, e^{-beta}
    CHECK(close(rm.w(0, 0), -0.5, 1e-15));
    CHECK(close(rm.w(1, 1), -1.0, 0.0));
    CHECK(rm.irreducible);
    CHECK(close(rm.w.colwise().sum().cwiseAbs().maxCoeff(), 0.0, 1e-15));

    // thermal populations are stationary
    RealVector peq(2);
    peq << 2.0 / 3.0, 1.0 / 3.0;
    CHECK((rm.w * peq).cwiseAbs().maxCoeff() < 1e-15);

    // detailed balance entry by entry for a three-level ladder
    ComplexMatrix h3 = ComplexMatrix::Zero(3, 3);
    h3(1, 1) = 1.0;
    h3(2, 2) = 2.3;
    auto sh3 = linalg::hermitian_eigendecomposition(h3);
    auto rm3 = davies::build_rate_matrix(sh3, 0.7, {{1, 0, 0.3}, {2, 1, 0.9}, {2, 0, 0.2}});
    for (int n = 0; n < 3; ++n)
        for (int m = 0; m < n; ++m) {
            if (rm3.w(m, n) == 0.0) continue;
            const double ratio = rm3.w(n, m) / rm3.w(m, n);
            CHECK(close(ratio, std::exp(-0.7 * (sh3.eigenvalues[n] - sh3.eigenvalues[m])),
                        1e-14));
        }
    RealVector p3(3);
    const auto g3 = qstate::gibbs_populations(sh3, 0.7);
    p3 << g3[0], g3[1], g3[2];
    CHECK((rm3.w * p3).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("rate matrix construction rejects bad input") {
    auto h = bench_h();
    CHECK_THROWS_AS(davies::build_rate_matrix(h, kLn2, {{1, 0, -0.5}}), NegativeRateError);
    CHECK_THROWS_AS(davies::build_rate_matrix(h, kLn2, {{0, 1, 1.0}}), DomainError);
    CHECK_THROWS_AS(davies::build_rate_matrix(h, kLn2, {{1, 1, 1.0}}), DomainError);
    CHECK_THROWS_AS(davies::build_rate_matrix(h, kLn2, {{2, 0, 1.0}}), DomainError);
    CHECK_THROWS_AS(davies::build_rate_matrix(h, -1.0, {{1, 0, 1.0}}), NonFiniteBetaError);

    auto flat = linalg::hermitian_eigendecomposition(ComplexMatrix::Identity(2, 2));
    CHECK_THROWS_AS(davies::build_rate_matrix(flat, kLn2, {}), DegenerateSpectrumError);
}

TEST_CASE("reducible jump graphs are flagged") {
    ComplexMatrix h3 = ComplexMatrix::Zero(3, 3);
    h3(1, 1) = 1.0;
    h3(2, 2) = 2.3;
    auto sh3 = linalg::hermitian_eigendecomposition(h3);
    CHECK_FALSE(davies::build_rate_matrix(sh3, 1.0, {{1, 0, 1.0}}).irreducible);
    CHECK(davies::build_rate_matrix(sh3, 1.0, {{1, 0, 1.0}, {2, 1, 1.0}}).irreducible);
}

TEST_CASE("population derivative and coherence decay rates") {
    auto rm = bench_rates();
    RealVector p(2);
    p << 0.75, 0.25;
    RealVector pd = davies::pauli_derivative(rm, p);
    CHECK(close(pd[0], -0.125, 1e-15));
    CHECK(close(pd[1], 0.125, 1e-15));
    CHECK(close(davies::coherence_decay_rate(rm, 0, 1), 0.75, 1e-15));
}

TEST_CASE("master derivative: populations move, coherences rotate and decay") {
    auto h = bench_h();
    auto rm = bench_rates();
    ComplexMatrix rho = plus_state().matrix();
    ComplexMatrix dot = davies::master_derivative(rm, h, rho);
    // populations: p = (1/2, 1/2), pdot = (1/4 - 1/4 ... ) = W p
    CHECK(close(dot(0, 0).real(), 0.5 * 1.0 - 0.5 * 0.5, 1e-15)); // 0.25
    CHECK(close(dot(1, 1).real(), -0.25, 1e-15));
    // coherence: c = 1/2, cdot = -(i w_01 + 3/4) c; w_01 = E_0 - E_1 = -1
    CHECK(close(dot(0, 1).real(), -0.375, 1e-15));
    CHECK(close(dot(0, 1).imag(), 0.5, 1e-15));
    CHECK(close((dot - dot.adjoint()).cwiseAbs().maxCoeff(), 0.0, 1e-15));
    CHECK(close(dot.trace().real(), 0.0, 1e-15));
}

TEST_CASE("entropy production oracle at populations (3/4, 1/4)") {
    auto h = bench_h();
    auto rm = bench_rates();
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = 0.75;
    m(1, 1) = 0.25;
    auto rho = qstate::DensityMatrix::from_matrix(m);
    auto pr = davies::production_rates(rho, h, rm);

    CHECK(close(pr.diagonal, 0.050683138513520556, 1e-15)); // (1/8) ln(3/2)
    CHECK(close(pr.flux, -0.08664339756999316, 1e-15));     // -(ln 2)/8
    CHECK(close(pr.coherent, 0.0, 1e-13));
    CHECK(close(pr.total, pr.diagonal, 1e-13));
    CHECK(close(pr.free_energy_rate, pr.total, 1e-12));
    CHECK_FALSE(pr.divergent);

    // balance: dS/dt = Pi - Phi = (1/8) ln 3
    CHECK(close(pr.total - pr.flux, 0.125 * std::log(3.0), 1e-12));
}

TEST_CASE("entropy production diverges on the boundary of the state space") {
    auto h = bench_h();
    auto rm = bench_rates();
    auto pr = davies::production_rates(plus_state(), h, rm);
    CHECK(pr.divergent);
    CHECK(pr.coherent == std::numeric_limits<double>::infinity());
    CHECK(pr.total == std::numeric_limits<double>::infinity());
    CHECK(std::isfinite(pr.diagonal)); // populations are interior

    ComplexMatrix g = ComplexMatrix::Zero(2, 2);
    g(0, 0) = 1.0; // ground level, zero excited population
    auto prg = davies::production_rates(qstate::DensityMatrix::from_matrix(g), h, rm);
    CHECK(prg.divergent);
    CHECK(prg.diagonal == std::numeric_limits<double>::infinity());
}

TEST_CASE("relaxation run matches the closed-form qubit solution") {
    auto h = bench_h();
    auto rm = bench_rates();
    auto run = davies::propagate(plus_state(), h, rm, 1e-3, 2.0);
    REQUIRE(run.points.size() == 2001);

    for (const auto& pt : run.points) {
        const double t = pt.t;
        const double p0 = 2.0 / 3.0 - std::exp(-1.5 * t) / 6.0;
        const double cmag = 0.5 * std::exp(-0.75 * t);
        CHECK(close(pt.rho.matrix()(0, 0).real(), p0, 1e-9));
        CHECK(close(std::abs(pt.rho.matrix()(0, 1)), cmag, 1e-9));
    }
    // phase rotates at the Bohr frequency: c(t) = c(0) e^{(i - 3/4) t} for
    // the (0,1) entry since w_01 = -1
    const auto& late = run.points.back();
    const std::complex<double> expect =
        0.5 * std::exp(std::complex<double>(-0.75 * 2.0, 2.0));
    CHECK(std::abs(late.rho.matrix()(0, 1) - expect) < 1e-9);
}

TEST_CASE("relaxation run thermodynamics: balance, monotone free energy") {
    auto h = bench_h();
    auto rm = bench_rates();
    auto run = davies::propagate(plus_state(), h, rm, 1e-3, 3.0);

    // free energy decreases monotonically; entropy of this run increases
    for (std::size_t k = 1; k < run.points.size(); ++k) {
        CHECK(run.points[k].free_energy <= run.points[k - 1].free_energy + 1e-12);
    }

    // centered-difference entropy balance dS/dt = Pi - Phi away from t = 0;
    // the finite-difference error ~ S''' dt^2 / 6 shrinks with t
    const double dt = 1e-3;
    for (auto [k, tol_k] : {std::pair<std::size_t, double>{250, 1e-5},
                            {1000, 1e-6},
                            {2500, 1e-7}}) {
        const double ds =
            (run.points[k + 1].entropy - run.points[k - 1].entropy) / (2.0 * dt);
        const auto& pr = run.points[k].rates;
        CHECK(close(ds, pr.total - pr.flux, tol_k));
        CHECK(pr.total >= -1e-12);
        CHECK(pr.diagonal >= -1e-12);
        CHECK(pr.coherent >= -1e-12);
        CHECK(close(pr.free_energy_rate, pr.total, 1e-9));
    }

    // the coherence part is the decay rate of the coherence measure
    for (std::size_t k : {500u, 1500u}) {
        const double dc =
            (run.points[k + 1].coherence - run.points[k - 1].coherence) / (2.0 * dt);
        CHECK(close(-dc, run.points[k].rates.coherent, 1e-6));
    }
}

TEST_CASE("integrated production parts match the endpoint functionals") {
    auto h = bench_h();
    auto rm = bench_rates();
    auto run = davies::propagate(plus_state(), h, rm, 1e-3, 2.0);
    auto eq = qstate::gibbs_state(h, kLn2);

    // Simpson over [0.05, 2.0]: integral of the population part equals the
    // drop in KL(p || p_eq), integral of the coherence part the drop in C
    const std::size_t k0 = 50, k1 = 2000;
    const double dt = 1e-3;
    double int_diag = 0.0, int_coh = 0.0;
    for (std::size_t k = k0; k < k1; k += 2) {
        int_diag += dt / 3.0 * (run.points[k].rates.diagonal +
                                4.0 * run.points[k + 1].rates.diagonal +
                                run.points[k + 2].rates.diagonal);
        int_coh += dt / 3.0 * (run.points[k].rates.coherent +
                               4.0 * run.points[k + 1].rates.coherent +
                               run.points[k + 2].rates.coherent);
    }
    auto kl_at = [&](std::size_t k) {
        return qstate::kl_divergence(qstate::populations(run.points[k].rho, h),
                                     qstate::gibbs_populations(h, kLn2));
    };
    CHECK(close(int_diag, kl_at(k0) - kl_at(k1), 1e-9));
    CHECK(close(int_coh, run.points[k0].coherence - run.points[k1].coherence, 1e-9));
    (void)eq;
}

TEST_CASE("oversized steps are rejected with a step-size error") {
    auto h = bench_h();
    auto rm = bench_rates();
    CHECK_THROWS_AS(davies::propagate(plus_state(), h, rm, 5.0, 20.0), StepTooLargeError);
    CHECK_THROWS_AS(davies::propagate(plus_state(), h, rm, -0.1, 1.0), DomainError);
    CHECK_THROWS_AS(davies::propagate(plus_state(), h, rm, 0.1, -1.0), DomainError);
}

TEST_CASE("propagation lands exactly on t_max for non-integer step counts") {
    auto h = bench_h();
    auto rm = bench_rates();
    auto run = davies::propagate(plus_state(), h, rm, 0.3, 1.0);
    CHECK(close(run.points.back().t, 1.0, 1e-12));
    const double p0 = 2.0 / 3.0 - std::exp(-1.5) / 6.0;
    CHECK(close(run.points.back().rho.matrix()(0, 0).real(), p0, 1e-4));
}
