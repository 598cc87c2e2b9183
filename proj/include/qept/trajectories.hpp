// trajectories.hpp — stochastic thermodynamics of a single thermal
// operation at the level of individual measurement trajectories.
//
// A forward trajectory is the tuple (alpha, mu, n, beta, nu, m): the system
// starts in eigenstate alpha of rho_S, the environment at energy level mu,
// the pair evolves under the joint unitary and is measured in the
// eigenbasis of rho'_S and the environment energy basis (beta, nu). The
// labels n and m are initial/final system energy readings attached by
// non-disturbing conditional measurements. The backward process runs the
// inverse unitary from the final measured statistics.
//
// sigma   = ln(p_alpha q_mu) - ln(p'_beta q_nu)      total
// sigma_d = ln(p_n q_mu) - ln(p'_m q_nu)             population part
// xi      = ln(p_alpha p'_m) - ln(p'_beta p_n)       coherence part
// with sigma = sigma_d + xi identically on every trajectory.
//
// <e^{-sigma}> counts the full backward probability mass, including the
// mass the backward process sends to forward-impossible trajectories
// (initial eigenstates of zero probability); that off-support mass is also
// reported separately, so rank-deficient initial states show up as a large
// backward_mass_off_support rather than as a broken identity.
#pragma once

#include "qept/qstate.hpp"
#include "qept/thermalops.hpp"

#include <cstdint>
#include <vector>

namespace qept::trajectories {

// Spectral data of a state prepared for trajectory work: probabilities at
// or below the support tolerance are clamped to exactly zero (and the rest
// renormalised) so support decisions are deterministic.
struct Eigensystem {
    RealVector probabilities; // ascending
    ComplexMatrix vectors;    // deterministic column conventions
};

Eigensystem state_eigensystem(const qstate::DensityMatrix& rho);

struct TrajectoryRecord {
    int alpha = 0;
    int mu = 0;
    int n = 0;
    int beta = 0;
    int nu = 0;
    int m = 0;
    double p_f = 0.0; // forward probability of the tuple
    double p_b = 0.0; // backward probability of the same tuple
    double sigma = 0.0;
    double sigma_d = 0.0;
    double xi = 0.0;
};

struct EnsembleSummary {
    bool exact = true;
    long long n_records = 0; // enumerated paths kept / samples drawn

    double mean_sigma = 0.0;
    double mean_sigma_d = 0.0;
    double mean_xi = 0.0;
    double exp_minus_sigma = 0.0;   // backward-mass count, = 1 by construction
    double exp_minus_sigma_d = 0.0; // plain forward average, may differ from 1

    // standard errors (zero in exact mode)
    double se_sigma = 0.0;
    double se_sigma_d = 0.0;
    double se_xi = 0.0;
    double se_exp_minus_sigma = 0.0;
    double se_exp_minus_sigma_d = 0.0;

    // forward mass excluded from the record list (sub-threshold paths and
    // numerical dust on zero-probability final eigenstates)
    double dropped_forward_mass = 0.0;
    // backward mass landing on forward-impossible initial eigenstates
    double backward_mass_off_support = 0.0;
};

struct TrajectoryEnsemble {
    std::vector<TrajectoryRecord> records;
    EnsembleSummary summary;
};

// Exact enumeration of every trajectory with positive forward probability.
// Averages run over all of them; the record list keeps those above the path
// tolerance. Throws EnumerationTooLargeError when d_s^4 d_e^2 exceeds 1e6.
TrajectoryEnsemble enumerate_paths(const thermalops::ThermalOperation& op,
                                   const qstate::DensityMatrix& rho_s);

// Monte Carlo sampling of forward trajectories (inverse-CDF draws in the
// order alpha, mu, (beta, nu), n, m from one seeded stream). Standard
// errors accompany every mean; the off-support backward mass is still
// computed exactly and included in exp_minus_sigma.
TrajectoryEnsemble sample_paths(const thermalops::ThermalOperation& op,
                                const qstate::DensityMatrix& rho_s, long long n_samples,
                                std::uint64_t seed);

} // namespace qept::trajectories
