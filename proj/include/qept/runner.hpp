// runner.hpp — turn a validated Scenario into engine objects and artifacts.
//
// Artifacts per mode (inside the output directory):
//   davies        timeseries.csv   t,S,F,Pi,Pi_d,Upsilon,Phi,C,p_0..p_{d-1}
//   thermal_op    audit.json       production totals, conservation residuals,
//                                  population kernel, coherence multipliers,
//                                  block structure
//   trajectories  trajectories.csv one row per path / sample
//                 summary.json     ensemble averages, standard errors,
//                                  fluctuation-theorem residual
//   collision     relaxation.csv   k,trace_distance_to_gibbs,Sigma_k
//
// Runs are deterministic: the same scenario and seeds produce byte-identical
// files.
#pragma once

#include "qept/davies.hpp"
#include "qept/qstate.hpp"
#include "qept/scenario.hpp"
#include "qept/thermalops.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qept::runner {

// Engine objects built from a scenario: Hamiltonians, the initial state,
// and (for thermal modes) the joint unitary, or (for davies mode) the rate
// matrix. Building performs all remaining physics validation.
struct Engines {
    linalg::SpectralHamiltonian h_s;
    qstate::DensityMatrix rho0;
    std::optional<thermalops::ThermalOperation> op; // thermal modes
    std::optional<davies::RateMatrix> rates;        // davies mode
};

Engines materialize(const scenario::Scenario& s);

// Execute the scenario and write its artifacts; returns the written paths.
std::vector<std::string> run_scenario(const scenario::Scenario& s);

} // namespace qept::runner
