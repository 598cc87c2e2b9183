// tolerances.hpp — numerical conventions used across the library.
//
// All entropies are in nats; hbar = k_B = 1 throughout.
#pragma once

namespace qept::tol {

// Eigenvalues at or below this are treated as exact zeros when taking
// logarithms (the x ln x -> 0 convention) and when clamping trajectory
// probabilities.
inline constexpr double support = 1e-14;

// Trajectory probabilities at or below this are dropped from exported
// exact ensembles (after checking the dropped mass is negligible).
inline constexpr double path = 1e-14;

// Relative max-norm tolerance for accepting a matrix as Hermitian.
inline constexpr double hermitian_rel = 1e-10;

// A density-matrix eigenvalue in [-psd_repair, 0) is clamped to zero and
// the spectrum renormalised; anything more negative is rejected.
inline constexpr double psd_repair = 1e-10;

// Allowed deviation of a density-matrix trace from one before repair.
inline constexpr double trace_check = 1e-10;

// Eigenvalues closer than degeneracy_rel * max(1, spectral range) are
// grouped as degenerate; grouping chains transitively.
inline constexpr double degeneracy_rel = 1e-9;

// Max-norm tolerance on U U^dag - 1 for operation unitaries.
inline constexpr double unitarity = 1e-10;

// Relative tolerance on the commutator [U, H_total] (scaled by the
// max-norms of the operands) for energy conservation.
inline constexpr double energy_commutator_rel = 1e-9;

} // namespace qept::tol
