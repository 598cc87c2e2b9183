#include "qept/runner.hpp"

#include "qept/errors.hpp"
#include "qept/io.hpp"
#include "qept/trajectories.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>

namespace qept::runner {

namespace {

constexpr double kPi = 3.14159265358979323846;

linalg::SpectralHamiltonian diagonal_hamiltonian(const std::vector<double>& energies) {
    const int d = static_cast<int>(energies.size());
    ComplexMatrix h = ComplexMatrix::Zero(d, d);
    for (int i = 0; i < d; ++i) h(i, i) = energies[i];
    return linalg::hermitian_eigendecomposition(h);
}

qstate::DensityMatrix build_state(const scenario::Scenario& s,
                                  const linalg::SpectralHamiltonian& h_s) {
    const int d = h_s.dim();
    switch (s.state_kind) {
        case scenario::StateKind::plus: {
            // uniform superposition of all computational levels
            ComplexMatrix m = ComplexMatrix::Constant(d, d, 1.0 / d);
            return qstate::DensityMatrix::from_matrix(m);
        }
        case scenario::StateKind::gibbs:
            return qstate::gibbs_state(h_s, s.beta).rho;
        case scenario::StateKind::basis: {
            ComplexMatrix m = ComplexMatrix::Zero(d, d);
            m(s.state_basis_index, s.state_basis_index) = 1.0;
            return qstate::DensityMatrix::from_matrix(m);
        }
        case scenario::StateKind::file: {
            ComplexMatrix m = io::read_matrix_file(s.state_file);
            if (m.rows() != d || m.cols() != d)
                throw ValidationError("system.initial_state: matrix file is " +
                                      std::to_string(m.rows()) + " x " +
                                      std::to_string(m.cols()) + ", expected " +
                                      std::to_string(d) + " x " + std::to_string(d));
            try {
                return qstate::DensityMatrix::from_matrix(m);
            } catch (const Error& e) {
                throw ValidationError(std::string("system.initial_state: ") + e.what());
            }
        }
    }
    throw DomainError("unreachable state kind");
}

thermalops::ThermalOperation build_operation(const scenario::Scenario& s,
                                             const linalg::SpectralHamiltonian& h_s,
                                             const linalg::SpectralHamiltonian& h_e) {
    switch (s.unitary_kind) {
        case scenario::UnitaryKind::identity:
            return thermalops::from_unitary(
                h_s, h_e, s.beta, ComplexMatrix::Identity(h_s.dim() * h_e.dim(),
                                                          h_s.dim() * h_e.dim()));
        case scenario::UnitaryKind::swap:
            return thermalops::partial_swap(h_s, h_e, s.beta, kPi / 2.0);
        case scenario::UnitaryKind::partial_swap:
            return thermalops::partial_swap(h_s, h_e, s.beta, s.unitary_theta);
        case scenario::UnitaryKind::random_block:
            return thermalops::random_energy_conserving_unitary(h_s, h_e, s.beta,
                                                                s.unitary_seed);
        case scenario::UnitaryKind::potential: {
            ComplexMatrix v = io::read_matrix_file(s.unitary_file);
            const int dim = h_s.dim() * h_e.dim();
            if (v.rows() != dim || v.cols() != dim)
                throw ValidationError("unitary.file: matrix is " + std::to_string(v.rows()) +
                                      " x " + std::to_string(v.cols()) + ", expected " +
                                      std::to_string(dim) + " x " + std::to_string(dim));
            try {
                return thermalops::from_potential(h_s, h_e, s.beta, v, s.unitary_t);
            } catch (const Error& e) {
                throw ValidationError(std::string("unitary.file: ") + e.what());
            }
        }
    }
    throw DomainError("unreachable unitary kind");
}

} // namespace

Engines materialize(const scenario::Scenario& s) {
    auto h_s = diagonal_hamiltonian(s.system_energies);

    if (s.mode == scenario::Mode::davies) {
        if (!h_s.bohr_nondegenerate())
            throw ValidationError(
                "system.energies: davies mode needs nondegenerate Bohr frequencies "
                "(all level gaps distinct)");
        // scenario level indices refer to the energies list as written; the
        // rate matrix indexes the ascending eigenbasis
        const int d = h_s.dim();
        std::vector<int> order(d);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return s.system_energies[a] < s.system_energies[b];
        });
        std::vector<int> eigen_of(d);
        for (int j = 0; j < d; ++j) eigen_of[order[j]] = j;

        std::vector<davies::DownwardRate> downward;
        for (const auto& r : s.rates)
            downward.push_back({eigen_of[r.upper], eigen_of[r.lower], r.gamma});

        auto rho0 = build_state(s, h_s);
        auto rates = davies::build_rate_matrix(h_s, s.beta, downward);
        return Engines{std::move(h_s), std::move(rho0), std::nullopt, std::move(rates)};
    }

    auto h_e = diagonal_hamiltonian(s.environment_energies);
    auto rho0 = build_state(s, h_s);
    auto op = build_operation(s, h_s, h_e);
    return Engines{std::move(h_s), std::move(rho0), std::move(op), std::nullopt};
}

namespace {

std::string join_path(const std::string& dir, const char* name) {
    return (std::filesystem::path(dir) / name).string();
}

void run_davies(const scenario::Scenario& s, const Engines& eng,
                std::vector<std::string>& written) {
    auto result = davies::propagate(eng.rho0, eng.h_s, *eng.rates, s.dt, s.t_max);
    if (!s.emit_csv) return;

    const int d = eng.h_s.dim();
    std::vector<std::string> header = {"t", "S", "F", "Pi", "Pi_d", "Upsilon", "Phi", "C"};
    for (int i = 0; i < d; ++i) header.push_back("p_" + std::to_string(i));

    std::vector<std::vector<double>> rows;
    rows.reserve(result.points.size());
    for (const auto& pt : result.points) {
        std::vector<double> row = {pt.t,
                                   pt.entropy,
                                   pt.free_energy,
                                   pt.rates.total,
                                   pt.rates.diagonal,
                                   pt.rates.coherent,
                                   pt.rates.flux,
                                   pt.coherence};
        auto pops = qstate::populations(pt.rho, eng.h_s);
        for (int i = 0; i < d; ++i) row.push_back(pops[i]);
        rows.push_back(std::move(row));
    }
    auto path = join_path(s.output_directory, "timeseries.csv");
    io::write_csv(path, header, rows);
    written.push_back(path);
}

void run_thermal_op(const scenario::Scenario& s, const Engines& eng,
                    std::vector<std::string>& written) {
    auto report = thermalops::conservation_report(*eng.op, eng.rho0);
    auto channel = thermalops::channel_summary(*eng.op);
    if (!s.emit_json) return;

    io::FlatDocument doc;
    doc.emplace_back("sigma", report.totals.sigma);
    doc.emplace_back("sigma_d", report.totals.sigma_d);
    doc.emplace_back("xi", report.totals.xi);
    doc.emplace_back("s_rel_env", report.s_rel_env);
    doc.emplace_back("mutual_info", report.mutual_info);
    doc.emplace_back("coherence_initial", report.coherence_initial);
    doc.emplace_back("coherence_joint_final", report.coherence_joint_final);
    doc.emplace_back("coherence_s_final", report.coherence_s_final);
    doc.emplace_back("coherence_e_final", report.coherence_e_final);
    doc.emplace_back("correlated_coherence_final", report.correlated_coherence_final);
    doc.emplace_back("residual_production_split", report.residual_production_split);
    doc.emplace_back("residual_dephased_entropy", report.residual_dephased_entropy);
    doc.emplace_back("residual_global_coherence", report.residual_global_coherence);
    doc.emplace_back("residual_coherence_split", report.residual_coherence_split);
    doc.emplace_back("residual_coherence_transfer", report.residual_coherence_transfer);
    doc.emplace_back("residual_joint_entropy", report.residual_joint_entropy);
    doc.emplace_back("blocks_total", static_cast<std::int64_t>(report.blocks_total));
    doc.emplace_back("blocks_nontrivial",
                     static_cast<std::int64_t>(report.blocks_nontrivial));
    doc.emplace_back("completeness_residual", channel.completeness_residual);
    doc.emplace_back("alpha_valid", static_cast<std::int64_t>(channel.alpha_valid ? 1 : 0));

    const int d = eng.h_s.dim();
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n)
            doc.emplace_back("q_" + std::to_string(m) + "_" + std::to_string(n),
                             channel.q_kernel(m, n));
    if (channel.alpha_valid) {
        for (int n = 0; n < d; ++n) {
            for (int m = 0; m < d; ++m) {
                if (n == m) continue;
                auto key = "alpha_" + std::to_string(n) + "_" + std::to_string(m);
                doc.emplace_back(key + "_re", channel.alpha(n, m).real());
                doc.emplace_back(key + "_im", channel.alpha(n, m).imag());
            }
        }
    }

    auto path = join_path(s.output_directory, "audit.json");
    io::write_flat_json(path, doc);
    written.push_back(path);
}

void run_trajectories(const scenario::Scenario& s, const Engines& eng,
                      std::vector<std::string>& written) {
    auto ensemble = (s.sampling_n == 0)
                        ? trajectories::enumerate_paths(*eng.op, eng.rho0)
                        : trajectories::sample_paths(*eng.op, eng.rho0, s.sampling_n,
                                                     s.sampling_seed);
    const auto& sum = ensemble.summary;

    if (s.emit_csv) {
        std::vector<std::string> header = {"alpha", "mu", "n",       "beta",
                                           "nu",    "m",  "p_f",     "p_b",
                                           "sigma", "sigma_d", "xi"};
        std::vector<std::vector<double>> rows;
        rows.reserve(ensemble.records.size());
        for (const auto& r : ensemble.records)
            rows.push_back({static_cast<double>(r.alpha), static_cast<double>(r.mu),
                            static_cast<double>(r.n), static_cast<double>(r.beta),
                            static_cast<double>(r.nu), static_cast<double>(r.m), r.p_f,
                            r.p_b, r.sigma, r.sigma_d, r.xi});
        auto path = join_path(s.output_directory, "trajectories.csv");
        io::write_csv(path, header, rows);
        written.push_back(path);
    }

    if (s.emit_json) {
        io::FlatDocument doc;
        doc.emplace_back("method", std::string(sum.exact ? "exact" : "sampled"));
        doc.emplace_back("n_records", static_cast<std::int64_t>(sum.n_records));
        doc.emplace_back("mean_sigma", sum.mean_sigma);
        doc.emplace_back("mean_sigma_d", sum.mean_sigma_d);
        doc.emplace_back("mean_xi", sum.mean_xi);
        doc.emplace_back("exp_minus_sigma", sum.exp_minus_sigma);
        doc.emplace_back("exp_minus_sigma_d", sum.exp_minus_sigma_d);
        doc.emplace_back("ft_residual", std::abs(sum.exp_minus_sigma - 1.0));
        doc.emplace_back("se_sigma", sum.se_sigma);
        doc.emplace_back("se_sigma_d", sum.se_sigma_d);
        doc.emplace_back("se_xi", sum.se_xi);
        doc.emplace_back("se_exp_minus_sigma", sum.se_exp_minus_sigma);
        doc.emplace_back("se_exp_minus_sigma_d", sum.se_exp_minus_sigma_d);
        doc.emplace_back("dropped_forward_mass", sum.dropped_forward_mass);
        doc.emplace_back("backward_mass_off_support", sum.backward_mass_off_support);
        auto path = join_path(s.output_directory, "summary.json");
        io::write_flat_json(path, doc);
        written.push_back(path);
    }
}

void run_collision(const scenario::Scenario& s, const Engines& eng,
                   std::vector<std::string>& written) {
    auto sequence = thermalops::collision_sequence(*eng.op, eng.rho0, s.collisions_n);
    if (!s.emit_csv) return;

    std::vector<std::vector<double>> rows;
    rows.reserve(sequence.size());
    for (const auto& pt : sequence)
        rows.push_back({static_cast<double>(pt.k), pt.distance_to_thermal,
                        pt.cumulative_sigma});
    auto path = join_path(s.output_directory, "relaxation.csv");
    io::write_csv(path, {"k", "trace_distance_to_gibbs", "Sigma_k"}, rows);
    written.push_back(path);
}

} // namespace

std::vector<std::string> run_scenario(const scenario::Scenario& s) {
    Engines eng = materialize(s);

    std::error_code ec;
    std::filesystem::create_directories(s.output_directory, ec);
    if (ec)
        throw IoError("cannot create output directory '" + s.output_directory +
                      "': " + ec.message());

    std::vector<std::string> written;
    switch (s.mode) {
        case scenario::Mode::davies: run_davies(s, eng, written); break;
        case scenario::Mode::thermal_op: run_thermal_op(s, eng, written); break;
        case scenario::Mode::trajectories: run_trajectories(s, eng, written); break;
        case scenario::Mode::collision: run_collision(s, eng, written); break;
    }
    return written;
}

} // namespace qept::runner
