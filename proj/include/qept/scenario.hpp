// scenario.hpp — declarative run descriptions.
//
// A scenario file is flat `key = value` text with dotted section keys and
// `#` comments. The loader rejects malformed text with ParseError and any
// contract violation with ValidationError; validation messages always name
// the offending key and the rule it broke.
//
// Keys:
//   mode                   davies | thermal_op | trajectories | collision
//   system.energies        whitespace-separated real list
//   system.initial_state   plus | gibbs | basis:<n> | file:<path>
//   environment.energies   real list (thermal_op / trajectories / collision)
//   beta                   inverse temperature, > 0
//   unitary.kind           identity | swap | partial_swap | random_block | potential
//   unitary.theta          partial_swap angle
//   unitary.seed           random_block seed
//   unitary.file           potential matrix file
//   unitary.t              potential interaction time
//   rates                  davies: whitespace-separated `upper lower gamma` triples
//   integration.dt         davies step (default 1e-3)
//   integration.t_max      davies horizon (default 10)
//   sampling.n             trajectories: sample count, 0 = exact enumeration (default 0)
//   sampling.seed          trajectories: sampling seed (default 1)
//   collisions.n           collision count (default 2000)
//   output.directory       artifact directory (default "out")
//   output.formats         subset of {csv, json} (default both)
//
// The environment variable QEPT_SEED, when set, overrides unitary.seed and
// sampling.seed.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qept::scenario {

enum class Mode { davies, thermal_op, trajectories, collision };
enum class StateKind { plus, gibbs, basis, file };
enum class UnitaryKind { identity, swap, partial_swap, random_block, potential };

struct RateEntry {
    int upper = 0;
    int lower = 0;
    double gamma = 0.0;
};

struct Scenario {
    Mode mode = Mode::davies;

    std::vector<double> system_energies;
    StateKind state_kind = StateKind::gibbs;
    int state_basis_index = 0;    // basis:<n>
    std::string state_file;       // file:<path>

    std::vector<double> environment_energies;
    double beta = 0.0;

    UnitaryKind unitary_kind = UnitaryKind::identity;
    double unitary_theta = 0.0;
    std::uint64_t unitary_seed = 0;
    std::string unitary_file;
    double unitary_t = 0.0;

    std::vector<RateEntry> rates;

    double dt = 1e-3;
    double t_max = 10.0;

    long long sampling_n = 0;
    std::uint64_t sampling_seed = 1;

    int collisions_n = 2000;

    std::string output_directory = "out";
    bool emit_csv = true;
    bool emit_json = true;
};

// Parse and validate scenario text; `source` names the origin in messages.
Scenario parse_scenario(const std::string& text, const std::string& source);

// Read the file (IoError when unreadable), parse, validate, and apply the
// QEPT_SEED override.
Scenario load_scenario(const std::string& path);

} // namespace qept::scenario
