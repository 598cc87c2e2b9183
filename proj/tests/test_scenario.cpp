#include "doctest.h"

#include "qept/errors.hpp"
#include "qept/scenario.hpp"

#include <string>

using namespace qept;
using scenario::parse_scenario;

namespace {

std::string message_of(const std::string& text) {
    try {
        parse_scenario(text, "test");
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

const char* kMinimalDavies =
    "mode = davies\n"
    "system.energies = 0 1\n"
    "system.initial_state = plus\n"
    "beta = 0.6931471805599453\n"
    "rates = 1 0 1.0\n";

} // namespace

TEST_CASE("minimal davies scenario fills the documented defaults") {
    auto s = parse_scenario(kMinimalDavies, "test");
    CHECK(s.mode == scenario::Mode::davies);
    CHECK(s.dt == 1e-3);
    CHECK(s.t_max == 10.0);
    CHECK(s.output_directory == "out");
    CHECK(s.emit_csv);
    CHECK(s.emit_json);
    REQUIRE(s.rates.size() == 1);
    CHECK(s.rates[0].upper == 1);
    CHECK(s.rates[0].lower == 0);
    CHECK(s.rates[0].gamma == 1.0);
    CHECK(s.state_kind == scenario::StateKind::plus);
}

TEST_CASE("comments, blank lines and spacing are tolerated") {
    auto s = parse_scenario("# header comment\n"
                            "\n"
                            "mode=davies   # trailing comment\n"
                            "  system.energies   =   0   1  \n"
                            "system.initial_state = basis:1\n"
                            "beta = 2\n"
                            "rates = 1 0 0.25   1 0 0.25\n",
                            "test");
    CHECK(s.system_energies == std::vector<double>{0.0, 1.0});
    CHECK(s.state_kind == scenario::StateKind::basis);
    CHECK(s.state_basis_index == 1);
    CHECK(s.rates.size() == 2);
}

TEST_CASE("a full trajectories scenario lands in the right fields") {
    auto s = parse_scenario("mode = trajectories\n"
                            "system.energies = 0 1\n"
                            "environment.energies = 0 1 2.3\n"
                            "system.initial_state = gibbs\n"
                            "beta = 0.5\n"
                            "unitary.kind = random_block\n"
                            "unitary.seed = 42\n"
                            "sampling.n = 1000\n"
                            "sampling.seed = 9\n"
                            "output.directory = artifacts\n"
                            "output.formats = json\n",
                            "test");
    CHECK(s.mode == scenario::Mode::trajectories);
    CHECK(s.environment_energies.size() == 3);
    CHECK(s.unitary_kind == scenario::UnitaryKind::random_block);
    CHECK(s.unitary_seed == 42);
    CHECK(s.sampling_n == 1000);
    CHECK(s.sampling_seed == 9);
    CHECK(s.output_directory == "artifacts");
    CHECK_FALSE(s.emit_csv);
    CHECK(s.emit_json);
}

TEST_CASE("validation failures name the offending key") {
    // beta rule, spelled with the key name
    CHECK_THROWS_AS(parse_scenario("mode = davies\nsystem.energies = 0 1\n"
                                   "system.initial_state = plus\nbeta = -1\nrates = 1 0 1\n",
                                   "test"),
                    ValidationError);
    CHECK(message_of("mode = davies\nsystem.energies = 0 1\n"
                     "system.initial_state = plus\nbeta = -1\nrates = 1 0 1\n")
              .find("beta") == 0);

    // partial_swap without its angle
    std::string no_theta = "mode = thermal_op\nsystem.energies = 0 1\n"
                           "environment.energies = 0 1\nsystem.initial_state = plus\n"
                           "beta = 1\nunitary.kind = partial_swap\n";
    CHECK_THROWS_AS(parse_scenario(no_theta, "test"), ValidationError);
    CHECK(message_of(no_theta).find("unitary.theta") == 0);

    // parameters of a different kind are rejected
    CHECK(message_of("mode = thermal_op\nsystem.energies = 0 1\n"
                     "environment.energies = 0 1\nsystem.initial_state = plus\n"
                     "beta = 1\nunitary.kind = swap\nunitary.theta = 0.3\n")
              .find("unitary.theta") == 0);

    // unknown and mode-foreign keys
    CHECK(message_of(std::string(kMinimalDavies) + "foo.bar = 1\n").find("unknown key") == 0);
    CHECK(message_of(std::string(kMinimalDavies) + "unitary.kind = swap\n")
              .find("unitary.kind") == 0);
    CHECK(message_of(std::string(kMinimalDavies) + "sampling.n = 5\n").find("sampling.n") == 0);

    // rates rules
    CHECK(message_of("mode = davies\nsystem.energies = 0 1\n"
                     "system.initial_state = plus\nbeta = 1\nrates = 1 0\n")
              .find("rates") == 0);
    CHECK(message_of("mode = davies\nsystem.energies = 0 1\n"
                     "system.initial_state = plus\nbeta = 1\nrates = 0 1 1.0\n")
              .find("rates") == 0); // upper must sit above lower
    CHECK(message_of("mode = davies\nsystem.energies = 0 1\n"
                     "system.initial_state = plus\nbeta = 1\nrates = 1 0 -0.5\n")
              .find("rates") == 0);
    CHECK(message_of("mode = davies\nsystem.energies = 0 1\n"
                     "system.initial_state = plus\nbeta = 1\nrates = 2 0 1.0\n")
              .find("rates") == 0);

    // state grammar
    CHECK(message_of("mode = davies\nsystem.energies = 0 1\n"
                     "system.initial_state = basis:2\nbeta = 1\nrates = 1 0 1\n")
              .find("system.initial_state") == 0);
    CHECK(message_of("mode = davies\nsystem.energies = 0 1\n"
                     "system.initial_state = mixed\nbeta = 1\nrates = 1 0 1\n")
              .find("system.initial_state") == 0);

    // output.formats entries
    CHECK(message_of(std::string(kMinimalDavies) + "output.formats = yaml\n")
              .find("output.formats") == 0);
    CHECK(message_of(std::string(kMinimalDavies) + "output.formats = csv csv\n")
              .find("output.formats") == 0);

    // missing requirements
    CHECK(message_of("mode = davies\n").find(": required in mode davies") !=
          std::string::npos);
    CHECK(message_of("beta = 1\n").find("mode") == 0);
}

TEST_CASE("structural defects are parse errors") {
    CHECK_THROWS_AS(parse_scenario("mode davies\n", "test"), ParseError);
    CHECK_THROWS_AS(parse_scenario("mode = davies\nmode = davies\n", "test"), ParseError);
    CHECK_THROWS_AS(parse_scenario("mode =\n", "test"), ParseError);
    CHECK_THROWS_AS(parse_scenario("= davies\n", "test"), ParseError);
    CHECK_THROWS_AS(parse_scenario("MODE = davies\n", "test"), ParseError);
    CHECK_THROWS_AS(parse_scenario(std::string(kMinimalDavies) + "integration.dt = fast\n",
                                   "test"),
                    ParseError);
    // line number and source name appear in the message
    try {
        parse_scenario("mode = davies\nbad line\n", "demo.scn");
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("demo.scn:2") != std::string::npos);
    }
}
