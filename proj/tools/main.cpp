// qept — scenario-driven front end for the entropy-production engines.
//
//   qept run <scenario> [--out DIR] [--threads N]
//   qept validate <scenario>
//   qept version
//
// Exit codes: 0 ok, 2 parse, 3 validation, 4 engine, 5 io. Failures print a
// structured JSON document on stderr.
#include "qept/errors.hpp"
#include "qept/runner.hpp"
#include "qept/scenario.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <iostream>
#include <string>

namespace {

constexpr const char* kVersion = "0.1.0";

int fail(int code, const char* kind, const std::string& message) {
    nlohmann::ordered_json doc;
    doc["error"] = kind;
    doc["message"] = message;
    doc["exit_code"] = code;
    std::cerr << doc.dump(2) << '\n';
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"entropy production and coherence toolkit for open quantum systems"};
    app.require_subcommand(1);

    std::string run_path;
    std::string out_dir;
    int threads = 1;
    auto* cmd_run = app.add_subcommand("run", "run a scenario and write its artifacts");
    cmd_run->add_option("scenario", run_path, "scenario file")->required();
    cmd_run->add_option("--out", out_dir, "override output.directory");
    cmd_run
        ->add_option("--threads", threads,
                     "worker threads; execution is sequential and seed-deterministic "
                     "at any value")
        ->check(CLI::Range(1, 4096));

    std::string validate_path;
    auto* cmd_validate =
        app.add_subcommand("validate", "load and fully validate a scenario");
    cmd_validate->add_option("scenario", validate_path, "scenario file")->required();

    auto* cmd_version = app.add_subcommand("version", "print the tool version");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        return fail(2, "parse", e.what());
    }

    try {
        if (*cmd_version) {
            std::cout << "qept " << kVersion << '\n';
            return 0;
        }
        if (*cmd_validate) {
            auto s = qept::scenario::load_scenario(validate_path);
            qept::runner::materialize(s); // builds every referenced object
            std::cout << "scenario valid\n";
            return 0;
        }
        auto s = qept::scenario::load_scenario(run_path);
        if (!out_dir.empty()) s.output_directory = out_dir;
        for (const auto& path : qept::runner::run_scenario(s)) std::cout << path << '\n';
        return 0;
    } catch (const qept::ParseError& e) {
        return fail(2, "parse", e.what());
    } catch (const qept::ValidationError& e) {
        return fail(3, "validation", e.what());
    } catch (const qept::IoError& e) {
        return fail(5, "io", e.what());
    } catch (const std::exception& e) {
        return fail(4, "engine", e.what());
    }
}
