#include "qept/scenario.hpp"

#include "qept/errors.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace qept::scenario {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_tokens(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

double parse_real(const std::string& key, const std::string& tok) {
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
        throw ParseError(key + ": '" + tok + "' is not a number");
    if (errno == ERANGE) throw ParseError(key + ": '" + tok + "' is out of range");
    return v;
}

long long parse_integer(const std::string& key, const std::string& tok) {
    errno = 0;
    char* end = nullptr;
    long long v = std::strtoll(tok.c_str(), &end, 10);
    if (end == tok.c_str() || *end != '\0')
        throw ParseError(key + ": '" + tok + "' is not an integer");
    if (errno == ERANGE) throw ParseError(key + ": '" + tok + "' is out of range");
    return v;
}

std::uint64_t parse_seed(const std::string& key, const std::string& tok) {
    errno = 0;
    char* end = nullptr;
    unsigned long long v = std::strtoull(tok.c_str(), &end, 10);
    if (end == tok.c_str() || *end != '\0' || tok[0] == '-')
        throw ParseError(key + ": '" + tok + "' is not an unsigned integer");
    if (errno == ERANGE) throw ParseError(key + ": '" + tok + "' is out of range");
    return v;
}

std::vector<double> parse_real_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    for (const auto& tok : split_tokens(value)) out.push_back(parse_real(key, tok));
    if (out.empty()) throw ValidationError(key + ": must list at least one number");
    for (double v : out)
        if (!std::isfinite(v)) throw ValidationError(key + ": entries must be finite");
    return out;
}

// raw `key = value` document with duplicate detection
std::map<std::string, std::string> lex_document(const std::string& text,
                                                const std::string& source) {
    std::map<std::string, std::string> doc;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(source + ":" + std::to_string(line_no) +
                             ": expected 'key = value', got '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ParseError(source + ":" + std::to_string(line_no) + ": empty key");
        if (key.find_first_not_of("abcdefghijklmnopqrstuvwxyz0123456789_.") !=
            std::string::npos)
            throw ParseError(source + ":" + std::to_string(line_no) + ": bad key '" +
                             key + "'");
        if (value.empty())
            throw ParseError(source + ":" + std::to_string(line_no) + ": key '" + key +
                             "' has an empty value");
        if (!doc.emplace(key, value).second)
            throw ParseError(source + ":" + std::to_string(line_no) + ": duplicate key '" +
                             key + "'");
    }
    return doc;
}

const std::set<std::string> kKnownKeys = {
    "mode",           "system.energies",     "system.initial_state",
    "environment.energies", "beta",          "unitary.kind",
    "unitary.theta",  "unitary.seed",        "unitary.file",
    "unitary.t",      "rates",               "integration.dt",
    "integration.t_max", "sampling.n",       "sampling.seed",
    "collisions.n",   "output.directory",    "output.formats",
};

Mode parse_mode(const std::string& value) {
    if (value == "davies") return Mode::davies;
    if (value == "thermal_op") return Mode::thermal_op;
    if (value == "trajectories") return Mode::trajectories;
    if (value == "collision") return Mode::collision;
    throw ValidationError("mode: must be one of davies|thermal_op|trajectories|collision, got '" +
                          value + "'");
}

const char* mode_name(Mode m) {
    switch (m) {
        case Mode::davies: return "davies";
        case Mode::thermal_op: return "thermal_op";
        case Mode::trajectories: return "trajectories";
        case Mode::collision: return "collision";
    }
    return "?";
}

} // namespace

Scenario parse_scenario(const std::string& text, const std::string& source) {
    auto doc = lex_document(text, source);

    for (const auto& [key, value] : doc)
        if (!kKnownKeys.count(key)) throw ValidationError("unknown key '" + key + "'");

    auto it = doc.find("mode");
    if (it == doc.end()) throw ValidationError("mode: required");
    Scenario s;
    s.mode = parse_mode(it->second);

    const bool thermal = s.mode != Mode::davies;

    // which keys the mode accepts / requires
    std::set<std::string> allowed = {"mode", "system.energies", "system.initial_state",
                                     "beta", "output.directory", "output.formats"};
    std::set<std::string> required = {"mode", "system.energies", "system.initial_state",
                                      "beta"};
    if (s.mode == Mode::davies) {
        allowed.insert({"rates", "integration.dt", "integration.t_max"});
        required.insert("rates");
    } else {
        allowed.insert({"environment.energies", "unitary.kind", "unitary.theta",
                        "unitary.seed", "unitary.file", "unitary.t"});
        required.insert({"environment.energies", "unitary.kind"});
    }
    if (s.mode == Mode::trajectories) allowed.insert({"sampling.n", "sampling.seed"});
    if (s.mode == Mode::collision) allowed.insert("collisions.n");

    for (const auto& [key, value] : doc)
        if (!allowed.count(key))
            throw ValidationError(key + ": not valid in mode " + mode_name(s.mode));
    for (const auto& key : required)
        if (!doc.count(key)) throw ValidationError(key + ": required in mode " + mode_name(s.mode));

    auto get = [&](const std::string& key) { return doc.at(key); };

    s.system_energies = parse_real_list("system.energies", get("system.energies"));

    // initial state
    {
        const std::string v = get("system.initial_state");
        if (v == "plus") {
            s.state_kind = StateKind::plus;
        } else if (v == "gibbs") {
            s.state_kind = StateKind::gibbs;
        } else if (v.rfind("basis:", 0) == 0) {
            s.state_kind = StateKind::basis;
            long long n = parse_integer("system.initial_state", v.substr(6));
            if (n < 0 || n >= static_cast<long long>(s.system_energies.size()))
                throw ValidationError("system.initial_state: basis index " +
                                      std::to_string(n) + " outside [0, " +
                                      std::to_string(s.system_energies.size()) + ")");
            s.state_basis_index = static_cast<int>(n);
        } else if (v.rfind("file:", 0) == 0) {
            s.state_kind = StateKind::file;
            s.state_file = v.substr(5);
            if (s.state_file.empty())
                throw ValidationError("system.initial_state: empty file path");
        } else {
            throw ValidationError(
                "system.initial_state: must be plus | gibbs | basis:<n> | file:<path>, got '" +
                v + "'");
        }
    }

    s.beta = parse_real("beta", get("beta"));
    if (!std::isfinite(s.beta) || s.beta <= 0.0)
        throw ValidationError("beta: must be a finite number > 0");

    if (thermal) {
        s.environment_energies =
            parse_real_list("environment.energies", get("environment.energies"));

        const std::string kind = get("unitary.kind");
        std::set<std::string> kind_params;
        if (kind == "identity") {
            s.unitary_kind = UnitaryKind::identity;
        } else if (kind == "swap") {
            s.unitary_kind = UnitaryKind::swap;
        } else if (kind == "partial_swap") {
            s.unitary_kind = UnitaryKind::partial_swap;
            kind_params.insert("unitary.theta");
        } else if (kind == "random_block") {
            s.unitary_kind = UnitaryKind::random_block;
            kind_params.insert("unitary.seed");
        } else if (kind == "potential") {
            s.unitary_kind = UnitaryKind::potential;
            kind_params.insert({"unitary.file", "unitary.t"});
        } else {
            throw ValidationError(
                "unitary.kind: must be identity | swap | partial_swap | random_block | potential, got '" +
                kind + "'");
        }
        for (const char* p : {"unitary.theta", "unitary.seed", "unitary.file", "unitary.t"}) {
            if (doc.count(p) && !kind_params.count(p))
                throw ValidationError(std::string(p) + ": not valid for unitary.kind = " + kind);
            if (!doc.count(p) && kind_params.count(p))
                throw ValidationError(std::string(p) + ": required for unitary.kind = " + kind);
        }
        if (s.unitary_kind == UnitaryKind::partial_swap) {
            s.unitary_theta = parse_real("unitary.theta", get("unitary.theta"));
            if (!std::isfinite(s.unitary_theta))
                throw ValidationError("unitary.theta: must be finite");
        }
        if (s.unitary_kind == UnitaryKind::random_block)
            s.unitary_seed = parse_seed("unitary.seed", get("unitary.seed"));
        if (s.unitary_kind == UnitaryKind::potential) {
            s.unitary_file = get("unitary.file");
            s.unitary_t = parse_real("unitary.t", get("unitary.t"));
            if (!std::isfinite(s.unitary_t))
                throw ValidationError("unitary.t: must be finite");
        }
    }

    if (s.mode == Mode::davies) {
        auto toks = split_tokens(get("rates"));
        if (toks.empty() || toks.size() % 3 != 0)
            throw ValidationError("rates: expected `upper lower gamma` triples, got " +
                                  std::to_string(toks.size()) + " tokens");
        const long long d = static_cast<long long>(s.system_energies.size());
        for (std::size_t i = 0; i < toks.size(); i += 3) {
            RateEntry e;
            long long up = parse_integer("rates", toks[i]);
            long long lo = parse_integer("rates", toks[i + 1]);
            e.gamma = parse_real("rates", toks[i + 2]);
            if (up < 0 || up >= d || lo < 0 || lo >= d)
                throw ValidationError("rates: level index outside [0, " + std::to_string(d) +
                                      ")");
            if (up == lo) throw ValidationError("rates: upper and lower level must differ");
            if (s.system_energies[static_cast<std::size_t>(up)] <=
                s.system_energies[static_cast<std::size_t>(lo)])
                throw ValidationError("rates: upper level must have the higher energy");
            if (!std::isfinite(e.gamma) || e.gamma < 0.0)
                throw ValidationError("rates: gamma must be finite and >= 0");
            e.upper = static_cast<int>(up);
            e.lower = static_cast<int>(lo);
            s.rates.push_back(e);
        }

        if (doc.count("integration.dt")) {
            s.dt = parse_real("integration.dt", get("integration.dt"));
            if (!std::isfinite(s.dt) || s.dt <= 0.0)
                throw ValidationError("integration.dt: must be a finite number > 0");
        }
        if (doc.count("integration.t_max")) {
            s.t_max = parse_real("integration.t_max", get("integration.t_max"));
            if (!std::isfinite(s.t_max) || s.t_max <= 0.0)
                throw ValidationError("integration.t_max: must be a finite number > 0");
        }
    }

    if (doc.count("sampling.n")) {
        s.sampling_n = parse_integer("sampling.n", get("sampling.n"));
        if (s.sampling_n < 0) throw ValidationError("sampling.n: must be >= 0 (0 = exact)");
    }
    if (doc.count("sampling.seed")) s.sampling_seed = parse_seed("sampling.seed", get("sampling.seed"));

    if (doc.count("collisions.n")) {
        long long n = parse_integer("collisions.n", get("collisions.n"));
        if (n < 1 || n > 10'000'000) throw ValidationError("collisions.n: must be in [1, 1e7]");
        s.collisions_n = static_cast<int>(n);
    }

    if (doc.count("output.directory")) {
        s.output_directory = get("output.directory");
    }
    if (doc.count("output.formats")) {
        s.emit_csv = false;
        s.emit_json = false;
        auto toks = split_tokens(get("output.formats"));
        if (toks.empty()) throw ValidationError("output.formats: must list csv and/or json");
        for (const auto& t : toks) {
            if (t == "csv" && !s.emit_csv) s.emit_csv = true;
            else if (t == "json" && !s.emit_json) s.emit_json = true;
            else throw ValidationError("output.formats: bad or repeated entry '" + t + "'");
        }
    }

    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("failed reading scenario file '" + path + "'");

    Scenario s = parse_scenario(buf.str(), path);

    // referenced files: resolve relative to the scenario file, check existence
    const auto base = std::filesystem::path(path).parent_path();
    auto resolve = [&](const std::string& key, std::string& file) {
        std::filesystem::path p(file);
        if (p.is_relative()) p = base / p;
        if (!std::filesystem::exists(p))
            throw ValidationError(key + ": referenced file does not exist: " + p.string());
        file = p.string();
    };
    if (s.state_kind == StateKind::file) resolve("system.initial_state", s.state_file);
    if (s.unitary_kind == UnitaryKind::potential) resolve("unitary.file", s.unitary_file);

    if (const char* env = std::getenv("QEPT_SEED")) {
        std::uint64_t seed = parse_seed("QEPT_SEED", env);
        s.unitary_seed = seed;
        s.sampling_seed = seed;
    }
    return s;
}

} // namespace qept::scenario
