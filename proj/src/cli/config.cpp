#include "moran/cli/config.hpp"

#include <fstream>
#include <initializer_list>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"
#include "moran/errors.hpp"

namespace moran::cli {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, std::string_view where, std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) throw ConfigError(std::string(where) + ": expected a JSON object");
    const std::set<std::string_view> keys(allowed);
    for (const auto& [key, value] : obj.items())
        if (!keys.count(key)) throw ConfigError(std::string(where) + ": unknown key \"" + key + "\"");
}

double number(const json& obj, const char* key, std::string_view where) {
    const json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(std::string(where) + "." + key + ": expected a number");
    return v.get<double>();
}

std::optional<double> optional_number(const json& obj, const char* key, std::string_view where) {
    if (!obj.contains(key)) return std::nullopt;
    return number(obj, key, where);
}

std::uint64_t unsigned_integer(const json& v, std::string_view what) {
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0))
        throw ConfigError(std::string(what) + ": expected a non-negative integer");
    return v.get<std::uint64_t>();
}

std::vector<double> number_list(const json& obj, const char* key, std::string_view where) {
    if (!obj.contains(key)) throw ConfigError(std::string(where) + ": missing \"" + key + "\"");
    const json& v = obj.at(key);
    if (!v.is_array()) throw ConfigError(std::string(where) + "." + key + ": expected an array of numbers");
    std::vector<double> out;
    for (const json& x : v) {
        if (!x.is_number()) throw ConfigError(std::string(where) + "." + key + ": expected an array of numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

Atom parse_atom(const json& obj, std::string_view where) {
    reject_unknown(obj, where, {"ratios", "probs"});
    return Atom{number_list(obj, "ratios", where), number_list(obj, "probs", where)};
}

ParamDistribution parse_distribution(const json& dist, const json* bounds_json) {
    BoundsOverrides overrides;
    if (bounds_json) {
        reject_unknown(*bounds_json, "bounds", {"A", "B", "tau"});
        overrides.A = optional_number(*bounds_json, "A", "bounds");
        overrides.B = optional_number(*bounds_json, "B", "bounds");
        overrides.tau = optional_number(*bounds_json, "tau", "bounds");
    }
    if (!dist.is_object() || !dist.contains("kind") || !dist.at("kind").is_string())
        throw ConfigError("distribution: missing string field \"kind\"");
    const std::string kind = dist.at("kind").get<std::string>();

    ParamDistribution out;
    if (kind == "point_mass") {
        reject_unknown(dist, "distribution", {"kind", "ratios", "probs"});
        out = ParamDistribution::point_mass(Atom{number_list(dist, "ratios", "distribution"),
                                                 number_list(dist, "probs", "distribution")},
                                            overrides);
    } else if (kind == "finite_mixture") {
        reject_unknown(dist, "distribution", {"kind", "weights", "atoms"});
        if (!dist.contains("atoms") || !dist.at("atoms").is_array())
            throw ConfigError("distribution.atoms: expected an array of atoms");
        std::vector<Atom> atoms;
        for (std::size_t i = 0; i < dist.at("atoms").size(); ++i)
            atoms.push_back(parse_atom(dist.at("atoms")[i], "distribution.atoms[" + std::to_string(i) + "]"));
        out = ParamDistribution::finite_mixture(number_list(dist, "weights", "distribution"), std::move(atoms),
                                                overrides);
    } else if (kind == "uniform_p") {
        reject_unknown(dist, "distribution", {"kind", "a", "b"});
        out = ParamDistribution::uniform_p(number(dist, "a", "distribution"), number(dist, "b", "distribution"),
                                           overrides);
    } else {
        throw ConfigError("distribution: unknown kind \"" + kind + "\"");
    }
    validate(out);
    return out;
}

void require(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

AxisSpec parse_axis(const json& obj, std::string_view where, AxisSpec axis) {
    reject_unknown(obj, where, {"min", "max", "n"});
    if (obj.contains("min")) axis.min = number(obj, "min", where);
    if (obj.contains("max")) axis.max = number(obj, "max", where);
    if (obj.contains("n")) axis.n = unsigned_integer(obj.at("n"), std::string(where) + ".n");
    require(axis.n >= 1, std::string(where) + ".n must be at least 1");
    require(axis.min > 0.0 && axis.max < 1.0 && axis.min <= axis.max, std::string(where) + ": need 0 < min <= max < 1");
    return axis;
}

RunConfig parse(const json& doc) {
    reject_unknown(doc, "config", {"distribution", "bounds", "solve", "gcurve", "sweep", "simulate", "geometry"});
    RunConfig cfg;

    if (doc.contains("distribution"))
        cfg.distribution = parse_distribution(doc.at("distribution"), doc.contains("bounds") ? &doc.at("bounds") : nullptr);
    else if (doc.contains("bounds"))
        throw ConfigError("bounds: given without a distribution");

    if (doc.contains("solve")) {
        const json& s = doc.at("solve");
        reject_unknown(s, "solve", {"tol"});
        if (s.contains("tol")) cfg.solve.tol = number(s, "tol", "solve");
    }
    require(cfg.solve.tol > 0.0 && cfg.solve.tol < 1e-2, "solve.tol must lie in (0, 1e-2)");

    if (doc.contains("gcurve")) {
        const json& g = doc.at("gcurve");
        reject_unknown(g, "gcurve", {"theta_min", "theta_max", "step", "mc_samples", "seed"});
        if (g.contains("theta_min")) cfg.gcurve.theta_min = number(g, "theta_min", "gcurve");
        if (g.contains("theta_max")) cfg.gcurve.theta_max = number(g, "theta_max", "gcurve");
        if (g.contains("step")) cfg.gcurve.step = number(g, "step", "gcurve");
        if (g.contains("mc_samples")) cfg.gcurve.mc_samples = unsigned_integer(g.at("mc_samples"), "gcurve.mc_samples");
        if (g.contains("seed")) cfg.gcurve.seed = unsigned_integer(g.at("seed"), "gcurve.seed");
    }
    require(cfg.gcurve.theta_min >= 0.0 && cfg.gcurve.theta_max >= cfg.gcurve.theta_min,
            "gcurve: need 0 <= theta_min <= theta_max");
    require(cfg.gcurve.step > 0.0, "gcurve.step must be positive");
    require((cfg.gcurve.theta_max - cfg.gcurve.theta_min) / cfg.gcurve.step <= 1e7, "gcurve: grid too large");
    require(cfg.gcurve.mc_samples == 0 || cfg.gcurve.mc_samples >= 100, "gcurve.mc_samples must be 0 or >= 100");

    if (doc.contains("sweep")) {
        const json& s = doc.at("sweep");
        reject_unknown(s, "sweep", {"a", "b", "lambda_min", "lambda_max", "tol", "svg", "threads"});
        if (s.contains("a")) cfg.sweep.a = parse_axis(s.at("a"), "sweep.a", cfg.sweep.a);
        if (s.contains("b")) cfg.sweep.b = parse_axis(s.at("b"), "sweep.b", cfg.sweep.b);
        if (s.contains("lambda_min")) cfg.sweep.lambda_min = number(s, "lambda_min", "sweep");
        if (s.contains("lambda_max")) cfg.sweep.lambda_max = number(s, "lambda_max", "sweep");
        if (s.contains("tol")) cfg.sweep.tol = number(s, "tol", "sweep");
        if (s.contains("svg")) {
            require(s.at("svg").is_string(), "sweep.svg: expected a path string");
            cfg.sweep.svg = s.at("svg").get<std::string>();
        }
        if (s.contains("threads")) cfg.sweep.threads = unsigned_integer(s.at("threads"), "sweep.threads");
    }
    require(cfg.sweep.lambda_min > 0.0 && cfg.sweep.lambda_min < cfg.sweep.lambda_max && cfg.sweep.lambda_max < 1.0,
            "sweep: need 0 < lambda_min < lambda_max < 1");
    require(cfg.sweep.tol > 0.0 && cfg.sweep.tol < 1e-2, "sweep.tol must lie in (0, 1e-2)");

    if (doc.contains("simulate")) {
        const json& s = doc.at("simulate");
        reject_unknown(s, "simulate", {"depth", "H", "N_min", "N_max", "seed"});
        if (s.contains("depth")) cfg.simulate.depth = unsigned_integer(s.at("depth"), "simulate.depth");
        if (s.contains("H")) cfg.simulate.H = number(s, "H", "simulate");
        if (s.contains("N_min")) cfg.simulate.N_min = unsigned_integer(s.at("N_min"), "simulate.N_min");
        if (s.contains("N_max")) cfg.simulate.N_max = unsigned_integer(s.at("N_max"), "simulate.N_max");
        if (s.contains("seed")) cfg.simulate.seed = unsigned_integer(s.at("seed"), "simulate.seed");
    }
    require(cfg.simulate.depth >= 1 && cfg.simulate.depth <= 10'000'000, "simulate.depth must lie in [1, 1e7]");
    require(cfg.simulate.H > 0.0, "simulate.H must be positive");
    require(cfg.simulate.N_min.has_value() == cfg.simulate.N_max.has_value(),
            "simulate: give both N_min and N_max or neither");
    if (cfg.simulate.N_min) require(*cfg.simulate.N_min <= *cfg.simulate.N_max, "simulate: N_min > N_max");

    if (doc.contains("geometry")) {
        const json& g = doc.at("geometry");
        reject_unknown(g, "geometry", {"depth_cap", "seed"});
        if (g.contains("depth_cap")) cfg.geometry.depth_cap = unsigned_integer(g.at("depth_cap"), "geometry.depth_cap");
        if (g.contains("seed")) cfg.geometry.seed = unsigned_integer(g.at("seed"), "geometry.seed");
    }
    require(cfg.geometry.depth_cap >= 1 && cfg.geometry.depth_cap <= 20, "geometry.depth_cap must lie in [1, 20]");
    return cfg;
}

}  // namespace

const ParamDistribution& RunConfig::require_distribution() const {
    if (!distribution) throw ConfigError("config: this command needs a \"distribution\" section");
    return *distribution;
}

void RunConfig::override_seed(std::uint64_t seed) {
    gcurve.seed = seed;
    simulate.seed = seed;
    geometry.seed = seed;
}

RunConfig parse_config(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    try {
        return parse(doc);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

}  // namespace moran::cli
