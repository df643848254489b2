#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "moran/param_space.hpp"

namespace moran::cli {

inline constexpr std::uint64_t kDefaultSeed = 20140607;

struct SolveSettings {
    double tol = 1e-9;
};

struct GcurveSettings {
    double theta_min = 0.0;
    double theta_max = 5.0;
    double step = 0.01;
    std::size_t mc_samples = 0;  // 0 disables the Monte Carlo columns
    std::uint64_t seed = kDefaultSeed;
};

// Evenly spaced values min, ..., max (n of them).
struct AxisSpec {
    double min = 0.02;
    double max = 0.96;
    std::size_t n = 48;
};

// Grid over (a, b) for the uniform-p model; nodes outside
// {lambda_min <= min(a,b), a + b <= lambda_max} are omitted.
struct SweepSettings {
    AxisSpec a;
    AxisSpec b;
    double lambda_min = 1.0 / 50.0;
    double lambda_max = 49.0 / 50.0;
    double tol = 1e-9;
    std::optional<std::string> svg;
    std::size_t threads = 0;  // 0: hardware concurrency
};

struct SimulateSettings {
    std::size_t depth = 3000;
    double H = 256.0;
    std::optional<std::size_t> N_min;
    std::optional<std::size_t> N_max;
    std::uint64_t seed = kDefaultSeed;
};

struct GeometrySettings {
    std::size_t depth_cap = 10;
    std::uint64_t seed = kDefaultSeed;
};

struct RunConfig {
    std::optional<ParamDistribution> distribution;
    SolveSettings solve;
    GcurveSettings gcurve;
    SweepSettings sweep;
    SimulateSettings simulate;
    GeometrySettings geometry;

    // Throws ConfigError when no distribution section was given.
    const ParamDistribution& require_distribution() const;

    // Applies a --seed override to every seeded section.
    void override_seed(std::uint64_t seed);
};

// Parses and validates a JSON config document. Unknown keys, wrong types and
// out-of-domain values raise ConfigError (ConstraintViolation for distributions).
RunConfig parse_config(std::string_view json_text);

RunConfig load_config(const std::filesystem::path& path);

}  // namespace moran::cli
