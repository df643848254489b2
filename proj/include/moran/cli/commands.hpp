#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "moran/cli/config.hpp"
#include "moran/moran_sim.hpp"
#include "moran/solver.hpp"

namespace moran::cli {

struct SolveReport {
    CrossingResult upper;
    CrossingResult lower;
    bool upper_sign_pattern = false;
    bool lower_sign_pattern = false;
    SmallPhiDims small;
    std::optional<double> similarity_dimension;  // when every level uses the same ratios
};

SolveReport solve(const ParamDistribution& dist, const SolveSettings& settings);

// JSON report.
std::string cmd_solve(const RunConfig& config);

struct GcurveRow {
    double theta = 0.0;
    double g_upper = 0.0;
    double g_lower = 0.0;
    std::optional<double> g_mc_upper;
    std::optional<double> mc_stderr;
};

std::vector<double> theta_grid(const GcurveSettings& settings);
std::vector<GcurveRow> gcurve_rows(const ParamDistribution& dist, const GcurveSettings& settings);

// CSV: theta,g_upper,g_lower[,g_mc_upper,mc_stderr]
std::string cmd_gcurve(const RunConfig& config);

struct SweepRow {
    double a = 0.0;
    double b = 0.0;
    double alpha = 0.0;
};

std::vector<double> axis_values(const AxisSpec& axis);

// Rows in grid order (a outer, b inner); nodes outside the constraint set are omitted.
std::vector<SweepRow> sweep_rows(const SweepSettings& settings);

struct SweepOutput {
    std::string csv;
    std::optional<std::string> svg;
};

SweepOutput cmd_sweep(const RunConfig& config, bool want_svg);

struct RegimeReport {
    DimensionEstimate estimate;
    double theory = 0.0;
    std::size_t window_min = 0;
    std::size_t window_max = 0;
};

struct SimulateReport {
    std::string distribution;
    std::size_t depth = 0;
    std::uint64_t seed = 0;
    std::vector<RegimeReport> regimes;  // large upper, large lower, small upper, small lower
};

SimulateReport simulate(const ParamDistribution& dist, const SimulateSettings& settings, double tol = 1e-9);

// JSON report.
std::string cmd_simulate(const RunConfig& config);

// CSV: depth,left,right,mass
std::string cmd_geometry(const RunConfig& config);

}  // namespace moran::cli
