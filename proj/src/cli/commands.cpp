#include "moran/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "json.hpp"
#include "moran/cli/format.hpp"
#include "moran/cli/svg.hpp"
#include "moran/errors.hpp"

namespace moran::cli {

namespace {

using nlohmann::ordered_json;

// JSON has no infinity literal.
ordered_json number_or_inf(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

std::string_view kind_name(CrossingKind kind) {
    return kind == CrossingKind::fixed_point ? "fixed_point" : "jump_crossing";
}

ordered_json crossing_json(const CrossingResult& c, bool sign_pattern_ok) {
    ordered_json j;
    j["kind"] = kind_name(c.kind);
    j["alpha"] = c.alpha;
    j["bracket"] = {c.lo, c.hi};
    j["residual"] = c.residual;
    j["iterations"] = c.iterations;
    j["sign_pattern_ok"] = sign_pattern_ok;
    return j;
}

std::optional<double> shared_support_dimension(const ParamDistribution& dist) {
    if (const auto* u = std::get_if<UniformP>(&dist.variant)) {
        const double r[] = {u->a, u->b};
        return similarity_dimension(r);
    }
    const auto support = discrete_support(dist);
    if (support.empty()) return std::nullopt;
    const std::vector<double>& ratios = support.front().second->ratios;
    for (const auto& [w, atom] : support)
        if (atom->ratios != ratios) return std::nullopt;
    return similarity_dimension(ratios);
}

}  // namespace

SolveReport solve(const ParamDistribution& dist, const SolveSettings& settings) {
    validate(dist);
    CrossingOptions options;
    options.tol = settings.tol;
    SolveReport report;
    report.upper = find_crossing(dist, DimensionSide::upper, options);
    report.lower = find_crossing(dist, DimensionSide::lower, options);
    report.upper_sign_pattern = crossing_sign_pattern_holds(dist, DimensionSide::upper, report.upper);
    report.lower_sign_pattern = crossing_sign_pattern_holds(dist, DimensionSide::lower, report.lower);
    report.small = small_phi_dims(dist);
    report.similarity_dimension = shared_support_dimension(dist);
    return report;
}

std::string cmd_solve(const RunConfig& config) {
    const ParamDistribution& dist = config.require_distribution();
    const SolveReport r = solve(dist, config.solve);
    ordered_json j;
    j["distribution"] = dist.describe();
    j["upper_large"] = r.upper.alpha;
    j["lower_large"] = r.lower.alpha;
    j["upper_small"] = number_or_inf(r.small.alpha_small);
    j["lower_small"] = number_or_inf(r.small.beta_small);
    j["similarity_dimension"] = r.similarity_dimension ? ordered_json(*r.similarity_dimension) : ordered_json();
    j["crossing"]["upper"] = crossing_json(r.upper, r.upper_sign_pattern);
    j["crossing"]["lower"] = crossing_json(r.lower, r.lower_sign_pattern);
    return j.dump(2) + "\n";
}

std::vector<double> theta_grid(const GcurveSettings& s) {
    const auto n = static_cast<std::size_t>(std::floor((s.theta_max - s.theta_min) / s.step + 1e-9));
    std::vector<double> out;
    out.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i) out.push_back(s.theta_min + static_cast<double>(i) * s.step);
    return out;
}

std::vector<GcurveRow> gcurve_rows(const ParamDistribution& dist, const GcurveSettings& settings) {
    validate(dist);
    const auto thetas = theta_grid(settings);
    std::vector<GcurveRow> rows;
    rows.reserve(thetas.size());
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        GcurveRow row;
        row.theta = thetas[i];
        row.g_upper = g_analytic(dist, row.theta, Selection::max).value;
        row.g_lower = g_analytic(dist, row.theta, Selection::min).value;
        if (settings.mc_samples > 0) {
            const auto mc = g_monte_carlo(dist, row.theta, Selection::max, settings.mc_samples,
                                          splitmix64(settings.seed ^ splitmix64(i)));
            row.g_mc_upper = mc.value;
            row.mc_stderr = mc.std_error;
        }
        rows.push_back(row);
    }
    return rows;
}

std::string cmd_gcurve(const RunConfig& config) {
    const auto rows = gcurve_rows(config.require_distribution(), config.gcurve);
    const bool mc = config.gcurve.mc_samples > 0;
    CsvWriter csv = mc ? CsvWriter{"theta", "g_upper", "g_lower", "g_mc_upper", "mc_stderr"}
                       : CsvWriter{"theta", "g_upper", "g_lower"};
    for (const GcurveRow& r : rows) {
        csv.cell(r.theta).cell(r.g_upper).cell(r.g_lower);
        if (mc) csv.cell(*r.g_mc_upper).cell(*r.mc_stderr);
        csv.end_row();
    }
    return csv.str();
}

std::vector<double> axis_values(const AxisSpec& axis) {
    std::vector<double> out;
    for (std::size_t i = 0; i < axis.n; ++i)
        out.push_back(axis.n == 1 ? axis.min
                                  : axis.min + (axis.max - axis.min) * static_cast<double>(i) /
                                                   static_cast<double>(axis.n - 1));
    return out;
}

std::vector<SweepRow> sweep_rows(const SweepSettings& settings) {
    constexpr double kSlack = 1e-12;
    std::vector<SweepRow> nodes;
    for (double a : axis_values(settings.a))
        for (double b : axis_values(settings.b))
            if (std::min(a, b) >= settings.lambda_min - kSlack && a + b <= settings.lambda_max + kSlack)
                nodes.push_back({a, b, 0.0});

    CrossingOptions options;
    options.tol = settings.tol;
    std::size_t workers = settings.threads ? settings.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, std::max<std::size_t>(1, nodes.size()));

    // Each node is independent; a worker owns a strided subset and writes only its slots.
    std::vector<std::exception_ptr> errors(workers);
    auto work = [&](std::size_t w) {
        try {
            for (std::size_t i = w; i < nodes.size(); i += workers)
                nodes[i].alpha =
                    find_crossing(ParamDistribution::uniform_p(nodes[i].a, nodes[i].b), DimensionSide::upper, options)
                        .alpha;
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return nodes;
}

SweepOutput cmd_sweep(const RunConfig& config, bool want_svg) {
    const auto rows = sweep_rows(config.sweep);
    CsvWriter csv{"a", "b", "alpha"};
    for (const SweepRow& r : rows) csv.cell(r.a).cell(r.b).cell(r.alpha).end_row();

    SweepOutput out{csv.str(), std::nullopt};
    if (want_svg) {
        std::vector<HeatCell> cells;
        for (const SweepRow& r : rows) cells.push_back({r.a, r.b, r.alpha});
        auto spacing = [](const AxisSpec& ax) { return ax.n > 1 ? (ax.max - ax.min) / static_cast<double>(ax.n - 1) : 1.0; };
        out.svg = render_heatmap(cells, spacing(config.sweep.a), spacing(config.sweep.b),
                                 "Upper large-Phi dimension over (a, b), p uniform");
    }
    return out;
}

SimulateReport simulate(const ParamDistribution& dist, const SimulateSettings& settings, double tol) {
    const Realization real = generate(dist, settings.depth, settings.seed);

    CrossingOptions options;
    options.tol = tol;
    const double upper = find_crossing(dist, DimensionSide::upper, options).alpha;
    const double lower = find_crossing(dist, DimensionSide::lower, options).alpha;
    const SmallPhiDims small = small_phi_dims(dist);

    SimulateReport report;
    report.distribution = dist.describe();
    report.depth = settings.depth;
    report.seed = settings.seed;

    const std::pair<Regime, double> regimes[] = {
        {Regime::large_phi_upper, upper},
        {Regime::large_phi_lower, lower},
        {Regime::small_phi_upper, small.alpha_small},
        {Regime::small_phi_lower, small.beta_small},
    };
    for (const auto& [regime, theory] : regimes) {
        const bool large = regime == Regime::large_phi_upper || regime == Regime::large_phi_lower;
        AnchorRange range;
        if (settings.N_min)
            range = {*settings.N_min, *settings.N_max};
        else
            range = default_anchor_range(real, regime, settings.H);

        RegimeReport r;
        r.estimate = estimate_dimension(real, regime, settings.H, range.N_min, range.N_max);
        r.theory = theory;
        r.window_min = large ? large_phi_window(range.N_min, settings.H, real.bounds) : 1;
        r.window_max = large ? large_phi_window(range.N_max, settings.H, real.bounds) : kSmallPhiMaxWindow;
        report.regimes.push_back(r);
    }
    return report;
}

std::string cmd_simulate(const RunConfig& config) {
    const SimulateReport report = simulate(config.require_distribution(), config.simulate, config.solve.tol);
    ordered_json j;
    j["distribution"] = report.distribution;
    j["depth"] = report.depth;
    j["seed"] = report.seed;
    j["H"] = config.simulate.H;
    for (const RegimeReport& r : report.regimes) {
        ordered_json e;
        e["estimate"] = number_or_inf(r.estimate.value);
        e["theory"] = number_or_inf(r.theory);
        e["gap"] = number_or_inf(r.estimate.value - r.theory);
        e["N_min"] = r.estimate.N_min;
        e["N_max"] = r.estimate.N_max;
        e["window_min"] = r.window_min;
        e["window_max"] = r.window_max;
        j["estimates"][std::string(to_string(r.estimate.regime))] = e;
    }
    return j.dump(2) + "\n";
}

std::string cmd_geometry(const RunConfig& config) {
    const ParamDistribution& dist = config.require_distribution();
    if (max_children(dist) != 2) throw UnsupportedGeometry("geometry: only two-child distributions are embedded");
    const Realization real = generate(dist, config.geometry.depth_cap, config.geometry.seed);
    CsvWriter csv{"depth", "left", "right", "mass"};
    for (const Interval& iv : emit_intervals(real, config.geometry.depth_cap))
        csv.cell(iv.depth).cell(iv.left).cell(iv.right).cell(iv.mass).end_row();
    return csv.str();
}

}  // namespace moran::cli
