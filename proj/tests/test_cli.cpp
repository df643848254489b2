#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "moran/cli/commands.hpp"
#include "moran/cli/config.hpp"
#include "moran/cli/format.hpp"
#include "moran/cli/svg.hpp"
#include "moran/errors.hpp"

using namespace moran;
using namespace moran::cli;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

int run_binary(const std::string& args) {
    const std::string cmd = std::string(MORAN_DIM_BINARY) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string data(const std::string& name) { return std::string(MORAN_TEST_DATA) + "/" + name; }
std::string config(const std::string& name) { return std::string(MORAN_CONFIG_DIR) + "/" + name; }

const char* kThreeChildConfig = R"({
  "distribution": {
    "kind": "finite_mixture",
    "weights": [0.3333333333333333, 0.3333333333333333, 0.3333333333333334],
    "atoms": [
      { "ratios": [0.25, 0.0625, 0.0625], "probs": [0.5, 0.25, 0.25] },
      { "ratios": [0.25, 0.0625, 0.0625], "probs": [0.25, 0.5, 0.25] },
      { "ratios": [0.25, 0.0625, 0.0625], "probs": [0.25, 0.25, 0.5] }
    ]
  },
  "gcurve": { "theta_min": 0.0, "theta_max": 1.0, "step": 0.01 }
})";

}  // namespace

TEST_CASE("format_double uses 17 significant digits") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-2.5) == "-2.5");
    CHECK(format_double(1e-20) == "9.9999999999999995e-21");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("CsvWriter lays out header and rows") {
    CsvWriter w({"x", "y"});
    w.cell(0.5).cell(std::size_t{3});
    w.end_row();
    CHECK(w.str() == "x,y\n0.5,3\n");
}

TEST_CASE("config parsing rejects unknown keys and bad values") {
    CHECK_THROWS_AS(parse_config(R"({"distribution": {"kind": "uniform_p", "a": 0.25, "b": 0.5, "c": 1}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"distribution": {"kind": "uniform_p", "a": 0.25, "b": 0.5}, "extra": 1})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"distribution": {"kind": "beta", "a": 0.25}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"distribution": {"kind": "point_mass", "ratios": [0.6, 0.6], "probs": [0.5, 0.5]}})"),
                    ConstraintViolation);
    CHECK_THROWS_AS(parse_config(R"({"solve": {"tol": -1}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"simulate": {"depth": "deep"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config("{ not json"), ConfigError);
    CHECK_THROWS_AS(parse_config("{}").require_distribution(), ConfigError);
}

TEST_CASE("config parsing fills settings") {
    const RunConfig cfg = parse_config(R"({
      "distribution": {"kind": "uniform_p", "a": 0.25, "b": 0.5},
      "bounds": {"A": 0.1, "B": 0.8},
      "simulate": {"depth": 1000, "H": 32, "N_min": 10, "N_max": 20, "seed": 5},
      "sweep": {"a": {"min": 0.1, "max": 0.5, "n": 5}}
    })");
    const ParamDistribution& dist = cfg.require_distribution();
    CHECK(dist.bounds.A == 0.1);
    CHECK(dist.bounds.B == 0.8);
    CHECK(cfg.simulate.depth == 1000);
    CHECK(cfg.simulate.H == 32.0);
    CHECK(*cfg.simulate.N_min == 10);
    CHECK(*cfg.simulate.N_max == 20);
    CHECK(cfg.simulate.seed == 5);
    CHECK(cfg.sweep.a.n == 5);
    CHECK(cfg.sweep.b.n == 48);

    RunConfig copy = cfg;
    copy.override_seed(99);
    CHECK(copy.simulate.seed == 99);
    CHECK(copy.gcurve.seed == 99);
    CHECK(copy.geometry.seed == 99);
}

TEST_CASE("solve report for uniform p") {
    const auto report = nlohmann::json::parse(cmd_solve(load_config(config("uniform_p.json"))));
    CHECK(report["upper_large"].get<double>() == doctest::Approx(1.8056452275).epsilon(1e-9));
    CHECK(report["upper_small"] == "inf");
    CHECK(report["lower_small"].get<double>() == 0.0);
    CHECK(report["crossing"]["upper"]["kind"] == "fixed_point");
    CHECK(report["crossing"]["upper"]["sign_pattern_ok"] == true);
    CHECK(report["crossing"]["lower"]["sign_pattern_ok"] == true);
}

TEST_CASE("solve report for the two-point model") {
    const auto report = nlohmann::json::parse(cmd_solve(load_config(config("two_point.json"))));
    CHECK(report["upper_large"].get<double>() == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    CHECK(report["upper_small"].get<double>() == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(report["lower_small"].get<double>() == doctest::Approx(std::log(0.75) / std::log(0.25)).epsilon(1e-14));
}

TEST_CASE("gcurve for the three-child mixture is piecewise constant") {
    const auto rows = parse_csv(cmd_gcurve(parse_config(kThreeChildConfig)));
    REQUIRE(rows.size() == 102);
    CHECK(rows[0] == std::vector<std::string>{"theta", "g_upper", "g_lower"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double theta = std::stod(rows[i][0]);
        const double g = std::stod(rows[i][1]);
        CHECK(theta == doctest::Approx(static_cast<double>(i - 1) * 0.01));
        CHECK(g == doctest::Approx(theta < 0.5 ? 0.75 : 5.0 / 6.0).epsilon(1e-12));
    }
}

TEST_CASE("gcurve of a symmetric point mass is constant") {
    const RunConfig cfg = load_config(config("symmetric.json"));
    const auto rows = gcurve_rows(cfg.require_distribution(), cfg.gcurve);
    for (const auto& row : rows) {
        CHECK(row.g_upper == doctest::Approx(std::log(2.0) / std::log(3.0)).epsilon(1e-14));
        CHECK(row.g_lower == doctest::Approx(std::log(2.0) / std::log(3.0)).epsilon(1e-14));
    }
}

TEST_CASE("gcurve at the uniform p fixed point") {
    GcurveSettings g;
    const double theta = uniformp_closed_form(0.25, 0.5);
    g.theta_min = theta;
    g.theta_max = theta;
    const auto rows = gcurve_rows(ParamDistribution::uniform_p(0.25, 0.5), g);
    REQUIRE(rows.size() == 1);
    CHECK(std::abs(rows[0].g_upper - theta) <= 1e-9);
}

TEST_CASE("gcurve Monte Carlo columns") {
    RunConfig cfg = load_config(config("uniform_p.json"));
    cfg.gcurve.theta_max = 1.0;
    cfg.gcurve.step = 0.25;
    cfg.gcurve.mc_samples = 20000;
    const std::string first = cmd_gcurve(cfg);
    CHECK(first == cmd_gcurve(cfg));
    const auto rows = parse_csv(first);
    CHECK(rows[0].size() == 5);
    CHECK(rows[0][3] == "g_mc_upper");
    for (std::size_t i = 1; i < rows.size(); ++i)
        CHECK(std::abs(std::stod(rows[i][3]) - std::stod(rows[i][1])) <= 5.0 * std::stod(rows[i][4]));
}

TEST_CASE("sweep omits nodes outside the constraint set and is deterministic") {
    RunConfig cfg;
    cfg.sweep.a = AxisSpec{0.02, 0.96, 12};
    cfg.sweep.b = AxisSpec{0.02, 0.96, 12};
    cfg.sweep.threads = 3;
    const SweepOutput out = cmd_sweep(cfg, true);
    cfg.sweep.threads = 1;
    CHECK(out.csv == cmd_sweep(cfg, true).csv);
    const auto rows = parse_csv(out.csv);
    CHECK(rows[0] == std::vector<std::string>{"a", "b", "alpha"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double a = std::stod(rows[i][0]), b = std::stod(rows[i][1]);
        CHECK(a + b <= 0.98 + 1e-12);
        CHECK(std::stod(rows[i][2]) == doctest::Approx(uniformp_closed_form(a, b)).epsilon(1e-8));
    }
    REQUIRE(out.svg.has_value());
    const std::string& svg = *out.svg;
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.rfind("</svg>") != std::string::npos);
    std::size_t rects = 0;
    for (std::size_t pos = svg.find("<rect"); pos != std::string::npos; pos = svg.find("<rect", pos + 1)) ++rects;
    CHECK(rects >= rows.size() - 1);
}

TEST_CASE("heatmap structure") {
    const std::string svg = render_heatmap({{0.1, 0.1, 1.0}, {0.2, 0.1, 2.0}}, 0.1, 0.1, "t");
    CHECK(svg.find("<title>t</title>") != std::string::npos);
    CHECK(svg.find("#440154") != std::string::npos);  // lowest ramp stop
    CHECK(svg.find("#fde725") != std::string::npos);  // highest ramp stop
}

TEST_CASE("geometry CSV masses sum to one at every depth") {
    const auto rows = parse_csv(cmd_geometry(load_config(config("two_point.json"))));
    CHECK(rows[0] == std::vector<std::string>{"depth", "left", "right", "mass"});
    std::vector<double> mass(9, 0.0), length(9, 0.0);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const std::size_t d = std::stoul(rows[i][0]);
        mass[d] += std::stod(rows[i][3]);
        length[d] += std::stod(rows[i][2]) - std::stod(rows[i][1]);
    }
    for (std::size_t d = 1; d <= 8; ++d) {
        CHECK(mass[d] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(length[d] <= std::pow(2.0 * 0.75, static_cast<double>(d)) + 1e-12);
    }
    CHECK(rows[1] == std::vector<std::string>{"1", "0", "0.25", rows[1][3]});
}

TEST_CASE("geometry rejects three children") {
    CHECK_THROWS_AS(cmd_geometry(parse_config(kThreeChildConfig)), UnsupportedGeometry);
}

TEST_CASE("simulate report for a symmetric point mass matches theory") {
    const SimulateReport r = simulate(load_config(config("symmetric.json")).require_distribution(),
                                      load_config(config("symmetric.json")).simulate);
    REQUIRE(r.regimes.size() == 4);
    for (const auto& reg : r.regimes) CHECK(std::abs(reg.estimate.value - reg.theory) <= 1e-9);
}

TEST_CASE("binary exit codes") {
    CHECK(run_binary("solve --config " + config("uniform_p.json")) == 0);
    CHECK(run_binary("solve --config " + data("unknown_key.json")) == 2);
    CHECK(run_binary("solve --config " + data("bad_probs.json")) == 2);
    CHECK(run_binary("solve --config " + data("not_json.json")) == 2);
    CHECK(run_binary("solve --config " + data("missing_file.json")) == 2);
    CHECK(run_binary("solve") == 2);
    CHECK(run_binary("simulate --config " + data("insufficient_depth.json")) == 3);
}
