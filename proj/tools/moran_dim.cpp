// moran-dim: almost-sure dimensions of random 1-variable Moran measures.
//
//   moran-dim solve|gcurve|sweep|simulate|geometry --config <path> [--seed N] [--out <path>]
//
// Exit codes: 0 success, 2 configuration or validation error, 3 numeric failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "moran/cli/commands.hpp"
#include "moran/errors.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

void write_output(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw moran::ConfigError("cannot open output file " + path);
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Almost-sure Phi-dimensions of random 1-variable Moran measures", "moran-dim"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_path;
    std::string svg_path;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file")->required();
        sub->add_option("--seed", seed, "Override every seed in the config");
        sub->add_option("--out", out_path, "Output file (default: stdout)");
    };
    auto* solve = app.add_subcommand("solve", "Fixed points of G and G', small-Phi dimensions (JSON)");
    auto* gcurve = app.add_subcommand("gcurve", "G(theta) and G'(theta) over a theta grid (CSV)");
    auto* sweep = app.add_subcommand("sweep", "Upper dimension over an (a,b) grid for uniform p (CSV, optional SVG)");
    auto* simulate = app.add_subcommand("simulate", "Empirical estimates from a seeded realization (JSON)");
    auto* geometry = app.add_subcommand("geometry", "Interval coordinates and masses (CSV)");
    for (auto* sub : {solve, gcurve, sweep, simulate, geometry}) add_common(sub);
    sweep->add_option("--svg", svg_path, "Write a heatmap SVG here (overrides sweep.svg)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        moran::cli::RunConfig config = moran::cli::load_config(config_path);
        if (seed) config.override_seed(*seed);

        if (*solve) {
            write_output(moran::cli::cmd_solve(config), out_path);
        } else if (*gcurve) {
            write_output(moran::cli::cmd_gcurve(config), out_path);
        } else if (*sweep) {
            if (svg_path.empty() && config.sweep.svg) svg_path = *config.sweep.svg;
            const auto result = moran::cli::cmd_sweep(config, !svg_path.empty());
            write_output(result.csv, out_path);
            if (result.svg) write_output(*result.svg, svg_path);
        } else if (*simulate) {
            write_output(moran::cli::cmd_simulate(config), out_path);
        } else if (*geometry) {
            write_output(moran::cli::cmd_geometry(config), out_path);
        }
    } catch (const moran::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const moran::NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return kExitNumeric;
    }
    return 0;
}
