#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>

#include "moran/param_space.hpp"

namespace moran {

// max selects the child maximizing ratio^theta / prob (the upper-dimension
// variables); min selects the minimizing child (the primed, lower-dimension ones).
enum class Selection { max, min };

enum class GMethod { analytic, monte_carlo };

// Expected selected log-probability over expected selected log-ratio.
struct GEvaluation {
    double theta = 0.0;
    double ey = 0.0;
    double ez = 0.0;
    double value = 0.0;
    GMethod method = GMethod::analytic;
    std::optional<double> std_error;
    std::optional<std::size_t> n_samples;
};

struct LogPair {
    double log_prob = 0.0;
    double log_ratio = 0.0;
};

// Index of the child chosen at theta. Ties on the objective go to the lowest
// index for max and the highest for min, so for K = 2 the two selections are
// complementary at p = a^theta / (a^theta + b^theta).
std::size_t select_child(std::span<const double> log_ratios, std::span<const double> log_probs, double theta,
                         Selection mode);

std::size_t select_child(const Atom& atom, double theta, Selection mode);

// (log prob, log ratio) of the selected child.
LogPair atom_yz(const Atom& atom, double theta, Selection mode);

GEvaluation g_analytic(const ParamDistribution& dist, double theta, Selection mode);

GEvaluation g_monte_carlo(const ParamDistribution& dist, double theta, Selection mode, std::size_t n_samples,
                          std::uint64_t seed);

struct GLimits {
    double at_zero = 0.0;
    double at_infinity = 0.0;
};

GLimits g_limits(const ParamDistribution& dist, Selection mode);

}  // namespace moran
