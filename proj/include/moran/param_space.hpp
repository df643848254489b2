#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "moran/random.hpp"

namespace moran {

// One IFSP configuration: K children with scaling ratios and probabilities.
struct Atom {
    std::vector<double> ratios;
    std::vector<double> probs;

    std::size_t children() const noexcept { return ratios.size(); }
    bool operator==(const Atom&) const = default;
};

// Scale and separation constants of the construction.
//   A      lower bound for every ratio
//   B      upper bound for child-ratio sums (max over sum_bounds)
//   tau    separation: children are at least tau * |parent| apart
//   L      minimal L >= 1 with 2 B^(L-1) <= tau
//   sum_bounds[K] bounds sum(ratios) for atoms with K children (B_2 = B for the interval model)
struct Bounds {
    double A = 0.0;
    double B = 0.0;
    double tau = 0.0;
    int L = 1;
    std::map<std::size_t, double> sum_bounds;
};

struct BoundsOverrides {
    std::optional<double> A;
    std::optional<double> B;
    std::optional<double> tau;
};

struct PointMass {
    Atom atom;
};

struct FiniteMixture {
    std::vector<double> weights;
    std::vector<Atom> atoms;
};

// Fixed ratios (a, b); the first child's probability is uniform on (0,1).
struct UniformP {
    double a = 0.0;
    double b = 0.0;
};

using DistributionVariant = std::variant<PointMass, FiniteMixture, UniformP>;

struct ParamDistribution {
    DistributionVariant variant;
    Bounds bounds;

    // Builds with bounds defaulted from the support (A = 0.99 * inf ratio,
    // B_K = sup of ratio sums) unless overridden. Does not validate.
    static ParamDistribution make(DistributionVariant variant, const BoundsOverrides& overrides = {});

    static ParamDistribution point_mass(Atom atom, const BoundsOverrides& overrides = {});
    static ParamDistribution finite_mixture(std::vector<double> weights, std::vector<Atom> atoms,
                                            const BoundsOverrides& overrides = {});
    static ParamDistribution uniform_p(double a, double b, const BoundsOverrides& overrides = {});

    // Ratios (a, b) fixed, probabilities (p, 1-p) or (1-p, p) with equal likelihood.
    static ParamDistribution two_point(double a, double b, double p, const BoundsOverrides& overrides = {});

    std::string describe() const;
};

struct ChildBounds {
    double ratio_inf = 0.0;
    double ratio_sup = 0.0;
    double prob_sup = 0.0;
    double prob_inf = 0.0;
};

// Essential inf/sup of ratios and probabilities, per child index.
struct EssentialBounds {
    std::vector<ChildBounds> children;
};

inline constexpr double kNormalizationTolerance = 1e-12;

// Throws ConstraintViolation naming the first violated invariant.
void validate(const ParamDistribution& dist);

// Minimal L >= 1 with 2 B^(L-1) <= tau.
int derive_L(double B, double tau);

Atom sample_level(const ParamDistribution& dist, RandomStream& rng);

EssentialBounds essential_bounds(const ParamDistribution& dist);

// Largest child count over the support.
std::size_t max_children(const ParamDistribution& dist);

// The atoms with positive probability together with their weights. UniformP
// has no finite support and yields an empty list.
std::vector<std::pair<double, const Atom*>> discrete_support(const ParamDistribution& dist);

}  // namespace moran
