#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "moran/param_space.hpp"

namespace moran {

// One draw per level, shared by every interval at that level.
// levels[0] holds level 1.
struct Realization {
    std::vector<Atom> levels;
    std::uint64_t seed = 0;
    std::string dist_id;
    Bounds bounds;

    std::size_t depth() const noexcept { return levels.size(); }
};

// Child indices v_1 ... v_n from the root.
struct IntervalAddress {
    std::vector<std::uint32_t> digits;

    std::size_t size() const noexcept { return digits.size(); }
    bool operator==(const IntervalAddress&) const = default;
};

enum class Regime { large_phi_upper, large_phi_lower, small_phi_upper, small_phi_lower };

std::string_view to_string(Regime regime);

struct DimensionEstimate {
    double value = 0.0;
    Regime regime = Regime::large_phi_upper;
    double H = 0.0;
    std::size_t N_min = 0;
    std::size_t N_max = 0;
    std::size_t depth = 0;
};

enum class Extremum { sup, inf };

Realization generate(const ParamDistribution& dist, std::size_t depth, std::uint64_t seed);

// length and mass underflow for deep addresses; the logs do not.
struct IntervalGeometry {
    double length = 1.0;
    double mass = 1.0;
    double log_length = 0.0;
    double log_mass = 0.0;

    double local_ratio() const { return log_mass / log_length; }
};

IntervalGeometry interval_geometry(const Realization& real, const IntervalAddress& addr);

// Extremal log(mass ratio) / log(length ratio) over all descendant words of the
// window spanning levels N+1 .. N+m. Solves
//     sum_j max_k (psi log r_jk - log p_jk) = 0
// (min_k for the infimum) by Dinkelbach iteration, falling back to bisection.
double window_extremal_ratio(const Realization& real, std::size_t N, std::size_t m, Extremum mode);

struct WindowExtremes {
    double sup = 0.0;
    double inf = 0.0;
};

// Exhaustive enumeration of the same quantity; refuses more than 2^24 words.
WindowExtremes window_brute_force(const Realization& real, std::size_t N, std::size_t m);

// Window depth H log(N |log B|) / |log A| for constant H.
double zeta(std::size_t N, double H, double A, double B);

// Window length used by the large-Phi regimes at anchor N (at least one level).
std::size_t large_phi_window(std::size_t N, double H, const Bounds& bounds);

inline constexpr std::size_t kSmallPhiMaxWindow = 8;

// Windows of ceil(zeta) levels need a large H before the sup over anchors stops
// being driven by single extreme levels; see README for the convergence table.
inline constexpr double kDefaultLargePhiH = 256.0;

struct AnchorRange {
    std::size_t N_min = 0;
    std::size_t N_max = 0;
};

// Large-Phi: N from depth/4 (at least 2) to the deepest anchor whose window fits.
// Small-Phi: every anchor whose longest window fits.
// Throws InsufficientDepth when no anchor fits.
AnchorRange default_anchor_range(const Realization& real, Regime regime, double H);

DimensionEstimate estimate_dimension(const Realization& real, Regime regime, double H, std::size_t N_min,
                                     std::size_t N_max);

// Branch that follows argmax_k ratio^theta / prob at every level (lowest index on ties).
IntervalAddress extremal_branch(const Realization& real, double theta, std::size_t depth);

struct Interval {
    std::size_t depth = 0;
    double left = 0.0;
    double right = 0.0;
    double mass = 0.0;
};

inline constexpr std::size_t kMaxEmitDepth = 20;

// Explicit interval-model coordinates for depths 1..depth_cap, ordered by depth
// then left to right. Requires two children at each emitted level.
std::vector<Interval> emit_intervals(const Realization& real, std::size_t depth_cap);

}  // namespace moran
