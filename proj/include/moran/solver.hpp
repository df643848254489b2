#pragma once

#include <span>

#include "moran/gfunction.hpp"
#include "moran/param_space.hpp"

namespace moran {

enum class DimensionSide { upper, lower };

enum class CrossingKind { fixed_point, jump_crossing };

struct CrossingOptions {
    double tol = 1e-9;
    double theta_start = 1.0;  // first probe when searching for the far side of the crossing
    double hard_cap = 1e6;
};

// Where G (upper) or G' (lower) crosses the diagonal.
//
// For the upper side, G(psi) >= psi on [lo, alpha) and G(psi) < psi on (alpha, hi];
// for the lower side, G'(psi) > psi to the left and G'(psi) <= psi to the right.
// `residual` is |G(alpha) - alpha| for a fixed point and the size of the jump in
// G across the bracket otherwise; `search_cap` is the probe at which the sign
// first turned.
struct CrossingResult {
    double alpha = 0.0;
    CrossingKind kind = CrossingKind::fixed_point;
    double lo = 0.0;
    double hi = 0.0;
    double residual = 0.0;
    int iterations = 0;
    double search_cap = 0.0;
};

CrossingResult find_crossing(const ParamDistribution& dist, DimensionSide side, const CrossingOptions& options = {});

// Checks the sign pattern around a crossing on `points` grid nodes each side,
// the left side over [0, lo) and the right over (hi, search_cap].
bool crossing_sign_pattern_holds(const ParamDistribution& dist, DimensionSide side, const CrossingResult& result,
                                 int points = 50);

// Root theta >= 0 of a^theta + b^theta = 1/e.
double uniformp_closed_form(double a, double b);

// Upper large-Phi dimension for fixed ratios a < b with probabilities drawn
// from {p, 1-p}, 0 < p < 1/2.
double twopoint_closed_form(double a, double b, double p);

// Small-Phi dimensions from the essential bounds; alpha_small may be +inf.
struct SmallPhiDims {
    double alpha_small = 0.0;
    double beta_small = 0.0;
};

SmallPhiDims small_phi_dims(const ParamDistribution& dist);

// Unique d > 0 with sum_j ratios[j]^d = 1.
double similarity_dimension(std::span<const double> ratios);

}  // namespace moran
