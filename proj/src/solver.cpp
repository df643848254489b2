#include "moran/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "moran/errors.hpp"

namespace moran {

namespace {

Selection selection_for(DimensionSide side) { return side == DimensionSide::upper ? Selection::max : Selection::min; }

double g_value(const ParamDistribution& dist, DimensionSide side, double theta) {
    return g_analytic(dist, theta, selection_for(side)).value;
}

// True when theta lies on the left ("below the dimension") side of the crossing.
bool left_of_crossing(double g, double theta, DimensionSide side) {
    return side == DimensionSide::upper ? g >= theta : g > theta;
}

// Bisection for a strictly decreasing f on [lo, hi] with f(lo) > 0 > f(hi),
// run until the bracket stops shrinking in floating point.
template <class F>
double bisect_decreasing(F&& f, double lo, double hi) {
    for (int i = 0; i < 400; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (f(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

CrossingResult find_crossing(const ParamDistribution& dist, DimensionSide side, const CrossingOptions& options) {
    if (!(options.tol > 0.0)) throw DomainError("find_crossing: tol must be positive");

    auto left = [&](double theta) { return left_of_crossing(g_value(dist, side, theta), theta, side); };

    // G(0) > 0 always (both expectations are negative), so theta = 0 is on the left.
    double lo = 0.0;
    double hi = options.theta_start;
    while (left(hi)) {
        lo = hi;
        hi *= 2.0;
        if (hi > options.hard_cap)
            throw NoSignChange("G stays on or above the diagonal up to theta = " + std::to_string(options.hard_cap));
    }

    CrossingResult result;
    result.search_cap = hi;

    // Shrink well past tol so that a continuous crossing and a jump separate
    // cleanly when classified below.
    const double target = 2.0 * options.tol * 1e-3;
    int iterations = 0;
    while (hi - lo > target && iterations < 200) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (left(mid) ? lo : hi) = mid;
        ++iterations;
    }
    result.lo = lo;
    result.hi = hi;
    result.iterations = iterations;

    const double g_lo = g_value(dist, side, lo);
    const double g_hi = g_value(dist, side, hi);
    double alpha = 0.5 * (lo + hi);
    // A crossing on a flat piece of G sits exactly at the constant value.
    if (g_lo == g_hi && g_lo >= lo && g_lo <= hi) alpha = g_lo;

    const double s = std::abs(g_value(dist, side, alpha) - alpha);
    result.alpha = alpha;
    if (s <= options.tol) {
        result.kind = CrossingKind::fixed_point;
        result.residual = s;
    } else {
        result.kind = CrossingKind::jump_crossing;
        result.residual = std::abs(g_lo - g_hi);
    }
    return result;
}

bool crossing_sign_pattern_holds(const ParamDistribution& dist, DimensionSide side, const CrossingResult& result,
                                 int points) {
    for (int i = 0; i < points; ++i) {
        const double theta = result.lo * static_cast<double>(i) / points;
        if (!left_of_crossing(g_value(dist, side, theta), theta, side)) return false;
    }
    for (int i = 1; i <= points; ++i) {
        const double theta = result.hi + (result.search_cap - result.hi) * static_cast<double>(i) / points;
        if (left_of_crossing(g_value(dist, side, theta), theta, side)) return false;
    }
    return true;
}

double uniformp_closed_form(double a, double b) {
    if (!(a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0)) throw DomainError("uniformp_closed_form: a, b must lie in (0,1)");
    const double target = std::exp(-1.0);
    auto f = [&](double theta) { return std::pow(a, theta) + std::pow(b, theta) - target; };
    double hi = 1.0;
    while (f(hi) > 0.0) hi *= 2.0;
    return bisect_decreasing(f, 0.0, hi);
}

double twopoint_closed_form(double a, double b, double p) {
    if (!(p > 0.0 && p < 0.5)) throw DomainError("twopoint_closed_form: requires 0 < p < 1/2");
    if (!(a > 0.0 && a < b && b < 1.0)) throw DomainError("twopoint_closed_form: requires 0 < a < b < 1");
    const double la = std::log(a), lb = std::log(b);
    const double lp = std::log(p), lq = std::log1p(-p);
    const double beta = lb / la;
    const double eta = lp / lq;
    if (eta + 1.0 + beta - 3.0 * eta * beta >= 0.0) return (lp + lq) / (2.0 * lb);
    return lp / (0.5 * (la + lb));
}

SmallPhiDims small_phi_dims(const ParamDistribution& dist) {
    const EssentialBounds eb = essential_bounds(dist);
    SmallPhiDims out;
    out.alpha_small = 0.0;
    out.beta_small = std::numeric_limits<double>::infinity();
    for (const ChildBounds& c : eb.children) {
        if (c.prob_inf <= 0.0)
            out.alpha_small = std::numeric_limits<double>::infinity();
        else
            out.alpha_small = std::max(out.alpha_small, std::log(c.prob_inf) / std::log(c.ratio_sup));
        // log 1 = 0 gives beta = 0 when a child can carry all the mass.
        const double lower = c.prob_sup >= 1.0 ? 0.0 : std::log(c.prob_sup) / std::log(c.ratio_inf);
        out.beta_small = std::min(out.beta_small, lower);
    }
    return out;
}

double similarity_dimension(std::span<const double> ratios) {
    if (ratios.size() < 2) throw DomainError("similarity_dimension: need at least two ratios");
    double total = 0.0;
    for (double r : ratios) {
        if (!(r > 0.0 && r < 1.0)) throw DomainError("similarity_dimension: ratios must lie in (0,1)");
        total += r;
    }
    if (total >= 1.0) throw DomainError("similarity_dimension: ratios must sum to less than 1");
    auto f = [&](double d) {
        double s = -1.0;
        for (double r : ratios) s += std::pow(r, d);
        return s;
    };
    // f(0) = K - 1 > 0 and f(1) = sum - 1 < 0.
    return bisect_decreasing(f, 0.0, 1.0);
}

}  // namespace moran
