#include "moran/gfunction.hpp"

#include <cmath>
#include <variant>
#include <vector>

#include "moran/errors.hpp"

namespace moran {

namespace {

// Relative slack for treating two objective values as tied.
constexpr double kTieTolerance = 1e-12;

bool beats(double candidate, double best, Selection mode) {
    const double slack = kTieTolerance * std::max(1.0, std::abs(best));
    return mode == Selection::max ? candidate > best + slack : candidate <= best + slack;
}

// x log x with the continuous extension at 0.
double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// a^theta / (a^theta + b^theta), stable for large theta.
double split_point(double a, double b, double theta) {
    const double t = theta * (std::log(b) - std::log(a));
    if (t >= 0.0) {
        const double e = std::exp(-t);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(t));
}

GEvaluation make_eval(double theta, double ey, double ez, GMethod method) {
    GEvaluation g;
    g.theta = theta;
    g.ey = ey;
    g.ez = ez;
    g.value = ey / ez;
    g.method = method;
    return g;
}

GEvaluation uniform_analytic(const UniformP& u, double theta, Selection mode) {
    const double c = split_point(u.a, u.b, theta);
    const double entropy = -(xlogx(c) + xlogx(1.0 - c));
    const double la = std::log(u.a);
    const double lb = std::log(u.b);
    if (mode == Selection::max) {
        // int_0^c log u du + int_c^1 log(1-u) du
        return make_eval(theta, -entropy - 1.0, c * la + (1.0 - c) * lb, GMethod::analytic);
    }
    // Complementary regions: int_c^1 log u du + int_0^c log(1-u) du.
    return make_eval(theta, entropy - 1.0, c * lb + (1.0 - c) * la, GMethod::analytic);
}

// Per-atom selection in the theta -> infinity limit: the extreme ratio wins,
// ties among equal ratios are settled by the theta-independent part -log p.
LogPair limit_selection(const Atom& atom, Selection mode) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < atom.children(); ++k) {
        const double r = atom.ratios[k], rb = atom.ratios[best];
        if (mode == Selection::max) {
            if (r > rb || (r == rb && -std::log(atom.probs[k]) > -std::log(atom.probs[best]))) best = k;
        } else {
            if (r < rb || (r == rb && -std::log(atom.probs[k]) <= -std::log(atom.probs[best]))) best = k;
        }
    }
    return {std::log(atom.probs[best]), std::log(atom.ratios[best])};
}

}  // namespace

std::size_t select_child(std::span<const double> log_ratios, std::span<const double> log_probs, double theta,
                         Selection mode) {
    std::size_t best = 0;
    double best_obj = theta * log_ratios[0] - log_probs[0];
    for (std::size_t k = 1; k < log_ratios.size(); ++k) {
        const double obj = theta * log_ratios[k] - log_probs[k];
        if (beats(obj, best_obj, mode)) {
            best = k;
            best_obj = obj;
        }
    }
    return best;
}

std::size_t select_child(const Atom& atom, double theta, Selection mode) {
    std::vector<double> lr(atom.children()), lp(atom.children());
    for (std::size_t k = 0; k < atom.children(); ++k) {
        lr[k] = std::log(atom.ratios[k]);
        lp[k] = std::log(atom.probs[k]);
    }
    return select_child(lr, lp, theta, mode);
}

LogPair atom_yz(const Atom& atom, double theta, Selection mode) {
    const std::size_t k = select_child(atom, theta, mode);
    return {std::log(atom.probs[k]), std::log(atom.ratios[k])};
}

GEvaluation g_analytic(const ParamDistribution& dist, double theta, Selection mode) {
    if (!(theta >= 0.0)) throw DomainError("g_analytic: theta must be >= 0");
    if (const auto* u = std::get_if<UniformP>(&dist.variant)) return uniform_analytic(*u, theta, mode);

    double ey = 0.0, ez = 0.0;
    for (const auto& [w, atom] : discrete_support(dist)) {
        const LogPair yz = atom_yz(*atom, theta, mode);
        ey += w * yz.log_prob;
        ez += w * yz.log_ratio;
    }
    return make_eval(theta, ey, ez, GMethod::analytic);
}

GEvaluation g_monte_carlo(const ParamDistribution& dist, double theta, Selection mode, std::size_t n_samples,
                          std::uint64_t seed) {
    if (n_samples < 100) throw DomainError("g_monte_carlo: need at least 100 samples");
    if (!(theta >= 0.0)) throw DomainError("g_monte_carlo: theta must be >= 0");

    RandomStream rng(seed);
    // Welford accumulation of means and the (Y, Z) covariance.
    double mean_y = 0.0, mean_z = 0.0, m2_y = 0.0, m2_z = 0.0, c_yz = 0.0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        const LogPair yz = atom_yz(sample_level(dist, rng), theta, mode);
        const double n = static_cast<double>(i + 1);
        const double dy = yz.log_prob - mean_y;
        const double dz = yz.log_ratio - mean_z;
        mean_y += dy / n;
        mean_z += dz / n;
        m2_y += dy * (yz.log_prob - mean_y);
        m2_z += dz * (yz.log_ratio - mean_z);
        c_yz += dy * (yz.log_ratio - mean_z);
    }
    const double n = static_cast<double>(n_samples);
    const double var_y = m2_y / (n - 1.0), var_z = m2_z / (n - 1.0), cov = c_yz / (n - 1.0);

    GEvaluation g = make_eval(theta, mean_y, mean_z, GMethod::monte_carlo);
    // Delta method for a ratio of means.
    const double r = g.value;
    const double var_ratio = (var_y - 2.0 * r * cov + r * r * var_z) / (mean_z * mean_z * n);
    g.std_error = std::sqrt(std::max(0.0, var_ratio));
    g.n_samples = n_samples;
    return g;
}

GLimits g_limits(const ParamDistribution& dist, Selection mode) {
    GLimits out;
    out.at_zero = g_analytic(dist, 0.0, mode).value;

    if (const auto* u = std::get_if<UniformP>(&dist.variant)) {
        const double la = std::log(u->a), lb = std::log(u->b);
        if (u->a == u->b) {
            const double ey = mode == Selection::max ? -std::log(2.0) - 1.0 : std::log(2.0) - 1.0;
            out.at_infinity = ey / la;
        } else {
            // The chosen child becomes deterministic; E log U = E log(1-U) = -1.
            const bool larger_is_b = u->b > u->a;
            const bool pick_b = (mode == Selection::max) == larger_is_b;
            out.at_infinity = -1.0 / (pick_b ? lb : la);
        }
        return out;
    }

    double ey = 0.0, ez = 0.0;
    for (const auto& [w, atom] : discrete_support(dist)) {
        const LogPair yz = limit_selection(*atom, mode);
        ey += w * yz.log_prob;
        ez += w * yz.log_ratio;
    }
    out.at_infinity = ey / ez;
    return out;
}

}  // namespace moran
