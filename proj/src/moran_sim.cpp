#include "moran/moran_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "moran/errors.hpp"
#include "moran/gfunction.hpp"

namespace moran {

namespace {

struct LevelLogs {
    std::vector<double> log_ratios;
    std::vector<double> log_probs;
};

std::vector<LevelLogs> window_logs(const Realization& real, std::size_t N, std::size_t m) {
    if (m < 1) throw WindowOutOfRange("window length must be at least 1");
    if (N + m > real.depth())
        throw WindowOutOfRange("window [" + std::to_string(N + 1) + ", " + std::to_string(N + m) +
                               "] exceeds realization depth " + std::to_string(real.depth()));
    std::vector<LevelLogs> logs(m);
    for (std::size_t j = 0; j < m; ++j) {
        const Atom& atom = real.levels[N + j];
        for (std::size_t k = 0; k < atom.children(); ++k) {
            logs[j].log_ratios.push_back(std::log(atom.ratios[k]));
            logs[j].log_probs.push_back(std::log(atom.probs[k]));
        }
    }
    return logs;
}

struct WordSums {
    double log_prob = 0.0;
    double log_ratio = 0.0;
    double ratio() const { return log_prob / log_ratio; }
};

WordSums best_word(const std::vector<LevelLogs>& logs, double psi, Selection sel) {
    WordSums s;
    for (const LevelLogs& level : logs) {
        const std::size_t k = select_child(level.log_ratios, level.log_probs, psi, sel);
        s.log_prob += level.log_probs[k];
        s.log_ratio += level.log_ratios[k];
    }
    return s;
}

// sum_j ext_k (psi log r - log p); strictly decreasing in psi.
double window_objective(const std::vector<LevelLogs>& logs, double psi, Extremum mode) {
    double total = 0.0;
    for (const LevelLogs& level : logs) {
        double ext = mode == Extremum::sup ? -std::numeric_limits<double>::infinity()
                                           : std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < level.log_ratios.size(); ++k) {
            const double v = psi * level.log_ratios[k] - level.log_probs[k];
            ext = mode == Extremum::sup ? std::max(ext, v) : std::min(ext, v);
        }
        total += ext;
    }
    return total;
}

double bisect_window(const std::vector<LevelLogs>& logs, Extremum mode) {
    // Any word's ratio lies between the extreme per-child ratios.
    double hi = 0.0;
    for (const LevelLogs& level : logs)
        for (std::size_t k = 0; k < level.log_ratios.size(); ++k)
            hi = std::max(hi, level.log_probs[k] / level.log_ratios[k]);
    double lo = 0.0;
    hi += 1.0;
    for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
        const double mid = 0.5 * (lo + hi);
        (window_objective(logs, mid, mode) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

void enumerate_words(const std::vector<LevelLogs>& logs, std::size_t level, WordSums acc, WindowExtremes& out) {
    if (level == logs.size()) {
        const double r = acc.ratio();
        out.sup = std::max(out.sup, r);
        out.inf = std::min(out.inf, r);
        return;
    }
    const LevelLogs& l = logs[level];
    for (std::size_t k = 0; k < l.log_ratios.size(); ++k)
        enumerate_words(logs, level + 1, WordSums{acc.log_prob + l.log_probs[k], acc.log_ratio + l.log_ratios[k]},
                        out);
}

}  // namespace

std::string_view to_string(Regime regime) {
    switch (regime) {
        case Regime::large_phi_upper: return "large_phi_upper";
        case Regime::large_phi_lower: return "large_phi_lower";
        case Regime::small_phi_upper: return "small_phi_upper";
        case Regime::small_phi_lower: return "small_phi_lower";
    }
    return "unknown";
}

Realization generate(const ParamDistribution& dist, std::size_t depth, std::uint64_t seed) {
    if (depth < 1) throw DomainError("generate: depth must be at least 1");
    validate(dist);
    Realization real;
    real.seed = seed;
    real.dist_id = dist.describe();
    real.bounds = dist.bounds;
    real.levels.reserve(depth);
    for (std::size_t n = 1; n <= depth; ++n) {
        RandomStream stream = RandomStream::derive(seed, n);
        real.levels.push_back(sample_level(dist, stream));
    }
    return real;
}

IntervalGeometry interval_geometry(const Realization& real, const IntervalAddress& addr) {
    if (addr.size() > real.depth()) throw DomainError("interval_geometry: address deeper than the realization");
    IntervalGeometry g;
    for (std::size_t j = 0; j < addr.size(); ++j) {
        const Atom& atom = real.levels[j];
        const std::uint32_t v = addr.digits[j];
        if (v >= atom.children()) throw DomainError("interval_geometry: digit out of range at level " + std::to_string(j + 1));
        g.log_length += std::log(atom.ratios[v]);
        g.log_mass += std::log(atom.probs[v]);
    }
    g.length = std::exp(g.log_length);
    g.mass = std::exp(g.log_mass);
    return g;
}

double window_extremal_ratio(const Realization& real, std::size_t N, std::size_t m, Extremum mode) {
    const auto logs = window_logs(real, N, m);
    const Selection sel = mode == Extremum::sup ? Selection::max : Selection::min;

    // Dinkelbach: the word selected at psi has ratio strictly closer to the
    // extremum unless psi already attains it. Ratios are monotone in the
    // iteration and the word set is finite.
    double psi = best_word(logs, 0.0, sel).ratio();
    for (int iter = 0; iter < 200; ++iter) {
        const double next = best_word(logs, psi, sel).ratio();
        const bool improved = mode == Extremum::sup ? next > psi : next < psi;
        if (!improved) return psi;
        psi = next;
    }
    return bisect_window(logs, mode);
}

WindowExtremes window_brute_force(const Realization& real, std::size_t N, std::size_t m) {
    const auto logs = window_logs(real, N, m);
    double words = 1.0;
    for (const LevelLogs& l : logs) words *= static_cast<double>(l.log_ratios.size());
    if (words > static_cast<double>(1u << 24)) throw TooLarge("window_brute_force: more than 2^24 words");
    WindowExtremes out{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    enumerate_words(logs, 0, WordSums{}, out);
    return out;
}

double zeta(std::size_t N, double H, double A, double B) {
    if (N < 2) throw DomainError("zeta: N must be at least 2");
    if (!(H > 0.0)) throw DomainError("zeta: H must be positive");
    if (!(A > 0.0 && A < 1.0 && B > 0.0 && B < 1.0)) throw DomainError("zeta: A, B must lie in (0,1)");
    return H * std::log(static_cast<double>(N) * std::abs(std::log(B))) / std::abs(std::log(A));
}

std::size_t large_phi_window(std::size_t N, double H, const Bounds& bounds) {
    const double z = std::ceil(zeta(N, H, bounds.A, bounds.B));
    return z < 1.0 ? 1 : static_cast<std::size_t>(z);
}

DimensionEstimate estimate_dimension(const Realization& real, Regime regime, double H, std::size_t N_min,
                                     std::size_t N_max) {
    if (N_min > N_max) throw DomainError("estimate_dimension: N_min > N_max");
    DimensionEstimate est;
    est.regime = regime;
    est.H = H;
    est.N_min = N_min;
    est.N_max = N_max;
    est.depth = real.depth();

    const bool upper = regime == Regime::large_phi_upper || regime == Regime::small_phi_upper;
    const Extremum mode = upper ? Extremum::sup : Extremum::inf;
    double value = upper ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
    auto absorb = [&](double r) { value = upper ? std::max(value, r) : std::min(value, r); };

    if (regime == Regime::large_phi_upper || regime == Regime::large_phi_lower) {
        if (N_min < 2) throw DomainError("estimate_dimension: large-Phi windows need N_min >= 2");
        const std::size_t deepest = N_max + large_phi_window(N_max, H, real.bounds);
        if (deepest > real.depth())
            throw InsufficientDepth("estimate_dimension: need depth " + std::to_string(deepest) + ", have " +
                                    std::to_string(real.depth()));
        for (std::size_t N = N_min; N <= N_max; ++N)
            absorb(window_extremal_ratio(real, N, large_phi_window(N, H, real.bounds), mode));
    } else {
        if (N_max + kSmallPhiMaxWindow > real.depth())
            throw InsufficientDepth("estimate_dimension: need depth " + std::to_string(N_max + kSmallPhiMaxWindow) +
                                    ", have " + std::to_string(real.depth()));
        for (std::size_t N = N_min; N <= N_max; ++N)
            for (std::size_t m = 1; m <= kSmallPhiMaxWindow; ++m) absorb(window_extremal_ratio(real, N, m, mode));
    }
    est.value = value;
    return est;
}

AnchorRange default_anchor_range(const Realization& real, Regime regime, double H) {
    const std::size_t depth = real.depth();
    AnchorRange range;
    if (regime == Regime::small_phi_upper || regime == Regime::small_phi_lower) {
        if (depth < kSmallPhiMaxWindow) throw InsufficientDepth("default_anchor_range: realization too shallow");
        range.N_min = 0;
        range.N_max = depth - kSmallPhiMaxWindow;
        return range;
    }
    range.N_min = std::max<std::size_t>(2, depth / 4);
    if (range.N_min + large_phi_window(range.N_min, H, real.bounds) > depth)
        throw InsufficientDepth("default_anchor_range: no large-Phi window fits in depth " + std::to_string(depth));
    // Windows grow with N, so the feasible anchors form an interval.
    std::size_t lo = range.N_min, hi = depth;
    while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        (mid + large_phi_window(mid, H, real.bounds) <= depth ? lo : hi) = mid;
    }
    range.N_max = lo;
    return range;
}

IntervalAddress extremal_branch(const Realization& real, double theta, std::size_t depth) {
    if (depth > real.depth()) throw WindowOutOfRange("extremal_branch: depth exceeds the realization");
    IntervalAddress addr;
    addr.digits.reserve(depth);
    for (std::size_t j = 0; j < depth; ++j)
        addr.digits.push_back(static_cast<std::uint32_t>(select_child(real.levels[j], theta, Selection::max)));
    return addr;
}

std::vector<Interval> emit_intervals(const Realization& real, std::size_t depth_cap) {
    if (depth_cap > kMaxEmitDepth) throw DomainError("emit_intervals: depth_cap is limited to 20");
    if (depth_cap > real.depth()) throw DomainError("emit_intervals: depth_cap exceeds the realization depth");
    for (std::size_t j = 0; j < depth_cap; ++j)
        if (real.levels[j].children() != 2)
            throw UnsupportedGeometry("emit_intervals: level " + std::to_string(j + 1) + " has " +
                                      std::to_string(real.levels[j].children()) + " children; only K = 2 is embedded");

    std::vector<Interval> out;
    std::vector<Interval> current{Interval{0, 0.0, 1.0, 1.0}};
    for (std::size_t j = 0; j < depth_cap; ++j) {
        const Atom& atom = real.levels[j];
        std::vector<Interval> next;
        next.reserve(current.size() * 2);
        for (const Interval& parent : current) {
            const double len = parent.right - parent.left;
            next.push_back({j + 1, parent.left, parent.left + atom.ratios[0] * len, parent.mass * atom.probs[0]});
            next.push_back({j + 1, parent.right - atom.ratios[1] * len, parent.right, parent.mass * atom.probs[1]});
        }
        out.insert(out.end(), next.begin(), next.end());
        current = std::move(next);
    }
    return out;
}

}  // namespace moran
