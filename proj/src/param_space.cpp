#include "moran/param_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "moran/errors.hpp"

namespace moran {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

Bounds default_bounds(const DistributionVariant& variant, const BoundsOverrides& overrides) {
    double ratio_inf = std::numeric_limits<double>::infinity();
    std::map<std::size_t, double> sums;
    auto absorb = [&](const Atom& atom) {
        for (double r : atom.ratios) ratio_inf = std::min(ratio_inf, r);
        auto& s = sums[atom.children()];
        s = std::max(s, sum(atom.ratios));
    };
    std::visit(overloaded{
                   [&](const PointMass& pm) { absorb(pm.atom); },
                   [&](const FiniteMixture& fm) {
                       for (std::size_t i = 0; i < fm.atoms.size(); ++i)
                           if (i >= fm.weights.size() || fm.weights[i] > 0.0) absorb(fm.atoms[i]);
                   },
                   [&](const UniformP& u) {
                       ratio_inf = std::min(u.a, u.b);
                       sums[2] = u.a + u.b;
                   },
               },
               variant);

    Bounds bounds;
    if (overrides.B) {
        for (auto& [k, s] : sums) s = *overrides.B;
        bounds.B = *overrides.B;
    } else {
        bounds.B = 0.0;
        for (const auto& [k, s] : sums) bounds.B = std::max(bounds.B, s);
    }
    bounds.sum_bounds = sums;
    bounds.A = overrides.A.value_or(0.99 * ratio_inf);

    if (overrides.tau) {
        bounds.tau = *overrides.tau;
    } else {
        // Children laid out with equal gaps inside the parent.
        bounds.tau = 1.0;
        for (const auto& [k, s] : sums)
            if (k >= 2) bounds.tau = std::min(bounds.tau, (1.0 - s) / static_cast<double>(k - 1));
    }
    if (bounds.B > 0.0 && bounds.B < 1.0 && bounds.tau > 0.0 && bounds.tau < 1.0)
        bounds.L = derive_L(bounds.B, bounds.tau);
    return bounds;
}

void validate_bounds(const Bounds& b) {
    if (!(b.A > 0.0)) throw ConstraintViolation("bounds.A", std::nullopt, "A must be positive");
    if (!(b.B < 1.0)) throw ConstraintViolation("bounds.B", std::nullopt, "B must be < 1 (got " + std::to_string(b.B) + ")");
    if (!(b.A < b.B)) throw ConstraintViolation("bounds.A", std::nullopt, "requires A < B");
    if (!(b.tau > 0.0 && b.tau < 1.0)) throw ConstraintViolation("bounds.tau", std::nullopt, "tau must lie in (0,1)");
    if (b.L != derive_L(b.B, b.tau))
        throw ConstraintViolation("bounds.L", std::nullopt, "L is not the minimal integer with 2 B^(L-1) <= tau");
    for (const auto& [k, s] : b.sum_bounds)
        if (!(s > 0.0 && s <= b.B))
            throw ConstraintViolation("bounds.B", std::nullopt, "per-child-count sum bound outside (0, B]");
}

void validate_atom(const Atom& atom, const Bounds& bounds, std::optional<std::size_t> index) {
    const std::size_t k = atom.children();
    if (k < 2) throw ConstraintViolation("ratios", index, "an atom needs at least 2 children");
    if (atom.probs.size() != k) throw ConstraintViolation("probs", index, "ratios and probs differ in length");

    for (double p : atom.probs)
        if (!(p > 0.0 && p < 1.0)) throw ConstraintViolation("probs", index, "each probability must lie strictly in (0,1)");
    if (std::abs(sum(atom.probs) - 1.0) > kNormalizationTolerance)
        throw ConstraintViolation("probs", index, "probabilities must sum to 1");

    for (double r : atom.ratios) {
        if (!(r > 0.0 && r < 1.0)) throw ConstraintViolation("ratios", index, "each ratio must lie in (0,1)");
        if (r < bounds.A) throw ConstraintViolation("ratios", index, "ratio below the lower scale bound A");
    }
    const auto it = bounds.sum_bounds.find(k);
    if (it == bounds.sum_bounds.end())
        throw ConstraintViolation("bounds.B", index, "no sum bound for atoms with " + std::to_string(k) + " children");
    const double s = sum(atom.ratios);
    if (s > it->second + kNormalizationTolerance) {
        std::ostringstream msg;
        msg << "sum of ratios " << s << " exceeds the bound " << it->second;
        throw ConstraintViolation("ratios", index, msg.str());
    }
}

}  // namespace

ParamDistribution ParamDistribution::make(DistributionVariant variant, const BoundsOverrides& overrides) {
    Bounds bounds = default_bounds(variant, overrides);
    return ParamDistribution{std::move(variant), std::move(bounds)};
}

ParamDistribution ParamDistribution::point_mass(Atom atom, const BoundsOverrides& overrides) {
    return make(PointMass{std::move(atom)}, overrides);
}

ParamDistribution ParamDistribution::finite_mixture(std::vector<double> weights, std::vector<Atom> atoms,
                                                    const BoundsOverrides& overrides) {
    return make(FiniteMixture{std::move(weights), std::move(atoms)}, overrides);
}

ParamDistribution ParamDistribution::uniform_p(double a, double b, const BoundsOverrides& overrides) {
    return make(UniformP{a, b}, overrides);
}

ParamDistribution ParamDistribution::two_point(double a, double b, double p, const BoundsOverrides& overrides) {
    return finite_mixture({0.5, 0.5}, {Atom{{a, b}, {p, 1.0 - p}}, Atom{{a, b}, {1.0 - p, p}}}, overrides);
}

std::string ParamDistribution::describe() const {
    std::ostringstream out;
    out.precision(17);
    auto atom_str = [&](const Atom& atom) {
        out << "(ratios=[";
        for (std::size_t i = 0; i < atom.ratios.size(); ++i) out << (i ? "," : "") << atom.ratios[i];
        out << "],probs=[";
        for (std::size_t i = 0; i < atom.probs.size(); ++i) out << (i ? "," : "") << atom.probs[i];
        out << "])";
    };
    std::visit(overloaded{
                   [&](const PointMass& pm) {
                       out << "point_mass";
                       atom_str(pm.atom);
                   },
                   [&](const FiniteMixture& fm) {
                       out << "finite_mixture[";
                       for (std::size_t i = 0; i < fm.atoms.size(); ++i) {
                           out << (i ? ";" : "") << (i < fm.weights.size() ? fm.weights[i] : 0.0) << ":";
                           atom_str(fm.atoms[i]);
                       }
                       out << "]";
                   },
                   [&](const UniformP& u) { out << "uniform_p(a=" << u.a << ",b=" << u.b << ")"; },
               },
               variant);
    return out.str();
}

void validate(const ParamDistribution& dist) {
    validate_bounds(dist.bounds);
    std::visit(overloaded{
                   [&](const PointMass& pm) { validate_atom(pm.atom, dist.bounds, std::nullopt); },
                   [&](const FiniteMixture& fm) {
                       if (fm.atoms.empty()) throw ConstraintViolation("atoms", std::nullopt, "mixture has no atoms");
                       if (fm.weights.size() != fm.atoms.size())
                           throw ConstraintViolation("weights", std::nullopt, "one weight per atom required");
                       for (std::size_t i = 0; i < fm.weights.size(); ++i)
                           if (!(fm.weights[i] > 0.0)) throw ConstraintViolation("weights", i, "weights must be positive");
                       const double total = sum(fm.weights);
                       if (std::abs(total - 1.0) > kNormalizationTolerance)
                           throw ConstraintViolation("weights", std::nullopt,
                                                     "weights sum to " + std::to_string(total) + ", expected 1");
                       for (std::size_t i = 0; i < fm.atoms.size(); ++i) validate_atom(fm.atoms[i], dist.bounds, i);
                   },
                   [&](const UniformP& u) {
                       if (!(u.a > 0.0 && u.a < 1.0)) throw ConstraintViolation("a", std::nullopt, "a must lie in (0,1)");
                       if (!(u.b > 0.0 && u.b < 1.0)) throw ConstraintViolation("b", std::nullopt, "b must lie in (0,1)");
                       if (std::min(u.a, u.b) < dist.bounds.A)
                           throw ConstraintViolation("a", std::nullopt, "min(a,b) below the lower scale bound A");
                       const auto it = dist.bounds.sum_bounds.find(2);
                       if (it == dist.bounds.sum_bounds.end() || u.a + u.b > it->second + kNormalizationTolerance)
                           throw ConstraintViolation("b", std::nullopt, "a + b exceeds the upper bound B");
                   },
               },
               dist.variant);
}

int derive_L(double B, double tau) {
    if (!(B > 0.0 && B < 1.0)) throw DomainError("derive_L: B must lie in (0,1)");
    if (!(tau > 0.0 && tau < 1.0)) throw DomainError("derive_L: tau must lie in (0,1)");
    int L = 1;
    while (2.0 * std::pow(B, L - 1) > tau) ++L;
    return L;
}

Atom sample_level(const ParamDistribution& dist, RandomStream& rng) {
    return std::visit(overloaded{
                          [](const PointMass& pm) { return pm.atom; },
                          [&](const FiniteMixture& fm) {
                              const double u = rng.uniform01();
                              double cumulative = 0.0;
                              for (std::size_t i = 0; i < fm.atoms.size(); ++i) {
                                  cumulative += fm.weights[i];
                                  if (u < cumulative) return fm.atoms[i];
                              }
                              return fm.atoms.back();
                          },
                          [&](const UniformP& up) {
                              const double u = rng.uniform_open();
                              return Atom{{up.a, up.b}, {u, 1.0 - u}};
                          },
                      },
                      dist.variant);
}

std::vector<std::pair<double, const Atom*>> discrete_support(const ParamDistribution& dist) {
    std::vector<std::pair<double, const Atom*>> out;
    if (const auto* pm = std::get_if<PointMass>(&dist.variant)) {
        out.emplace_back(1.0, &pm->atom);
    } else if (const auto* fm = std::get_if<FiniteMixture>(&dist.variant)) {
        for (std::size_t i = 0; i < fm->atoms.size(); ++i)
            if (fm->weights[i] > 0.0) out.emplace_back(fm->weights[i], &fm->atoms[i]);
    }
    return out;
}

std::size_t max_children(const ParamDistribution& dist) {
    if (std::holds_alternative<UniformP>(dist.variant)) return 2;
    std::size_t k = 0;
    for (const auto& [w, atom] : discrete_support(dist)) k = std::max(k, atom->children());
    return k;
}

EssentialBounds essential_bounds(const ParamDistribution& dist) {
    EssentialBounds eb;
    if (const auto* u = std::get_if<UniformP>(&dist.variant)) {
        eb.children = {ChildBounds{u->a, u->a, 1.0, 0.0}, ChildBounds{u->b, u->b, 1.0, 0.0}};
        return eb;
    }
    constexpr double inf = std::numeric_limits<double>::infinity();
    eb.children.assign(max_children(dist), ChildBounds{inf, -inf, -inf, inf});
    for (const auto& [w, atom] : discrete_support(dist)) {
        for (std::size_t j = 0; j < atom->children(); ++j) {
            auto& c = eb.children[j];
            c.ratio_inf = std::min(c.ratio_inf, atom->ratios[j]);
            c.ratio_sup = std::max(c.ratio_sup, atom->ratios[j]);
            c.prob_sup = std::max(c.prob_sup, atom->probs[j]);
            c.prob_inf = std::min(c.prob_inf, atom->probs[j]);
        }
    }
    return eb;
}

}  // namespace moran
