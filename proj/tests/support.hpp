#pragma once

// Test-only helpers: seeded random generators and the random-point
// evaluation oracle used to corroborate symbolic identities.

#include "varic/expr.hpp"

#include <cmath>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

namespace varic::testing {

class Rng {
public:
    explicit Rng(std::uint64_t seed = 20261017) : gen_(seed) {}

    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
    bool coin() { return integer(0, 1) == 1; }

    Rational rational(int range = 9, int max_den = 7)
    {
        Rational q(integer(-range, range), integer(1, max_den));
        q.canonicalize();
        return q;
    }

    Rational nonzero_rational(int range = 9, int max_den = 7)
    {
        Rational q;
        do q = rational(range, max_den);
        while (q == 0);
        return q;
    }

    std::mt19937_64& engine() { return gen_; }

private:
    std::mt19937_64 gen_;
};

/// Leaf atoms that need a value for evaluation: symbols and function
/// applications (composites are evaluated through their arguments).
inline void collect_leaves(const Expr& e, std::set<Atom, AtomLess>& out)
{
    for (const auto& [m, c] : e.terms()) {
        for (const auto& [a, n] : m) {
            if (a.kind == AtomKind::Exp || a.kind == AtomKind::Sin || a.kind == AtomKind::Cos) {
                collect_leaves(a.args.front(), out);
            } else {
                out.insert(a);
                for (const auto& arg : a.args) collect_leaves(arg, out);
            }
        }
    }
}

inline Assignment random_assignment(const std::vector<Expr>& exprs, Rng& rng)
{
    std::set<Atom, AtomLess> leaves;
    for (const auto& e : exprs) collect_leaves(e, leaves);
    Assignment a;
    for (const auto& leaf : leaves) a.emplace(leaf, rng.nonzero_rational());
    return a;
}

/// Evaluates a-b at `samples` random rational points; exact comparison when
/// both values are rational, 1e-9 relative tolerance otherwise.
inline bool agree_at_random_points(const Expr& a, const Expr& b, int samples, Rng& rng)
{
    for (int i = 0; i < samples; ++i) {
        const Assignment point = random_assignment({a, b}, rng);
        const Number va = eval_exact(a, point);
        const Number vb = eval_exact(b, point);
        if (va.exact() && vb.exact()) {
            if (va.rational() != vb.rational()) return false;
        } else {
            const double x = va.to_double();
            const double y = vb.to_double();
            if (std::abs(x - y) > 1e-9 * std::max({1.0, std::abs(x), std::abs(y)})) return false;
        }
    }
    return true;
}

/// Random polynomial in the jet coordinates of `space` up to `max_order`,
/// optionally with base-coordinate factors.
inline Expr random_polynomial(const JetSpace& space, Rng& rng, int max_order, int terms, int max_degree,
                              bool with_base = false)
{
    std::vector<Expr> vars;
    for (std::size_t f = 0; f < space.field_count(); ++f) {
        // Enumerate multi-indices of order <= max_order.
        std::vector<MultiIndex> frontier{space.zero_index()};
        std::set<std::vector<int>> seen{space.zero_index().counts()};
        for (std::size_t k = 0; k < frontier.size(); ++k) {
            vars.push_back(space.u(f, frontier[k]));
            if (frontier[k].order() == max_order) continue;
            for (std::size_t d = 0; d < space.dims(); ++d) {
                MultiIndex next = frontier[k].raised(d);
                if (seen.insert(next.counts()).second) frontier.push_back(next);
            }
        }
    }
    if (with_base) {
        for (std::size_t i = 0; i < space.dims(); ++i) vars.push_back(space.x(i));
    }
    Expr out;
    for (int t = 0; t < terms; ++t) {
        Expr m(rng.nonzero_rational(5, 3));
        const int degree = rng.integer(0, max_degree);
        for (int d = 0; d < degree; ++d) m *= vars[static_cast<std::size_t>(rng.integer(0, static_cast<int>(vars.size()) - 1))];
        out += m;
    }
    return out;
}

/// Exact integral over the unit box [0,1]^dims of a polynomial in base
/// coordinates with rational coefficients. Independent of library code.
inline Rational integrate_unit_box(const Expr& e)
{
    Rational total = 0;
    for (const auto& [m, c] : e.terms()) {
        Rational v = c;
        for (const auto& [a, n] : m) {
            if (a.kind != AtomKind::Base || n < 0) throw std::runtime_error("integrand is not a base polynomial");
            v /= Rational(n + 1);
        }
        total += v;
    }
    return total;
}

/// Replaces every jet coordinate u^a_I in `e` by the corresponding partial
/// derivative of the section `phi[a]` (polynomials in base coordinates).
inline Expr plug_section(const Expr& e, const std::vector<Expr>& phi)
{
    Bindings b;
    for (const Atom& a : jet_atoms(e)) {
        Expr v = phi.at(static_cast<std::size_t>(a.index));
        for (std::size_t d = 0; d < a.multi.dims(); ++d) {
            for (int r = 0; r < a.multi[d]; ++r) v = diff(v, Expr::base(static_cast<int>(d)));
        }
        b.emplace(a, v);
    }
    return substitute(e, b);
}

/// Random polynomial in base coordinates of the given total degree bound.
inline Expr random_base_polynomial(std::size_t dims, Rng& rng, int max_degree, int terms)
{
    Expr out;
    for (int k = 0; k < terms; ++k) {
        Expr m(rng.rational(5, 3));
        const int degree = rng.integer(0, max_degree);
        for (int d = 0; d < degree; ++d) m *= Expr::base(rng.integer(0, static_cast<int>(dims) - 1));
        out += m;
    }
    return out;
}

/// Bump factor prod_i x_i^k (1-x_i)^k: with k > order, every derivative up
/// to that order vanishes on the boundary of the unit box.
inline Expr bump(std::size_t dims, int k)
{
    Expr out(1);
    for (std::size_t i = 0; i < dims; ++i) {
        const Expr x = Expr::base(static_cast<int>(i));
        out *= pow(x * (1 - x), k);
    }
    return out;
}

}  // namespace varic::testing
