#include "varic/homotopy.hpp"

namespace varic {

namespace {

Expr center_jet(const std::vector<Expr>& center, const Atom& jet, const JetSpace& space)
{
    if (center.empty()) return Expr();
    return total_derivative(center.at(static_cast<std::size_t>(jet.index)), jet.multi, space);
}

void require_polynomial(const Expr& c, const JetSpace& space)
{
    for (const Atom& a : jet_atoms(c)) {
        if (occurs_nested(c, a)) {
            throw UnsupportedClass("homotopy integrand is not polynomial in " + atom_to_string(a, space) +
                                   " (it occurs inside a function argument)");
        }
    }
    for (const auto& [m, q] : c.terms()) {
        for (const auto& [a, n] : m) {
            if (a.kind == AtomKind::Jet && n < 0) throw UnsupportedClass("negative power of a jet coordinate");
        }
    }
}

// int_0^1 (.) ds, term by term in the exponent of s.
Expr integrate_s(const Expr& e, const Atom& s)
{
    Terms out;
    for (const auto& [m, q] : e.terms()) {
        int n = 0;
        Monomial rest;
        for (const auto& f : m) {
            if (compare(f.first, s) == 0) n = f.second;
            else rest.push_back(f);
        }
        if (n < 0) throw UnsupportedClass("homotopy integrand has a negative power of the homotopy parameter");
        Expr term = Expr(q / Rational(n + 1)) * monomial_expr(rest);
        for (const auto& [mm, qq] : term.terms()) {
            auto [it, inserted] = out.emplace(mm, qq);
            if (!inserted) it->second += qq;
        }
    }
    Terms pruned;
    for (auto& [m, q] : out) {
        if (q != 0) pruned.emplace(m, q);
    }
    return Expr::from_terms(std::move(pruned));
}

}  // namespace

Expr at_center(const Expr& e, const std::vector<Expr>& center, const JetSpace& space)
{
    Bindings b;
    for (const Atom& a : jet_atoms(e)) b.emplace(a, center_jet(center, a, space));
    return substitute(e, b);
}

FunctionalForm homotopy_H(const FunctionalForm& f, const std::vector<Expr>& center, const JetSpace& space)
{
    if (f.degree() < 1) throw DomainError("the homotopy operator acts on forms of positive degree");
    if (!center.empty() && center.size() != space.field_count()) throw DomainError("center needs one entry per field");
    for (const auto& c : center) {
        if (jet_order(c) >= 0) throw DomainError("center must not contain jet coordinates");
    }
    const Expr s = Expr::param(kHomotopyParameter);
    const Atom s_atom = *s.as_atom();

    const FunctionalForm scaled = map_coefficients(f, [&](const Expr& c) {
        require_polynomial(c, space);
        Bindings b;
        for (const Atom& a : jet_atoms(c)) {
            const Expr base = center_jet(center, a, space);
            b.emplace(a, base + s * (Expr::from_atom(a) - base));
        }
        return substitute(c, b);
    });
    const Expr weight = pow(s, f.degree() - 1);
    const FunctionalForm contracted = interior_euler(scaled, center, space);
    return map_coefficients(contracted, [&](const Expr& c) { return integrate_s(weight * c, s_atom); });
}

LagrangianResult lagrangian_from_euler(const std::vector<Expr>& equations, const std::vector<Expr>& center,
                                       const JetSpace& space, bool reduce)
{
    LagrangianResult out;
    out.verdict = is_variational(equations, space);
    if (!out.verdict.variational) throw NotVariational("the equations are not variational as they stand");
    out.raw = homotopy_H(FunctionalForm::euler_form(equations, space), center, space).as_scalar();
    out.lagrangian = out.raw;
    if (reduce) {
        ReducedLagrangian r = reduce_lagrangian_order(out.raw, space);
        out.lagrangian = r.lagrangian;
        out.ledger = std::move(r.ledger);
    }
    JetSpace wide = space;
    wide.max_order = std::max(space.max_order, 2 * std::max(jet_order(out.raw), 0));
    for (std::size_t a = 0; a < equations.size(); ++a) {
        if (!(euler_lagrange(out.lagrangian, a, wide) == equations[a])) {
            throw InvariantBreach("reconstructed Lagrangian does not reproduce equation " + std::to_string(a + 1));
        }
    }
    return out;
}

FunctionalForm antiexact_project(const FunctionalForm& f, const std::vector<Expr>& center, const JetSpace& space)
{
    if (f.degree() > 1) throw DomainError("antiexact projection is provided for degrees 0 and 1");
    return homotopy_H(fed(f), center, space);
}

bool invariance_check(const FunctionalForm& f, const std::vector<Expr>& center, const JetSpace& space)
{
    FunctionalForm lhs = homotopy_H(fed(f), center, space);
    FunctionalForm rhs = f;
    if (f.degree() == 0) {
        rhs = FunctionalForm::scalar(f.as_scalar() - at_center(f.as_scalar(), center, space));
    } else {
        lhs += fed(homotopy_H(f, center, space));
    }
    if (lhs == rhs) return true;
    const FunctionalForm diff = lhs - rhs;
    if (f.degree() == 1) return to_euler_form(diff, space).form.is_zero();
    if (f.degree() == 2) return is_zero(pairing_operator(diff, space));
    return false;
}

}  // namespace varic
