#include "varic/ibp.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace varic {

FunctionalForm divergence(const DivergenceLedger& ledger, int degree, const JetSpace& space)
{
    FunctionalForm out(degree);
    for (const auto& e : ledger) out += total_derivative(e.density, e.direction, space);
    return out;
}

namespace {

FunctionalForm single(const Wedge& w, const Expr& c)
{
    FunctionalForm f(static_cast<int>(w.size()));
    f.add(w, c);
    return f;
}

// original - D_i(density), recorded.
Rewrite subtract_divergence(const FunctionalForm& original, const FunctionalForm& density, std::size_t i,
                            const JetSpace& space)
{
    Rewrite out{original - total_derivative(density, i, space), {}};
    out.ledger.push_back(LedgerEntry{i, density});
    return out;
}

int exponent_of(const Monomial& m, const Atom& a)
{
    for (const auto& [b, n] : m) {
        if (compare(a, b) == 0) return n;
    }
    return 0;
}

}  // namespace

Rewrite shift_derivative_off_slot(const Wedge& w, const Expr& c, std::size_t slot, std::size_t i, const JetSpace& space)
{
    if (slot >= w.size()) throw DomainError("slot out of range");
    if (w[slot].index.dims() <= i || w[slot].index[i] == 0) throw DomainError("slot has no derivative in that direction");
    Wedge lowered = w;
    lowered[slot].index = lowered[slot].index.lowered(i);
    return subtract_divergence(single(w, c), single(lowered, c), i, space);
}

Rewrite integrate_factor(const Wedge& w, const Expr& monomial, const Atom& factor, std::size_t i, const JetSpace& space)
{
    if (monomial.size() != 1) throw DomainError("integrate_factor needs a single monomial");
    if (factor.kind != AtomKind::Jet || factor.multi[i] == 0) throw DomainError("factor has no derivative in that direction");
    const auto& [m, coeff] = *monomial.terms().begin();
    if (exponent_of(m, factor) != 1) throw DomainError("factor must occur linearly");
    const Atom lower{AtomKind::Jet, factor.index, factor.multi.lowered(i), {}, false, {}, {}};
    const int p = exponent_of(m, lower);
    // r = m / (u_J^p u_{J+e_i});  density = r u_J^{p+1} / (p+1)
    Monomial r;
    for (const auto& f : m) {
        if (compare(f.first, factor) == 0 || compare(f.first, lower) == 0) continue;
        r.push_back(f);
    }
    const Expr density = Expr(coeff / Rational(p + 1)) * monomial_expr(r) * pow(Expr::from_atom(lower), p + 1);
    return subtract_divergence(single(w, monomial), single(w, density), i, space);
}

namespace {

struct FormLess {
    bool operator()(const FunctionalForm& a, const FunctionalForm& b) const
    {
        if (a.degree() != b.degree()) return a.degree() < b.degree();
        return std::lexicographical_compare(
            a.terms().begin(), a.terms().end(), b.terms().begin(), b.terms().end(), [](const auto& x, const auto& y) {
                if (x.first != y.first) return x.first < y.first;
                return compare(x.second, y.second) < 0;
            });
    }
};

bool within(const FunctionalForm& f, int max_order)
{
    try {
        return form_order(f) <= max_order;
    } catch (const Error&) {
        return false;
    }
}

}  // namespace

std::vector<FunctionalForm> enumerate_representatives(const FunctionalForm& f, int max_order, const JetSpace& space,
                                                      std::size_t cap)
{
    if (f.degree() != 1) throw DomainError("representatives are enumerated for 1-forms");
    JetSpace work = space;
    work.max_order = std::max(space.max_order, max_order + 1);

    std::vector<FunctionalForm> out{f};
    std::set<FunctionalForm, FormLess> seen{f};
    std::deque<std::size_t> queue{0};
    auto visit = [&](const FunctionalForm& g) {
        if (!within(g, max_order) || !seen.insert(g).second) return;
        if (out.size() >= cap) throw LimitExceeded("more than " + std::to_string(cap) + " representatives");
        out.push_back(g);
        queue.push_back(out.size() - 1);
    };
    while (!queue.empty()) {
        const FunctionalForm current = out[queue.front()];
        queue.pop_front();
        for (const auto& [w, c] : current.terms()) {
            for (const auto& [m, q] : c.terms()) {
                Terms one;
                one.emplace(m, q);
                const Expr mono = Expr::from_terms(std::move(one));
                const FunctionalForm without = current - single(w, mono);
                for (std::size_t i = 0; i < space.dims(); ++i) {
                    if (w[0].index[i] > 0) {
                        try {
                            visit(without + shift_derivative_off_slot(w, mono, 0, i, work).form);
                        } catch (const MaxOrderExceeded&) {
                        }
                    }
                    for (const auto& [a, n] : m) {
                        if (a.kind != AtomKind::Jet || n != 1 || a.multi[i] == 0) continue;
                        try {
                            visit(without + integrate_factor(w, mono, a, i, work).form);
                        } catch (const MaxOrderExceeded&) {
                        }
                    }
                }
            }
        }
    }
    return out;
}

Rewrite to_euler_form(const FunctionalForm& f, const JetSpace& space)
{
    if (f.degree() != 1) throw DomainError("Euler form of a form that is not a 1-form");
    Rewrite out{f, {}};
    for (;;) {
        auto it = std::find_if(out.form.terms().rbegin(), out.form.terms().rend(),
                               [](const auto& t) { return t.first[0].index.order() > 0; });
        if (it == out.form.terms().rend()) return out;
        const Wedge w = it->first;
        const Expr c = it->second;
        const std::size_t i = w[0].index.directions().front();
        Rewrite step = shift_derivative_off_slot(w, c, 0, i, space);
        out.form = out.form - single(w, c) + step.form;
        out.ledger.insert(out.ledger.end(), step.ledger.begin(), step.ledger.end());
    }
}

Rewrite reduce_second_slot(const FunctionalForm& f, const JetSpace& space)
{
    if (f.degree() != 2) throw DomainError("second-slot reduction needs a 2-form");
    Rewrite out{f, {}};
    for (;;) {
        auto it = std::find_if(out.form.terms().rbegin(), out.form.terms().rend(), [](const auto& t) {
            return t.first[0].index.order() > 0 && t.first[1].index.order() > 0;
        });
        if (it == out.form.terms().rend()) return out;
        const Wedge w = it->first;
        const Expr c = it->second;
        const std::size_t slot = w[0].index.order() < w[1].index.order() ? 0 : 1;
        const std::size_t i = w[slot].index.directions().front();
        Rewrite step = shift_derivative_off_slot(w, c, slot, i, space);
        out.form = out.form - single(w, c) + step.form;
        out.ledger.insert(out.ledger.end(), step.ledger.begin(), step.ledger.end());
    }
}

namespace {

struct Candidate {
    Monomial monomial;
    Rational coefficient;
    int order;
};

int monomial_order(const Monomial& m)
{
    int out = -1;
    for (const auto& [a, n] : m) {
        if (a.kind == AtomKind::Jet) out = std::max(out, a.multi.order());
        for (const auto& arg : a.args) out = std::max(out, jet_order(arg));
    }
    return out;
}

// One accepted reduction step, or nothing.
std::optional<std::pair<Expr, LedgerEntry>> reduce_monomial(const Monomial& m, const Rational& coeff,
                                                            const JetSpace& space)
{
    const int top = monomial_order(m);
    if (top <= 0) return std::nullopt;
    for (const auto& [a, n] : m) {
        if (a.kind != AtomKind::Jet || a.multi.order() != top || n != 1) continue;
        for (std::size_t i = 0; i < space.dims(); ++i) {
            if (a.multi[i] == 0) continue;
            const Atom lower{AtomKind::Jet, a.index, a.multi.lowered(i), {}, false, {}, {}};
            const int p = exponent_of(m, lower);
            Monomial r;
            for (const auto& f : m) {
                if (compare(f.first, a) == 0 || compare(f.first, lower) == 0) continue;
                r.push_back(f);
            }
            const Expr rest = Expr(coeff) * monomial_expr(r);
            const Expr power = pow(Expr::from_atom(lower), p + 1) / Rational(p + 1);
            Expr replacement;
            try {
                replacement = -(total_derivative(rest, i, space) * power);
            } catch (const MaxOrderExceeded&) {
                continue;
            }
            if (jet_order(replacement) >= top) continue;
            return std::make_pair(replacement, LedgerEntry{i, FunctionalForm::scalar(rest * power)});
        }
    }
    return std::nullopt;
}

}  // namespace

ReducedLagrangian reduce_lagrangian_order(const Expr& lagrangian, const JetSpace& space)
{
    ReducedLagrangian out{lagrangian, {}};
    for (;;) {
        std::vector<Candidate> order;
        for (const auto& [m, c] : out.lagrangian.terms()) order.push_back(Candidate{m, c, monomial_order(m)});
        std::stable_sort(order.begin(), order.end(), [](const Candidate& a, const Candidate& b) { return a.order > b.order; });
        bool changed = false;
        for (const auto& cand : order) {
            auto step = reduce_monomial(cand.monomial, cand.coefficient, space);
            if (!step) continue;
            Terms one;
            one.emplace(cand.monomial, cand.coefficient);
            out.lagrangian = out.lagrangian - Expr::from_terms(std::move(one)) + step->first;
            out.ledger.push_back(step->second);
            changed = true;
            break;
        }
        if (!changed) return out;
    }
}

LinDiffOpMatrix pairing_operator(const FunctionalForm& f, const JetSpace& space)
{
    if (f.degree() != 2) throw DomainError("pairing operator of a form that is not a 2-form");
    const std::size_t n = space.field_count();
    LinDiffOpMatrix m(n, std::vector<LinDiffOp>(n));
    auto sandwich = [&](const MultiIndex& left, const Expr& c, const MultiIndex& right) {
        LinDiffOp op = LinDiffOp::derivative(right, c);
        for (std::size_t dir : left.directions()) op = compose_derivative(dir, op, space);
        return op;
    };
    for (const auto& [w, c] : f.terms()) {
        // c du^beta_J ^ du^alpha_I
        const auto beta = static_cast<std::size_t>(w[0].field);
        const auto alpha = static_cast<std::size_t>(w[1].field);
        const MultiIndex& J = w[0].index;
        const MultiIndex& I = w[1].index;
        const int si = I.order() % 2 == 0 ? 1 : -1;
        const int sj = J.order() % 2 == 0 ? 1 : -1;
        m[alpha][beta] += Expr(si) * sandwich(I, c, J);
        m[beta][alpha] += Expr(-sj) * sandwich(J, c, I);
    }
    return m;
}

}  // namespace varic
