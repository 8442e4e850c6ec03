#include "varic/variationality.hpp"

#include "varic/ibp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace varic {

LinDiffOpMatrix helmholtz_residual(const std::vector<Expr>& equations, const JetSpace& space)
{
    if (equations.size() != space.field_count()) throw DomainError("the residual needs one equation per field");
    const LinDiffOpMatrix fr = frechet(equations, space);
    const std::size_t n = equations.size();
    LinDiffOpMatrix r(n, std::vector<LinDiffOp>(n));
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) r[a][b] = fr[a][b] - adjoint(fr[b][a], space);
    }
    return r;
}

FunctionalForm residual_witness(const LinDiffOpMatrix& residual)
{
    FunctionalForm w(2);
    for (std::size_t a = 0; a < residual.size(); ++a) {
        for (std::size_t b = 0; b < residual[a].size(); ++b) {
            for (const auto& [j, c] : residual[a][b].terms()) {
                w.add({DeltaBasis{static_cast<int>(b), j}, DeltaBasis{static_cast<int>(a), MultiIndex(j.dims())}},
                      c / Rational(2));
            }
        }
    }
    return w;
}

// ---------------------------------------------------------------------------
// On-solutions restriction

namespace {

bool jet_free(const Expr& e) { return jet_order(e) < 0; }

}  // namespace

std::vector<SolvedEquation> solve_leading(const std::vector<Expr>& equations, const JetSpace& space)
{
    std::vector<SolvedEquation> out;
    for (std::size_t k = 0; k < equations.size(); ++k) {
        const Expr& e = equations[k];
        const int top = jet_order(e);
        std::vector<Atom> candidates;
        for (const Atom& a : jet_atoms(e)) {
            if (a.multi.order() == top) candidates.push_back(a);
        }
        bool found = false;
        // Prefer the last (greatest) candidate in the canonical order.
        for (auto it = candidates.rbegin(); it != candidates.rend() && !found; ++it) {
            const Atom& a = *it;
            if (occurs_nested(e, a)) continue;
            const Expr coeff = diff(e, a);
            if (!jet_free(coeff) || !is_invertible(coeff)) continue;
            const bool taken = std::any_of(out.begin(), out.end(), [&](const SolvedEquation& s) {
                return s.leading.index == a.index && (s.leading.multi.divides(a.multi) || a.multi.divides(s.leading.multi));
            });
            if (taken) continue;
            const Expr rest = e - coeff * Expr::from_atom(a);
            if (contains_atom(rest, a)) continue;
            out.push_back(SolvedEquation{a, -divide(rest, coeff)});
            found = true;
        }
        if (!found) {
            throw DomainError("equation " + std::to_string(k + 1) + " (" + to_string(e, space) +
                              ") is not semi-explicit: no highest-order derivative occurs linearly with an "
                              "invertible constant coefficient");
        }
    }
    return out;
}

Expr restrict_on_solutions(const Expr& e, const std::vector<SolvedEquation>& solved, const JetSpace& space)
{
    constexpr int kMaxPasses = 64;
    Expr current = e;
    for (int pass = 0; pass < kMaxPasses; ++pass) {
        Bindings b;
        for (const Atom& a : jet_atoms(current)) {
            for (const auto& s : solved) {
                if (s.leading.index != a.index || !s.leading.multi.divides(a.multi)) continue;
                b.emplace(a, total_derivative(s.rhs, a.multi - s.leading.multi, space));
                break;
            }
        }
        if (b.empty()) return current;
        current = substitute(current, b, space);
    }
    throw DomainError("on-solutions substitution does not terminate (cyclic leading derivatives)");
}

LinDiffOp restrict_on_solutions(const LinDiffOp& p, const std::vector<SolvedEquation>& solved, const JetSpace& space)
{
    LinDiffOp out;
    for (const auto& [i, c] : p.terms()) out.add(i, restrict_on_solutions(c, solved, space));
    return out;
}

LinDiffOpMatrix restrict_on_solutions(const LinDiffOpMatrix& m, const std::vector<SolvedEquation>& solved,
                                      const JetSpace& space)
{
    LinDiffOpMatrix out = m;
    for (auto& row : out) {
        for (auto& op : row) op = restrict_on_solutions(op, solved, space);
    }
    return out;
}

FunctionalForm restrict_on_solutions(const FunctionalForm& f, const std::vector<SolvedEquation>& solved,
                                     const JetSpace& space)
{
    return map_coefficients(f, [&](const Expr& c) { return restrict_on_solutions(c, solved, space); });
}

// ---------------------------------------------------------------------------

Verdict is_variational(const std::vector<Expr>& equations, const JetSpace& space, bool on_solutions,
                       const std::vector<Expr>& constraints)
{
    Verdict v;
    v.residual = helmholtz_residual(equations, space);

    // The residual must coincide with the pairing operator of rho E after
    // second-slot reduction.
    const FunctionalForm rho = fed(FunctionalForm::euler_form(equations, space));
    const LinDiffOpMatrix check = pairing_operator(reduce_second_slot(rho, space).form, space);
    for (std::size_t a = 0; a < check.size(); ++a) {
        for (std::size_t b = 0; b < check.size(); ++b) {
            if (!(check[a][b] == v.residual[a][b])) throw InvariantBreach("residual disagrees with the 2-form operator");
        }
    }

    std::vector<SolvedEquation> solved;
    if (on_solutions) {
        solved = solve_leading(constraints.empty() ? equations : constraints, space);
        v.residual = restrict_on_solutions(v.residual, solved, space);
        v.notes.push_back("residual restricted to the solution set");
    }
    v.variational = is_zero(v.residual);
    v.obstruction = residual_witness(v.residual);
    // A restricted residual is skew-adjoint only modulo the equations.
    LinDiffOpMatrix back = pairing_operator(v.obstruction, space);
    if (on_solutions) back = restrict_on_solutions(back, solved, space);
    for (std::size_t a = 0; a < back.size(); ++a) {
        for (std::size_t b = 0; b < back.size(); ++b) {
            if (!(back[a][b] == v.residual[a][b])) throw InvariantBreach("obstruction witness does not reproduce the residual");
        }
    }
    return v;
}

// ---------------------------------------------------------------------------
// Second-order Helmholtz conditions

bool SecondOrderHC::satisfied() const
{
    return std::all_of(symmetrized.begin(), symmetrized.end(), [](const HelmholtzCondition& c) { return c.value.is_zero(); });
}

SecondOrderHC second_order_HC(const std::vector<Expr>& equations, const JetSpace& space)
{
    if (space.dims() != 1) throw DomainError("second-order Helmholtz conditions need a single base coordinate");
    if (equations.size() != space.field_count()) throw DomainError("one equation per field is required");
    for (const auto& e : equations) {
        if (jet_order(e) > 2) throw DomainError("second-order Helmholtz conditions need equations of order <= 2");
    }
    const std::size_t n = equations.size();
    auto d = [&](std::size_t i, std::size_t j, int k) {
        return diff(equations[i], Expr::jet(static_cast<int>(j), MultiIndex(std::vector<int>{k})));
    };
    auto dt = [&](const Expr& e) { return total_derivative(e, 0, space); };
    SecondOrderHC out;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i < j) {
                out.antisymmetrized.push_back({1, i, j, d(i, j, 0) - d(j, i, 0)});
                out.antisymmetrized.push_back({2, i, j, (d(i, j, 1) - dt(d(i, j, 2))) - (d(j, i, 1) - dt(d(j, i, 2)))});
                out.antisymmetrized.push_back({3, i, j, d(i, j, 2) - d(j, i, 2)});
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            if (i < j) out.symmetrized.push_back({1, i, j, d(i, j, 2) - d(j, i, 2)});
            out.symmetrized.push_back(
                {2, i, j, (d(i, j, 1) + d(j, i, 1) - dt(d(i, j, 2) + d(j, i, 2))) / Rational(2)});
            if (i < j) {
                out.symmetrized.push_back(
                    {3, i, j, d(i, j, 0) - d(j, i, 0) - dt(d(i, j, 1) - d(j, i, 1)) / Rational(2)});
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Gateaux check

namespace {

bool base_polynomial(const Expr& e)
{
    for (const auto& [m, c] : e.terms()) {
        for (const auto& [a, n] : m) {
            if (a.kind != AtomKind::Base || n < 0) return false;
        }
    }
    return true;
}

Rational power(const Rational& x, int n)
{
    Rational out = 1;
    for (int k = 0; k < n; ++k) out *= x;
    return out;
}

Rational integrate_exact(const Expr& e, const std::vector<std::pair<Rational, Rational>>& box)
{
    Rational total = 0;
    for (const auto& [m, c] : e.terms()) {
        std::vector<int> exps(box.size(), 0);
        for (const auto& [a, n] : m) exps.at(static_cast<std::size_t>(a.index)) = n;
        Rational v = c;
        for (std::size_t i = 0; i < box.size(); ++i) {
            const auto& [lo, hi] = box[i];
            v *= (power(hi, exps[i] + 1) - power(lo, exps[i] + 1)) / Rational(exps[i] + 1);
        }
        total += v;
    }
    return total;
}

struct Quadrature {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

Quadrature gauss_legendre(int n)
{
    Quadrature q;
    for (int i = 1; i <= n; ++i) {
        double x = std::cos(std::numbers::pi * (i - 0.25) / (n + 0.5));
        double dp = 0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        q.nodes.push_back(x);
        q.weights.push_back(2.0 / ((1 - x * x) * dp * dp));
    }
    return q;
}

double integrate_numeric(const Expr& e, const std::vector<std::pair<Rational, Rational>>& box)
{
    const Quadrature q = gauss_legendre(24);
    const std::size_t dims = box.size();
    std::vector<std::size_t> idx(dims, 0);
    double total = 0;
    for (;;) {
        Assignment point;
        double weight = 1;
        for (std::size_t i = 0; i < dims; ++i) {
            const double lo = box[i].first.get_d();
            const double hi = box[i].second.get_d();
            const double x = 0.5 * (hi - lo) * q.nodes[idx[i]] + 0.5 * (hi + lo);
            weight *= 0.5 * (hi - lo) * q.weights[idx[i]];
            point.emplace(*Expr::base(static_cast<int>(i)).as_atom(), Rational(x));
        }
        total += weight * eval_exact(e, point).to_double();
        std::size_t k = 0;
        while (k < dims && ++idx[k] == q.nodes.size()) idx[k++] = 0;
        if (k == dims) break;
    }
    return total;
}

Expr plug(const Expr& e, const std::vector<Expr>& section, const JetSpace& space)
{
    Bindings b;
    for (const Atom& a : jet_atoms(e)) {
        b.emplace(a, total_derivative(section.at(static_cast<std::size_t>(a.index)), a.multi, space));
    }
    return substitute(e, b);
}

std::vector<MultiIndex> indices_up_to(std::size_t dims, int order)
{
    if (order < 0) return {};
    std::vector<MultiIndex> out{MultiIndex(dims)};
    for (std::size_t k = 0; k < out.size(); ++k) {
        if (out[k].order() == order) continue;
        for (std::size_t d = 0; d < dims; ++d) {
            MultiIndex next = out[k].raised(d);
            if (std::find(out.begin(), out.end(), next) == out.end()) out.push_back(next);
        }
    }
    return out;
}

}  // namespace

GateauxReport gateaux_check(const Expr& lagrangian, const std::vector<Expr>& equations, const std::vector<Expr>& phi,
                            const std::vector<Expr>& eta, const std::vector<std::pair<Rational, Rational>>& box,
                            const Assignment& values, const JetSpace& space)
{
    if (box.size() != space.dims()) throw DomainError("box dimension differs from the number of base coordinates");
    if (phi.size() != space.field_count() || eta.size() != space.field_count() || equations.size() != space.field_count()) {
        throw DomainError("one section, variation and equation per field is required");
    }
    for (const auto& s : phi) {
        if (jet_order(s) >= 0) throw DomainError("sections must not contain jet coordinates");
    }
    JetSpace wide = space;
    wide.max_order = 64;

    // Boundary vanishing of eta and its derivatives below the Lagrangian's order.
    const int k = jet_order(lagrangian);
    for (std::size_t a = 0; a < eta.size(); ++a) {
        if (jet_order(eta[a]) >= 0) throw DomainError("variations must not contain jet coordinates");
        for (const MultiIndex& j : indices_up_to(space.dims(), k - 1)) {
            const Expr dj = total_derivative(eta[a], j, wide);
            for (std::size_t i = 0; i < space.dims(); ++i) {
                const Atom xi = *Expr::base(static_cast<int>(i)).as_atom();
                for (const Rational& end : {box[i].first, box[i].second}) {
                    if (!substitute(dj, {{xi, Expr(end)}}).is_zero()) {
                        throw DomainError("variation " + std::to_string(a + 1) +
                                          " or one of its derivatives does not vanish on the boundary");
                    }
                }
            }
        }
    }

    const Expr eps = Expr::param("%eps");
    std::vector<Expr> shifted;
    for (std::size_t a = 0; a < phi.size(); ++a) shifted.push_back(phi[a] + eps * eta[a]);
    const Atom eps_atom = *eps.as_atom();
    Expr lhs = substitute(diff(plug(lagrangian, shifted, wide), eps_atom), {{eps_atom, Expr(0)}});
    Expr rhs;
    for (std::size_t a = 0; a < equations.size(); ++a) rhs += plug(equations[a], phi, wide) * eta[a];

    Bindings params;
    for (const auto& [atom, q] : values) params.emplace(atom, Expr(q));
    lhs = substitute(lhs, params);
    rhs = substitute(rhs, params);

    GateauxReport out;
    if (base_polynomial(lhs) && base_polynomial(rhs)) {
        out.lhs_exact = integrate_exact(lhs, box);
        out.rhs_exact = integrate_exact(rhs, box);
        out.lhs = out.lhs_exact.get_d();
        out.rhs = out.rhs_exact.get_d();
        out.ok = out.lhs_exact == out.rhs_exact;
        out.message = out.ok ? "exact agreement" : "exact values differ";
        return out;
    }
    out.exact = false;
    out.lhs = integrate_numeric(lhs, box);
    out.rhs = integrate_numeric(rhs, box);
    const double scale = std::max({1.0, std::abs(out.lhs), std::abs(out.rhs)});
    out.ok = std::abs(out.lhs - out.rhs) <= 1e-9 * scale;
    out.message = out.ok ? "agreement within 1e-9" : "values differ beyond 1e-9";
    return out;
}

}  // namespace varic
