#include "varic/inverse.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace varic {

namespace {

using NameSet = std::set<std::string>;
using AtomSet = std::set<Atom, AtomLess>;
using BindingList = std::vector<std::pair<std::string, Expr>>;

bool is_unknown(const Atom& a, const NameSet& names)
{
    return a.kind == AtomKind::Function && names.count(a.name) > 0;
}

const FunctionDecl& decl_of(const JetSpace& space, const std::string& name)
{
    const FunctionDecl* d = space.find_function(name);
    if (d == nullptr) throw UnboundSymbol("undeclared function " + name);
    return *d;
}

// Unknown functions in `exprs`, ordered by expression, then by declaration.
std::vector<std::string> collect_unknowns(const std::vector<Expr>& exprs, const JetSpace& space)
{
    std::vector<std::string> out;
    for (const auto& e : exprs) {
        NameSet here;
        for (const Atom& a : atoms(e)) {
            if (a.kind == AtomKind::Function) here.insert(a.name);
        }
        for (const auto& f : space.functions) {
            if (f.unknown && here.count(f.name) > 0 && std::find(out.begin(), out.end(), f.name) == out.end()) {
                out.push_back(f.name);
            }
        }
    }
    return out;
}

AtomSet argument_atoms(const std::vector<std::string>& names, const JetSpace& space)
{
    AtomSet out;
    for (const auto& n : names) {
        for (const auto& arg : decl_of(space, n).args) {
            if (auto a = arg.as_atom()) out.insert(*a);
        }
    }
    return out;
}

// Splits `e` into coefficients of monomials in the key atoms. Returns the
// whole expression when a key atom sits inside a function argument.
std::vector<std::pair<Expr, Expr>> split_by_key(const Expr& e, const std::function<bool(const Atom&)>& key)
{
    for (const Atom& a : atoms(e)) {
        if (key(a) && occurs_nested(e, a)) return {{Expr(1), e}};
    }
    std::map<Monomial, Terms, MonomialLess> groups;
    for (const auto& [m, q] : e.terms()) {
        Monomial k;
        Monomial rest;
        for (const auto& f : m) (key(f.first) ? k : rest).push_back(f);
        groups[k][rest] += q;
    }
    std::vector<std::pair<Expr, Expr>> out;
    for (auto& [k, t] : groups) out.emplace_back(monomial_expr(k), Expr::from_terms(std::move(t)));
    return out;
}

std::string index_label(const MultiIndex& j, const JetSpace& space)
{
    if (j.order() == 0) return "order 0";
    return to_string(LinDiffOp::derivative(j), space);
}

std::vector<Condition> residual_conditions(const std::vector<Expr>& transformed, const std::vector<Expr>& equations,
                                           bool on_solutions, const std::vector<std::string>& unknowns,
                                           const JetSpace& space)
{
    LinDiffOpMatrix r = helmholtz_residual(transformed, space);
    std::vector<SolvedEquation> solved;
    if (on_solutions) {
        solved = solve_leading(equations, space);
        r = restrict_on_solutions(r, solved, space);
    }

    std::vector<Condition> raw;
    for (std::size_t a = 0; a < r.size(); ++a) {
        for (std::size_t b = a; b < r.size(); ++b) {
            for (const auto& [j, c] : r[a][b].terms()) {
                raw.push_back({c, "residual (" + space.fields[a] + ", " + space.fields[b] + "), " +
                                      index_label(j, space)});
            }
        }
    }

    // Drop conditions that are total derivatives of others.
    std::vector<bool> pruned(raw.size(), false);
    std::vector<Expr> norm;
    for (const auto& c : raw) norm.push_back(normalize_condition(c.expr));
    for (std::size_t i = 0; i < raw.size(); ++i) {
        for (std::size_t k = 0; k < raw.size() && !pruned[i]; ++k) {
            if (k == i || pruned[k]) continue;
            for (std::size_t dir = 0; dir < space.dims() && !pruned[i]; ++dir) {
                Expr d;
                try {
                    d = total_derivative(raw[k].expr, dir, space);
                    if (on_solutions) d = restrict_on_solutions(d, solved, space);
                } catch (const MaxOrderExceeded&) {
                    continue;
                }
                if (!d.is_zero() && normalize_condition(d) == norm[i]) pruned[i] = true;
            }
        }
    }

    const AtomSet args = argument_atoms(unknowns, space);
    const auto key = [&](const Atom& a) { return a.kind == AtomKind::Jet && args.count(a) == 0; };
    std::vector<Condition> out;
    std::set<Expr> seen;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (pruned[i]) continue;
        for (const auto& [k, c] : split_by_key(raw[i].expr, key)) {
            const Expr n = normalize_condition(c);
            if (n.is_zero() || !seen.insert(n).second) continue;
            std::string origin = raw[i].origin;
            if (!(k == Expr(1))) origin += ", coefficient of " + to_string(k, space);
            out.push_back({n, origin});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Solver

Expr determinant(const std::vector<std::vector<Expr>>& m)
{
    const std::size_t n = m.size();
    if (n == 0) return Expr(1);
    if (n == 1) return m[0][0];
    Expr det;
    for (std::size_t c = 0; c < n; ++c) {
        if (m[0][c].is_zero()) continue;
        std::vector<std::vector<Expr>> minor;
        for (std::size_t r = 1; r < n; ++r) {
            std::vector<Expr> row;
            for (std::size_t k = 0; k < n; ++k) {
                if (k != c) row.push_back(m[r][k]);
            }
            minor.push_back(std::move(row));
        }
        const Expr term = m[0][c] * determinant(minor);
        det += c % 2 == 0 ? term : -term;
    }
    return det;
}

bool has_unknown(const Expr& e, const NameSet& names)
{
    for (const Atom& a : atoms(e)) {
        if (is_unknown(a, names)) return true;
    }
    return false;
}

bool usable_pivot(const Expr& k)
{
    if (auto q = k.as_rational()) return *q != 0;
    return is_invertible(k);
}

class Solver {
public:
    Solver(JetSpace space, std::vector<std::string> unknowns)
        : space_(std::move(space)), order_(std::move(unknowns)), names_(order_.begin(), order_.end())
    {
    }

    // Returns false when the system is left unsolved; sets inconsistent_ when
    // it has no solution at all.
    bool run(std::vector<Expr> conditions)
    {
        for (int guard = 0; guard < 1000; ++guard) {
            std::vector<Expr> next;
            std::set<Expr> seen;
            for (const auto& c : conditions) {
                const Expr n = normalize_condition(apply_bindings(c, bindings_, space_));
                if (n.is_zero() || !seen.insert(n).second) continue;
                if (!has_unknown(n, names_)) {
                    if (n.as_rational()) inconsistent_ = true;
                    return false;
                }
                next.push_back(n);
            }
            conditions = std::move(next);
            if (conditions.empty()) return true;
            if (!algebraic_step(conditions) && !ode_step(conditions)) {
                remaining_ = conditions;
                return false;
            }
        }
        return false;
    }

    [[nodiscard]] bool inconsistent() const { return inconsistent_; }
    [[nodiscard]] const BindingList& bindings() const { return bindings_; }
    [[nodiscard]] const std::vector<std::string>& constants() const { return constants_; }
    [[nodiscard]] const JetSpace& space() const { return space_; }

private:
    bool algebraic_step(const std::vector<Expr>& conditions)
    {
        for (const auto& c : conditions) {
            std::map<std::string, Expr> coef;
            std::map<std::string, Expr> symbol;
            Expr rest;
            bool linear = true;
            for (const auto& [m, q] : c.terms()) {
                const Factor* hit = nullptr;
                int count = 0;
                for (const auto& f : m) {
                    if (is_unknown(f.first, names_)) {
                        hit = &f;
                        ++count;
                    } else {
                        for (const auto& arg : f.first.args) linear = linear && !has_unknown(arg, names_);
                    }
                }
                if (count == 0) {
                    rest += Expr(q) * monomial_expr(m);
                    continue;
                }
                const Atom& u = hit->first;
                const bool plain = std::all_of(u.deriv.begin(), u.deriv.end(), [](int d) { return d == 0; }) &&
                                   Expr::from_atom(u) == space_.fn(u.name);
                if (count > 1 || hit->second != 1 || !plain) {
                    linear = false;
                    break;
                }
                Monomial without;
                for (const auto& f : m) {
                    if (&f != hit) without.push_back(f);
                }
                coef[u.name] += Expr(q) * monomial_expr(without);
                symbol[u.name] = Expr::from_atom(u);
            }
            if (!linear || coef.empty()) continue;
            for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
                auto found = coef.find(*it);
                if (found == coef.end() || !usable_pivot(found->second)) continue;
                Expr others = rest;
                for (const auto& [n, k] : coef) {
                    if (n != *it) others += k * symbol[n];
                }
                const Expr value = divide(-others, found->second);
                if (!depends_only_on_arguments(value, *it)) continue;
                bindings_.emplace_back(*it, value);
                return true;
            }
        }
        return false;
    }

    bool depends_only_on_arguments(const Expr& value, const std::string& name) const
    {
        const AtomSet allowed = argument_atoms({name}, space_);
        for (const Atom& a : atoms(value)) {
            if ((a.kind == AtomKind::Base || a.kind == AtomKind::Jet) && allowed.count(a) == 0) return false;
            if (is_unknown(a, names_)) {
                for (const Atom& b : argument_atoms({a.name}, space_)) {
                    if (allowed.count(b) == 0) return false;
                }
            }
        }
        return true;
    }

    bool ode_step(const std::vector<Expr>& conditions)
    {
        for (const auto& c : conditions) {
            std::string name;
            bool ok = true;
            for (const Atom& a : atoms(c)) {
                if (!is_unknown(a, names_)) continue;
                if (!name.empty() && a.name != name) ok = false;
                name = a.name;
            }
            if (!ok || name.empty()) continue;
            const FunctionDecl& d = decl_of(space_, name);
            if (d.args.size() != 1) continue;
            const auto t = d.args.front().as_atom();
            if (!t || t->kind != AtomKind::Base) continue;

            const Expr f = space_.fn(name);
            const Expr fp = space_.fn(name, {1});
            const Atom fa = *f.as_atom();
            const Atom fpa = *fp.as_atom();
            if (occurs_nested(c, fa) || occurs_nested(c, fpa)) continue;
            Expr alpha;
            Expr beta;
            Expr gamma;
            for (const auto& [m, q] : c.terms()) {
                const Factor* hit = nullptr;
                int count = 0;
                for (const auto& fac : m) {
                    if (is_unknown(fac.first, names_)) {
                        hit = &fac;
                        ++count;
                    }
                }
                if (count == 0) {
                    gamma += Expr(q) * monomial_expr(m);
                    continue;
                }
                const bool first = compare(hit->first, fpa) == 0;
                if (count > 1 || hit->second != 1 || (!first && compare(hit->first, fa) != 0)) {
                    ok = false;
                    break;
                }
                Monomial without;
                for (const auto& fac : m) {
                    if (&fac != hit) without.push_back(fac);
                }
                (first ? alpha : beta) += Expr(q) * monomial_expr(without);
            }
            if (!ok) continue;
            if (has_unknown(alpha, names_) || has_unknown(beta, names_) || !usable_pivot(alpha)) continue;
            const Expr rate = divide(-beta, alpha);
            const Expr forcing = divide(-gamma, alpha);
            if (contains_atom(rate, *t) || jet_order(rate) >= 0) continue;
            if (!polynomial_in(forcing, *t)) continue;
            if (!rate.is_zero() && !forcing.is_zero() && !usable_pivot(rate)) continue;

            const Expr constant = fresh_constant();
            const Expr tt = Expr::from_atom(*t);
            Expr value;
            if (rate.is_zero()) {
                value = constant + integrate(forcing, *t);
            } else {
                value = constant * Expr::exp(rate * tt);
                // Particular solution p with p' - rate p = forcing.
                Expr term = forcing;
                Expr scale(1);
                for (int k = 0; !term.is_zero() && k < 64; ++k) {
                    scale = scale * pow(rate, -1);
                    value -= term * scale;
                    term = diff(term, *t);
                }
            }
            bindings_.emplace_back(name, value);
            return true;
        }
        return false;
    }

    static bool polynomial_in(const Expr& e, const Atom& t)
    {
        for (const Atom& a : atoms(e)) {
            if (a.kind == AtomKind::Param) continue;
            if (a.kind == AtomKind::Base && compare(a, t) == 0) continue;
            return false;
        }
        for (const auto& [m, q] : e.terms()) {
            for (const auto& [a, n] : m) {
                if (n < 0 && compare(a, t) == 0) return false;
            }
        }
        return true;
    }

    static Expr integrate(const Expr& e, const Atom& t)
    {
        Expr out;
        const Expr tt = Expr::from_atom(t);
        for (const auto& [m, q] : e.terms()) {
            int n = 0;
            Monomial rest;
            for (const auto& f : m) {
                if (compare(f.first, t) == 0) n = f.second;
                else rest.push_back(f);
            }
            out += Expr(q / Rational(n + 1)) * monomial_expr(rest) * pow(tt, n + 1);
        }
        return out;
    }

    Expr fresh_constant()
    {
        for (;;) {
            const std::string name = "C" + std::to_string(next_++);
            if (space_.find_param(name) || space_.find_function(name) || space_.base_index(name) >= 0 ||
                space_.field_index(name) >= 0) {
                continue;
            }
            space_.add_param(name);
            constants_.push_back(name);
            return space_.param(name);
        }
    }

    JetSpace space_;
    std::vector<std::string> order_;
    NameSet names_;
    BindingList bindings_;
    std::vector<std::string> constants_;
    std::vector<Expr> remaining_;
    bool inconsistent_ = false;
    int next_ = 1;
};

// Exponent vectors of total degree <= d in k variables, by degree then lexicographically.
std::vector<std::vector<int>> exponents(std::size_t k, int d)
{
    std::vector<std::vector<int>> out;
    for (int total = 0; total <= d; ++total) {
        std::vector<int> e(k, 0);
        std::function<void(std::size_t, int)> fill = [&](std::size_t i, int left) {
            if (i + 1 == k) {
                e[i] = left;
                out.push_back(e);
                return;
            }
            for (int v = left; v >= 0; --v) {
                e[i] = v;
                fill(i + 1, left - v);
            }
        };
        if (k == 0) {
            if (total == 0) out.emplace_back();
        } else {
            fill(0, total);
        }
    }
    return out;
}

std::string internal_name(const std::string& fn, std::size_t i) { return "%" + fn + "." + std::to_string(i); }

}  // namespace

Expr normalize_condition(const Expr& e)
{
    if (e.is_zero()) return e;
    mpz_class num = 0;
    mpz_class den = 1;
    for (const auto& [m, q] : e.terms()) {
        mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), q.get_num().get_mpz_t());
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den().get_mpz_t());
    }
    Rational content(num, den);
    content.canonicalize();
    if (leading_display_coefficient(e) < 0) content = -content;
    return e / content;
}

Expr apply_bindings(const Expr& e, const BindingList& bindings, const JetSpace& space)
{
    Expr out = e;
    for (std::size_t pass = 0; pass <= bindings.size(); ++pass) {
        const Expr before = out;
        for (const auto& [name, value] : bindings) {
            out = substitute_function(out, name, decl_of(space, name).args, value);
        }
        if (out == before) break;
    }
    return out;
}

std::string to_string(SolveStatus s)
{
    switch (s) {
    case SolveStatus::Solved: return "solved";
    case SolveStatus::Unsolved: return "unsolved";
    case SolveStatus::NoNontrivialSolution: return "no-nontrivial-solution";
    }
    return "unsolved";
}

DeterminingSystem multiplier_conditions(const std::vector<Expr>& equations, const Ansatz& ansatz,
                                        const JetSpace& space, bool on_solutions)
{
    const std::size_t n = equations.size();
    if (n != space.field_count()) throw DomainError("the multiplier problem needs one equation per field");
    DeterminingSystem sys;
    sys.space = space;
    sys.kind = ansatz.kind;
    sys.on_solutions = on_solutions;
    sys.equations = equations;
    sys.matrix.assign(n, std::vector<Expr>(n));
    if (ansatz.kind == AnsatzKind::MultiplierDiagonal) {
        if (ansatz.entries.size() != n) throw DomainError("diagonal multiplier needs one entry per equation");
        for (std::size_t a = 0; a < n; ++a) sys.matrix[a][a] = ansatz.entries[a];
    } else if (ansatz.kind == AnsatzKind::MultiplierMatrix) {
        if (ansatz.entries.size() != n * n) throw DomainError("multiplier matrix needs n*n entries");
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = 0; b < n; ++b) sys.matrix[a][b] = ansatz.entries[a * n + b];
        }
    } else {
        throw DomainError("multiplier_conditions needs a multiplier ansatz");
    }
    sys.unknowns = collect_unknowns(ansatz.entries, space);
    for (const auto& e : equations) {
        if (!collect_unknowns({e}, space).empty()) throw DomainError("equations of a multiplier problem contain unknowns");
    }
    for (const auto& name : sys.unknowns) {
        for (const auto& arg : decl_of(space, name).args) {
            if (!arg.as_atom()) throw DomainError("unknown " + name + " must take base or jet coordinates");
        }
    }
    for (std::size_t a = 0; a < n; ++a) {
        Expr row;
        for (std::size_t b = 0; b < n; ++b) row += sys.matrix[a][b] * equations[b];
        sys.transformed.push_back(row);
    }
    sys.conditions = residual_conditions(sys.transformed, equations, on_solutions, sys.unknowns, space);
    return sys;
}

DeterminingSystem nonlinear_conditions(const std::vector<Expr>& equations, const Ansatz& ansatz,
                                       const JetSpace& space, bool on_solutions)
{
    if (ansatz.kind != AnsatzKind::Nonlinear) throw DomainError("nonlinear_conditions needs a nonlinear ansatz");
    if (ansatz.degree < 0) throw DomainError("ansatz degree must be non-negative");
    if (equations.size() != space.field_count()) throw DomainError("one equation per field is required");
    DeterminingSystem sys;
    sys.space = space;
    sys.kind = AnsatzKind::Nonlinear;
    sys.degree = ansatz.degree;
    sys.on_solutions = on_solutions;
    sys.equations = equations;
    sys.explicit_transforms = !ansatz.entries.empty();
    if (sys.explicit_transforms && ansatz.entries.size() != equations.size()) {
        throw DomainError("one transformation per field is required");
    }
    sys.transformed = sys.explicit_transforms ? ansatz.entries : equations;
    sys.unknowns = collect_unknowns(sys.transformed, space);
    sys.conditions = residual_conditions(sys.transformed, equations, on_solutions, sys.unknowns, space);
    if (sys.explicit_transforms) {
        const auto solved = solve_leading(equations, space);
        std::set<Expr> seen;
        for (const auto& c : sys.conditions) seen.insert(c.expr);
        for (std::size_t b = 0; b < sys.transformed.size(); ++b) {
            const Expr r = normalize_condition(restrict_on_solutions(sys.transformed[b], solved, space));
            if (r.is_zero() || !seen.insert(r).second) continue;
            sys.conditions.push_back({r, "compatibility of transformation " + std::to_string(b + 1)});
        }
    }
    return sys;
}

SolutionReport solve_determining(const DeterminingSystem& sys)
{
    SolutionReport report;
    report.space = sys.space;

    JetSpace work = sys.space;
    std::vector<Expr> conditions;
    std::vector<std::string> solver_unknowns;
    BindingList ansatz;  // nonlinear: unknown -> polynomial in internal constants
    if (sys.kind == AnsatzKind::Nonlinear) {
        for (const auto& name : sys.unknowns) {
            const std::vector<Expr> args = decl_of(sys.space, name).args;
            Expr poly;
            std::size_t i = 0;
            for (const auto& ex : exponents(args.size(), sys.degree)) {
                const std::string c = internal_name(name, i++);
                work.add_function(c, {}, true);
                solver_unknowns.push_back(c);
                Expr m = work.fn(c);
                for (std::size_t k = 0; k < args.size(); ++k) m *= pow(args[k], ex[k]);
                poly += m;
            }
            ansatz.emplace_back(name, poly);
        }
        const auto key = [](const Atom& a) { return a.kind == AtomKind::Jet || a.kind == AtomKind::Base; };
        for (const auto& c : sys.conditions) {
            for (const auto& [k, coef] : split_by_key(apply_bindings(c.expr, ansatz, work), key)) {
                conditions.push_back(coef);
            }
        }
    } else {
        solver_unknowns = sys.unknowns;
        for (const auto& c : sys.conditions) conditions.push_back(c.expr);
    }

    Solver solver(work, solver_unknowns);
    const bool ok = solver.run(conditions);
    if (!ok) {
        report.status = solver.inconsistent() ? SolveStatus::NoNontrivialSolution : SolveStatus::Unsolved;
        report.remaining = sys.conditions;
        if (solver.inconsistent()) report.notes.push_back("the determining system has no solution");
        return report;
    }

    // Final bindings in terms of free constants only.
    BindingList raw = solver.bindings();
    JetSpace final_space = solver.space();
    if (sys.kind == AnsatzKind::Nonlinear) {
        BindingList rename;
        int next = static_cast<int>(solver.constants().size()) + 1;
        std::vector<std::string> constants = solver.constants();
        for (const auto& c : solver_unknowns) {
            const bool bound = std::any_of(raw.begin(), raw.end(), [&](const auto& b) { return b.first == c; });
            if (bound) continue;
            std::string name;
            do name = "C" + std::to_string(next++);
            while (final_space.find_param(name) || final_space.find_function(name));
            final_space.add_param(name);
            constants.push_back(name);
            rename.emplace_back(c, final_space.param(name));
        }
        BindingList all = raw;
        all.insert(all.end(), rename.begin(), rename.end());
        for (const auto& [name, poly] : ansatz) {
            report.bindings.emplace_back(name, apply_bindings(poly, all, final_space));
        }
        report.free_constants = constants;
    } else {
        for (const auto& [name, value] : raw) report.bindings.emplace_back(name, apply_bindings(value, raw, final_space));
        report.free_constants = solver.constants();
        for (const auto& name : sys.unknowns) {
            const bool bound = std::any_of(raw.begin(), raw.end(), [&](const auto& b) { return b.first == name; });
            if (!bound) {
                report.free_constants.push_back(name);
                if (!decl_of(sys.space, name).args.empty()) report.notes.push_back(name + " is unconstrained");
            }
        }
    }
    // Drop internal constants from the reported space.
    JetSpace clean = final_space;
    clean.functions.erase(std::remove_if(clean.functions.begin(), clean.functions.end(),
                                         [](const FunctionDecl& f) { return f.name.rfind('%', 0) == 0; }),
                          clean.functions.end());
    report.space = clean;

    for (const auto& t : sys.transformed) report.transformed.push_back(apply_bindings(t, report.bindings, clean));

    // Nondegeneracy: det(A) or every transformation must not vanish
    // identically. A free constant is flagged nonzero when setting it to
    // zero would break that.
    std::vector<std::vector<Expr>> m = sys.matrix;
    for (auto& row : m) {
        for (auto& e : row) e = apply_bindings(e, report.bindings, clean);
    }
    if (sys.kind != AnsatzKind::Nonlinear) report.determinant = determinant(m);
    const auto degenerate = [&](const std::function<Expr(const Expr&)>& zero) {
        if (report.determinant) return zero(*report.determinant).is_zero();
        return std::any_of(report.transformed.begin(), report.transformed.end(),
                           [&](const Expr& t) { return zero(t).is_zero(); });
    };
    if (degenerate([](const Expr& e) { return e; })) {
        report.status = SolveStatus::NoNontrivialSolution;
        report.notes.push_back(sys.kind == AnsatzKind::Nonlinear ? "a transformation vanishes identically"
                                                                 : "the only multiplier is singular");
        return report;
    }
    for (const auto& c : report.free_constants) {
        std::function<Expr(const Expr&)> zero;
        if (clean.find_param(c)) {
            const Bindings b{{*clean.param(c).as_atom(), Expr()}};
            zero = [b](const Expr& e) { return substitute(e, b); };
        } else if (decl_of(clean, c).args.empty()) {
            const BindingList b{{c, Expr()}};
            zero = [b, &clean](const Expr& e) { return apply_bindings(e, b, clean); };
        } else {
            continue;
        }
        if (degenerate(zero)) report.nonzero.push_back(c);
    }

    if (sys.kind == AnsatzKind::Nonlinear && sys.explicit_transforms) {
        report.notes.push_back("transformations are required to vanish on the solution set");
    }

    report.residual_check = is_variational(report.transformed, clean, sys.on_solutions, sys.equations);
    if (!report.residual_check.variational) {
        throw InvariantBreach("substituting the solution does not make the system variational");
    }
    report.status = SolveStatus::Solved;
    return report;
}

}  // namespace varic
