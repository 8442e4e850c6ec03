#include "varic/jet.hpp"

#include <set>
#include <sstream>

namespace varic {

LinDiffOp LinDiffOp::scalar(const Expr& e, std::size_t dims)
{
    LinDiffOp op;
    op.add(MultiIndex(dims), e);
    return op;
}

LinDiffOp LinDiffOp::derivative(const MultiIndex& index, const Expr& coefficient)
{
    LinDiffOp op;
    op.add(index, coefficient);
    return op;
}

Expr LinDiffOp::coefficient(const MultiIndex& index) const
{
    auto it = terms_.find(index);
    return it == terms_.end() ? Expr() : it->second;
}

int LinDiffOp::order() const
{
    int out = -1;
    for (const auto& [i, c] : terms_) out = std::max(out, i.order());
    return out;
}

void LinDiffOp::add(const MultiIndex& index, const Expr& coefficient)
{
    if (coefficient.is_zero()) return;
    auto [it, inserted] = terms_.emplace(index, coefficient);
    if (inserted) return;
    it->second += coefficient;
    if (it->second.is_zero()) terms_.erase(it);
}

LinDiffOp& LinDiffOp::operator+=(const LinDiffOp& other)
{
    for (const auto& [i, c] : other.terms_) add(i, c);
    return *this;
}

LinDiffOp& LinDiffOp::operator-=(const LinDiffOp& other)
{
    for (const auto& [i, c] : other.terms_) add(i, -c);
    return *this;
}

LinDiffOp operator-(const LinDiffOp& a)
{
    LinDiffOp out;
    for (const auto& [i, c] : a.terms_) out.add(i, -c);
    return out;
}

LinDiffOp operator*(const Expr& e, const LinDiffOp& a)
{
    LinDiffOp out;
    for (const auto& [i, c] : a.terms_) out.add(i, e * c);
    return out;
}

bool operator==(const LinDiffOp& a, const LinDiffOp& b)
{
    if (a.terms_.size() != b.terms_.size()) return false;
    auto ia = a.terms_.begin();
    for (auto ib = b.terms_.begin(); ib != b.terms_.end(); ++ia, ++ib) {
        if (!(ia->first == ib->first) || !(ia->second == ib->second)) return false;
    }
    return true;
}

bool is_zero(const LinDiffOpMatrix& m)
{
    for (const auto& row : m) {
        for (const auto& op : row) {
            if (!op.is_zero()) return false;
        }
    }
    return true;
}

Expr total_derivative(const Expr& e, std::size_t i, const JetSpace& space)
{
    if (i >= space.dims()) throw DomainError("total derivative direction out of range");
    return apply_derivation(e, [&](const Atom& a) -> Expr {
        switch (a.kind) {
        case AtomKind::Base:
            return static_cast<std::size_t>(a.index) == i ? Expr(1) : Expr();
        case AtomKind::Jet: {
            MultiIndex next = a.multi.raised(i);
            if (next.order() > space.max_order) {
                throw MaxOrderExceeded("total derivative needs jet order " + std::to_string(next.order()) +
                                       " above the maximum " + std::to_string(space.max_order));
            }
            return Expr::jet(a.index, std::move(next));
        }
        default:
            return Expr();
        }
    });
}

Expr total_derivative(const Expr& e, const MultiIndex& index, const JetSpace& space)
{
    Expr out = e;
    for (std::size_t dir : index.directions()) {
        if (out.is_zero()) break;
        out = total_derivative(out, dir, space);
    }
    return out;
}

namespace {

std::vector<Atom> field_jets(const Expr& e, std::size_t field)
{
    std::vector<Atom> out;
    for (const Atom& a : jet_atoms(e)) {
        if (static_cast<std::size_t>(a.index) == field) out.push_back(a);
    }
    return out;
}

int sign(int order) { return order % 2 == 0 ? 1 : -1; }

}  // namespace

Expr euler_lagrange(const Expr& lagrangian, std::size_t field, const JetSpace& space)
{
    if (field >= space.field_count()) throw DomainError("field out of range");
    const int k = jet_order(lagrangian);
    if (2 * k > space.max_order) {
        throw MaxOrderExceeded("Euler-Lagrange of an order-" + std::to_string(k) + " Lagrangian needs maximum order " +
                               std::to_string(2 * k) + ", configured " + std::to_string(space.max_order));
    }
    Expr out;
    for (const Atom& a : field_jets(lagrangian, field)) {
        const Expr partial = diff(lagrangian, a);
        out += sign(a.multi.order()) * total_derivative(partial, a.multi, space);
    }
    return out;
}

std::vector<Expr> euler_lagrange(const Expr& lagrangian, const JetSpace& space)
{
    std::vector<Expr> out;
    for (std::size_t f = 0; f < space.field_count(); ++f) out.push_back(euler_lagrange(lagrangian, f, space));
    return out;
}

LinDiffOpMatrix frechet(const std::vector<Expr>& equations, const JetSpace& space)
{
    LinDiffOpMatrix out(equations.size(), std::vector<LinDiffOp>(space.field_count()));
    for (std::size_t a = 0; a < equations.size(); ++a) {
        for (const Atom& j : jet_atoms(equations[a])) {
            out[a][static_cast<std::size_t>(j.index)].add(j.multi, diff(equations[a], j));
        }
    }
    return out;
}

Expr op_apply(const LinDiffOp& p, const Expr& e, const JetSpace& space)
{
    Expr out;
    for (const auto& [i, c] : p.terms()) out += c * total_derivative(e, i, space);
    return out;
}

LinDiffOp compose_derivative(std::size_t i, const LinDiffOp& q, const JetSpace& space)
{
    LinDiffOp out;
    for (const auto& [j, c] : q.terms()) {
        out.add(j, total_derivative(c, i, space));
        out.add(j.raised(i), c);
    }
    return out;
}

LinDiffOp op_compose(const LinDiffOp& p, const LinDiffOp& q, const JetSpace& space)
{
    LinDiffOp out;
    for (const auto& [i, a] : p.terms()) {
        LinDiffOp inner = q;
        for (std::size_t dir : i.directions()) inner = compose_derivative(dir, inner, space);
        out += a * inner;
    }
    return out;
}

LinDiffOp adjoint(const LinDiffOp& p, const JetSpace& space)
{
    LinDiffOp out;
    for (const auto& [i, a] : p.terms()) {
        LinDiffOp inner = LinDiffOp::scalar(a, space.dims());
        for (std::size_t dir : i.directions()) inner = compose_derivative(dir, inner, space);
        out += Expr(sign(i.order())) * inner;
    }
    return out;
}

namespace {

std::string derivative_symbol(const MultiIndex& i, const JetSpace& space, bool latex)
{
    std::string out;
    for (std::size_t d = 0; d < i.dims(); ++d) {
        if (i[d] == 0) continue;
        if (!out.empty()) out += latex ? " " : "*";
        const std::string& name = space.base.at(d);
        if (latex) {
            out += "D_{" + name + "}";
            if (i[d] > 1) out += "^{" + std::to_string(i[d]) + "}";
        } else {
            out += "D_" + name;
            if (i[d] > 1) out += "^" + std::to_string(i[d]);
        }
    }
    return out;
}

std::string render(const LinDiffOp& p, const JetSpace& space, bool latex)
{
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    // Highest order first.
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        const MultiIndex& i = it->first;
        Expr c = it->second;
        std::string coef;
        bool negative = false;
        if (c.size() == 1 && c.terms().begin()->second < 0) {
            negative = true;
            c = -c;
        }
        if (i.order() == 0) {
            coef = latex ? to_latex(c, space) : to_string(c, space);
            if (c.size() > 1) coef = latex ? "\\left(" + coef + "\\right)" : "(" + coef + ")";
        } else if (c == Expr(1)) {
            coef = derivative_symbol(i, space, latex);
        } else {
            coef = latex ? to_latex(c, space) : to_string(c, space);
            if (c.size() > 1) coef = latex ? "\\left(" + coef + "\\right)" : "(" + coef + ")";
            coef += (latex ? " " : "*") + derivative_symbol(i, space, latex);
        }
        if (first) {
            os << (negative ? "-" : "") << coef;
        } else {
            os << (negative ? " - " : " + ") << coef;
        }
        first = false;
    }
    return os.str();
}

}  // namespace

std::string to_string(const LinDiffOp& p, const JetSpace& space) { return render(p, space, false); }
std::string to_latex(const LinDiffOp& p, const JetSpace& space) { return render(p, space, true); }

}  // namespace varic
