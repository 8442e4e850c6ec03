#include "varic/expr.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

namespace varic {

namespace {

constexpr std::size_t kMaxTerms = 200000;

int sign_of(int c) { return (c > 0) - (c < 0); }

template <class T>
int three_way(const T& a, const T& b)
{
    if (a < b) return -1;
    if (b < a) return 1;
    return 0;
}

const std::shared_ptr<const Terms>& empty_terms()
{
    static const auto empty = std::make_shared<const Terms>();
    return empty;
}

void accumulate(Terms& acc, const Monomial& m, const Rational& c)
{
    if (c == 0) return;
    auto [it, inserted] = acc.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) acc.erase(it);
    }
    if (acc.size() > kMaxTerms) {
        throw UnsupportedClass("expression exceeds the supported size");
    }
}

void insert_factor(Monomial& m, const Atom& atom, int exponent)
{
    auto it = std::lower_bound(m.begin(), m.end(), atom,
                               [](const Factor& f, const Atom& a) { return compare(f.first, a) < 0; });
    if (it != m.end() && compare(it->first, atom) == 0) {
        it->second += exponent;
        if (it->second == 0) m.erase(it);
    } else if (exponent != 0) {
        m.insert(it, Factor{atom, exponent});
    }
}

// Merges exp factors of a monomial into a single exp atom of exponent 1,
// dropping it when the merged argument vanishes.
void fold_exponentials(Monomial& m)
{
    Expr total;
    bool any = false;
    for (auto it = m.begin(); it != m.end();) {
        if (it->first.kind == AtomKind::Exp) {
            total += Expr(static_cast<long>(it->second)) * it->first.args.front();
            any = true;
            it = m.erase(it);
        } else {
            ++it;
        }
    }
    if (!any || total.is_zero()) return;
    Atom e;
    e.kind = AtomKind::Exp;
    e.args = {total};
    insert_factor(m, e, 1);
}

Monomial multiply_monomials(const Monomial& a, const Monomial& b)
{
    Monomial out;
    out.reserve(a.size() + b.size());
    auto ia = a.begin();
    auto ib = b.begin();
    bool has_exp = false;
    while (ia != a.end() || ib != b.end()) {
        int c = 0;
        if (ia == a.end()) c = 1;
        else if (ib == b.end()) c = -1;
        else c = compare(ia->first, ib->first);
        if (c < 0) {
            out.push_back(*ia++);
        } else if (c > 0) {
            out.push_back(*ib++);
        } else {
            int e = ia->second + ib->second;
            if (e != 0) out.emplace_back(ia->first, e);
            ++ia;
            ++ib;
        }
        if (!out.empty() && out.back().first.kind == AtomKind::Exp) has_exp = true;
    }
    std::size_t exp_count = 0;
    for (const auto& f : out) {
        if (f.first.kind == AtomKind::Exp) exp_count += static_cast<std::size_t>(std::abs(f.second));
    }
    if (has_exp && (exp_count > 1 || std::any_of(out.begin(), out.end(), [](const Factor& f) {
                        return f.first.kind == AtomKind::Exp && f.second != 1;
                    }))) {
        fold_exponentials(out);
    }
    return out;
}

Expr make_atom_expr(const Atom& a)
{
    Terms t;
    t.emplace(Monomial{Factor{a, 1}}, Rational(1));
    return Expr::from_terms(std::move(t));
}

// Monomial with the factor at `pos` lowered by one power.
Monomial without_one(const Monomial& m, std::size_t pos)
{
    Monomial out = m;
    if (--out[pos].second == 0) out.erase(out.begin() + static_cast<std::ptrdiff_t>(pos));
    return out;
}

void collect_atoms(const Expr& e, std::set<Atom, AtomLess>& out)
{
    for (const auto& [m, c] : e.terms()) {
        for (const auto& [a, n] : m) {
            out.insert(a);
            for (const auto& arg : a.args) collect_atoms(arg, out);
        }
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// MultiIndex

MultiIndex MultiIndex::unit(std::size_t dims, std::size_t direction)
{
    MultiIndex m(dims);
    m.counts_.at(direction) = 1;
    return m;
}

int MultiIndex::order() const noexcept
{
    int s = 0;
    for (int c : counts_) s += c;
    return s;
}

MultiIndex MultiIndex::raised(std::size_t direction) const
{
    MultiIndex m = *this;
    ++m.counts_.at(direction);
    return m;
}

MultiIndex MultiIndex::lowered(std::size_t direction) const
{
    if (counts_.at(direction) == 0) throw DomainError("multi-index has no derivative to remove");
    MultiIndex m = *this;
    --m.counts_[direction];
    return m;
}

bool MultiIndex::divides(const MultiIndex& other) const
{
    if (other.dims() != dims()) return false;
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        if (counts_[i] > other.counts_[i]) return false;
    }
    return true;
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const
{
    MultiIndex m = *this;
    for (std::size_t i = 0; i < counts_.size(); ++i) m.counts_[i] += other.counts_.at(i);
    return m;
}

MultiIndex MultiIndex::operator-(const MultiIndex& other) const
{
    if (!other.divides(*this)) throw DomainError("multi-index difference would be negative");
    MultiIndex m = *this;
    for (std::size_t i = 0; i < counts_.size(); ++i) m.counts_[i] -= other.counts_[i];
    return m;
}

std::vector<std::size_t> MultiIndex::directions() const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        for (int k = 0; k < counts_[i]; ++k) out.push_back(i);
    }
    return out;
}

std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b)
{
    if (auto c = a.order() <=> b.order(); c != 0) return c;
    return a.counts_ <=> b.counts_;
}

// ---------------------------------------------------------------------------
// Ordering

int compare(const Atom& a, const Atom& b)
{
    if (a.kind != b.kind) return three_way(static_cast<int>(a.kind), static_cast<int>(b.kind));
    if (a.index != b.index) return three_way(a.index, b.index);
    if (auto c = a.multi <=> b.multi; c != 0) return c < 0 ? -1 : 1;
    if (int c = a.name.compare(b.name); c != 0) return sign_of(c);
    if (a.deriv != b.deriv) return a.deriv < b.deriv ? -1 : 1;
    const std::size_t n = std::min(a.args.size(), b.args.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (int c = compare(a.args[i], b.args[i]); c != 0) return c;
    }
    return three_way(a.args.size(), b.args.size());
}

int compare(const Monomial& a, const Monomial& b)
{
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (int c = compare(a[i].first, b[i].first); c != 0) return c;
        if (a[i].second != b[i].second) return three_way(a[i].second, b[i].second);
    }
    return three_way(a.size(), b.size());
}

int compare(const Expr& a, const Expr& b)
{
    if (&a.terms() == &b.terms()) return 0;
    auto ia = a.terms().begin();
    auto ib = b.terms().begin();
    for (; ia != a.terms().end() && ib != b.terms().end(); ++ia, ++ib) {
        if (int c = compare(ia->first, ib->first); c != 0) return c;
        if (int c = cmp(ia->second, ib->second); c != 0) return sign_of(c);
    }
    return three_way(a.terms().size(), b.terms().size());
}

// ---------------------------------------------------------------------------
// Expr construction and arithmetic

Expr::Expr() : terms_(empty_terms()) {}

Expr::Expr(long value) : Expr(Rational(value)) {}

Expr::Expr(const Rational& value)
{
    if (value == 0) {
        terms_ = empty_terms();
    } else {
        auto t = std::make_shared<Terms>();
        t->emplace(Monomial{}, value);
        terms_ = std::move(t);
    }
}

Expr Expr::from_terms(Terms terms)
{
    Expr e;
    if (!terms.empty()) e.terms_ = std::make_shared<const Terms>(std::move(terms));
    return e;
}

Expr Expr::from_atom(const Atom& atom)
{
    switch (atom.kind) {
    case AtomKind::Exp:
        return Expr::exp(atom.args.at(0));
    case AtomKind::Sin:
        return Expr::sin(atom.args.at(0));
    case AtomKind::Cos:
        return Expr::cos(atom.args.at(0));
    case AtomKind::Function:
        return Expr::function(atom.name, atom.args, atom.deriv);
    default:
        return make_atom_expr(atom);
    }
}

Expr Expr::base(int index)
{
    Atom a;
    a.kind = AtomKind::Base;
    a.index = index;
    return make_atom_expr(a);
}

Expr Expr::jet(int field, MultiIndex index)
{
    Atom a;
    a.kind = AtomKind::Jet;
    a.index = field;
    a.multi = std::move(index);
    return make_atom_expr(a);
}

Expr Expr::param(std::string name, bool nonzero)
{
    Atom a;
    a.kind = AtomKind::Param;
    a.name = std::move(name);
    a.nonzero = nonzero;
    return make_atom_expr(a);
}

Expr Expr::function(std::string name, std::vector<Expr> args, std::vector<int> deriv)
{
    if (deriv.empty()) deriv.assign(args.size(), 0);
    if (deriv.size() != args.size()) throw DomainError("derivative record does not match argument count");
    Atom a;
    a.kind = AtomKind::Function;
    a.name = std::move(name);
    a.args = std::move(args);
    a.deriv = std::move(deriv);
    return make_atom_expr(a);
}

Expr Expr::exp(const Expr& arg)
{
    if (arg.is_zero()) return Expr(1L);
    Atom a;
    a.kind = AtomKind::Exp;
    a.args = {arg};
    return make_atom_expr(a);
}

Expr Expr::sin(const Expr& arg)
{
    if (arg.is_zero()) return Expr();
    Atom a;
    a.kind = AtomKind::Sin;
    a.args = {arg};
    return make_atom_expr(a);
}

Expr Expr::cos(const Expr& arg)
{
    if (arg.is_zero()) return Expr(1L);
    Atom a;
    a.kind = AtomKind::Cos;
    a.args = {arg};
    return make_atom_expr(a);
}

std::optional<Rational> Expr::as_rational() const
{
    if (terms_->empty()) return Rational(0);
    if (terms_->size() == 1 && terms_->begin()->first.empty()) return terms_->begin()->second;
    return std::nullopt;
}

std::optional<Atom> Expr::as_atom() const
{
    if (terms_->size() != 1) return std::nullopt;
    const auto& [m, c] = *terms_->begin();
    if (c != 1 || m.size() != 1 || m.front().second != 1) return std::nullopt;
    return m.front().first;
}

Expr& Expr::operator+=(const Expr& other) { return *this = *this + other; }
Expr& Expr::operator-=(const Expr& other) { return *this = *this - other; }
Expr& Expr::operator*=(const Expr& other) { return *this = *this * other; }

Expr operator+(const Expr& a, const Expr& b)
{
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    Terms t = a.terms();
    for (const auto& [m, c] : b.terms()) accumulate(t, m, c);
    return Expr::from_terms(std::move(t));
}

Expr operator-(const Expr& a)
{
    Terms t = a.terms();
    for (auto& [m, c] : t) c = -c;
    return Expr::from_terms(std::move(t));
}

Expr operator-(const Expr& a, const Expr& b)
{
    if (b.is_zero()) return a;
    Terms t = a.terms();
    for (const auto& [m, c] : b.terms()) accumulate(t, m, -c);
    return Expr::from_terms(std::move(t));
}

Expr operator*(const Expr& a, const Expr& b)
{
    if (a.is_zero() || b.is_zero()) return Expr();
    if (a.size() * b.size() > kMaxTerms * 4) throw UnsupportedClass("expression exceeds the supported size");
    Terms t;
    for (const auto& [ma, ca] : a.terms()) {
        for (const auto& [mb, cb] : b.terms()) {
            accumulate(t, multiply_monomials(ma, mb), ca * cb);
        }
    }
    return Expr::from_terms(std::move(t));
}

Expr operator/(const Expr& a, const Rational& b)
{
    if (b == 0) throw DomainError("division by zero");
    Terms t = a.terms();
    for (auto& [m, c] : t) c /= b;
    return Expr::from_terms(std::move(t));
}

bool is_invertible(const Expr& e)
{
    if (e.size() != 1) return false;
    for (const auto& [a, n] : e.terms().begin()->first) {
        const bool ok = (a.kind == AtomKind::Param && a.nonzero) || a.kind == AtomKind::Exp;
        if (!ok) return false;
    }
    return true;
}

namespace {

Expr invert_monomial(const Expr& e)
{
    if (!is_invertible(e)) throw UnsupportedClass("division by an expression that may vanish");
    const auto& [m, c] = *e.terms().begin();
    Monomial inv;
    for (const auto& [a, n] : m) {
        if (a.kind == AtomKind::Exp) {
            Atom neg = a;
            neg.args = {-a.args.front()};
            inv.emplace_back(neg, 1);
        } else {
            inv.emplace_back(a, -n);
        }
    }
    std::sort(inv.begin(), inv.end(), [](const Factor& x, const Factor& y) { return compare(x.first, y.first) < 0; });
    Terms t;
    t.emplace(std::move(inv), 1 / c);
    return Expr::from_terms(std::move(t));
}

}  // namespace

Expr divide(const Expr& numerator, const Expr& denominator)
{
    if (auto q = denominator.as_rational()) return numerator / *q;
    return numerator * invert_monomial(denominator);
}

Expr pow(const Expr& base, int exponent)
{
    if (exponent < 0) return pow(invert_monomial(base), -exponent);
    Expr result(1L);
    Expr sq = base;
    unsigned n = static_cast<unsigned>(exponent);
    while (n != 0) {
        if (n & 1U) result *= sq;
        n >>= 1U;
        if (n != 0) sq *= sq;
    }
    return result;
}

Expr monomial_expr(const Monomial& m)
{
    Terms t;
    t.emplace(m, Rational(1));
    return Expr::from_terms(std::move(t));
}

// ---------------------------------------------------------------------------
// JetSpace

JetSpace::JetSpace(std::vector<std::string> b, std::vector<std::string> f, int order)
    : base(std::move(b)), fields(std::move(f)), max_order(order)
{
}

Expr JetSpace::x(std::size_t i) const
{
    if (i >= base.size()) throw DomainError("base coordinate out of range");
    return Expr::base(static_cast<int>(i));
}

Expr JetSpace::x(const std::string& name) const
{
    const int i = base_index(name);
    if (i < 0) throw UnboundSymbol("unknown base coordinate '" + name + "'");
    return Expr::base(i);
}

Expr JetSpace::u(std::size_t field, const MultiIndex& index) const
{
    if (field >= fields.size()) throw DomainError("field out of range");
    if (index.dims() != dims()) throw DomainError("multi-index dimension mismatch");
    return Expr::jet(static_cast<int>(field), index);
}

Expr JetSpace::u(const std::string& field, const std::string& letters) const
{
    const int f = field_index(field);
    if (f < 0) throw UnboundSymbol("unknown field '" + field + "'");
    MultiIndex m(dims());
    for (char ch : letters) {
        const int i = base_index(std::string(1, ch));
        if (i < 0) throw UnboundSymbol(std::string("unknown base coordinate '") + ch + "'");
        m = m.raised(static_cast<std::size_t>(i));
    }
    return u(static_cast<std::size_t>(f), m);
}

Expr JetSpace::param(const std::string& name) const
{
    const ParamDecl* p = find_param(name);
    if (p == nullptr) throw UnboundSymbol("unknown parameter '" + name + "'");
    return Expr::param(p->name, p->nonzero);
}

Expr JetSpace::fn(const std::string& name, std::vector<int> deriv) const
{
    const FunctionDecl* f = find_function(name);
    if (f == nullptr) throw UnboundSymbol("unknown function '" + name + "'");
    return Expr::function(f->name, f->args, std::move(deriv));
}

ParamDecl& JetSpace::add_param(std::string name, bool nonzero)
{
    params.push_back(ParamDecl{std::move(name), nonzero});
    return params.back();
}

FunctionDecl& JetSpace::add_function(std::string name, std::vector<Expr> args, bool unknown)
{
    functions.push_back(FunctionDecl{std::move(name), std::move(args), unknown});
    return functions.back();
}

const ParamDecl* JetSpace::find_param(const std::string& name) const
{
    for (const auto& p : params) {
        if (p.name == name) return &p;
    }
    return nullptr;
}

const FunctionDecl* JetSpace::find_function(const std::string& name) const
{
    for (const auto& f : functions) {
        if (f.name == name) return &f;
    }
    return nullptr;
}

int JetSpace::base_index(const std::string& name) const
{
    for (std::size_t i = 0; i < base.size(); ++i) {
        if (base[i] == name) return static_cast<int>(i);
    }
    return -1;
}

int JetSpace::field_index(const std::string& name) const
{
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (fields[i] == name) return static_cast<int>(i);
    }
    return -1;
}

// ---------------------------------------------------------------------------
// Structural queries

int jet_order(const Expr& e)
{
    int best = -1;
    for (const auto& [m, c] : e.terms()) {
        for (const auto& [a, n] : m) {
            if (a.kind == AtomKind::Jet) best = std::max(best, a.multi.order());
            for (const auto& arg : a.args) best = std::max(best, jet_order(arg));
        }
    }
    return best;
}

std::vector<Atom> atoms(const Expr& e)
{
    std::set<Atom, AtomLess> s;
    collect_atoms(e, s);
    return {s.begin(), s.end()};
}

std::vector<Atom> jet_atoms(const Expr& e)
{
    std::vector<Atom> out;
    for (auto& a : atoms(e)) {
        if (a.kind == AtomKind::Jet) out.push_back(std::move(a));
    }
    return out;
}

bool contains_atom(const Expr& e, const Atom& atom)
{
    for (const auto& [m, c] : e.terms()) {
        for (const auto& [a, n] : m) {
            if (compare(a, atom) == 0) return true;
            for (const auto& arg : a.args) {
                if (contains_atom(arg, atom)) return true;
            }
        }
    }
    return false;
}

bool occurs_nested(const Expr& e, const Atom& atom)
{
    for (const auto& [m, c] : e.terms()) {
        for (const auto& [a, n] : m) {
            for (const auto& arg : a.args) {
                if (contains_atom(arg, atom)) return true;
            }
        }
    }
    return false;
}

bool is_zero(const Expr& e) { return e.is_zero(); }

Expr normalize(const Expr& e, const JetSpace& space)
{
    Expr out;
    for (const auto& [m, c] : e.terms()) {
        Expr term(c);
        for (const auto& [a, n] : m) {
            Atom rebuilt = a;
            for (auto& arg : rebuilt.args) arg = normalize(arg, space);
            if (a.kind == AtomKind::Jet) {
                if (a.multi.dims() != space.dims() || a.index < 0 ||
                    static_cast<std::size_t>(a.index) >= space.field_count()) {
                    throw DomainError("jet coordinate does not belong to this jet space");
                }
                if (a.multi.order() > space.max_order) {
                    throw MaxOrderExceeded("jet order " + std::to_string(a.multi.order()) +
                                           " exceeds the maximum order " + std::to_string(space.max_order));
                }
            }
            term *= pow(Expr::from_atom(rebuilt), n);
        }
        out += term;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Differentiation

Expr diff_slot(const Atom& function_atom, std::size_t slot)
{
    if (function_atom.kind != AtomKind::Function) throw DomainError("slot derivative of a non-function atom");
    std::vector<int> d = function_atom.deriv;
    ++d.at(slot);
    return Expr::function(function_atom.name, function_atom.args, std::move(d));
}

Expr apply_derivation(const Expr& e, const std::function<Expr(const Atom&)>& leaf);

namespace {

Expr atom_derivative(const Atom& a, const std::function<Expr(const Atom&)>& leaf)
{
    switch (a.kind) {
    case AtomKind::Base:
    case AtomKind::Param:
    case AtomKind::Jet:
        return leaf(a);
    case AtomKind::Function: {
        Expr out;
        for (std::size_t k = 0; k < a.args.size(); ++k) {
            Expr inner = apply_derivation(a.args[k], leaf);
            if (!inner.is_zero()) out += diff_slot(a, k) * inner;
        }
        return out;
    }
    case AtomKind::Exp: {
        Expr inner = apply_derivation(a.args.front(), leaf);
        return inner.is_zero() ? Expr() : Expr::exp(a.args.front()) * inner;
    }
    case AtomKind::Sin: {
        Expr inner = apply_derivation(a.args.front(), leaf);
        return inner.is_zero() ? Expr() : Expr::cos(a.args.front()) * inner;
    }
    case AtomKind::Cos: {
        Expr inner = apply_derivation(a.args.front(), leaf);
        return inner.is_zero() ? Expr() : -(Expr::sin(a.args.front()) * inner);
    }
    }
    return Expr();
}

}  // namespace

Expr apply_derivation(const Expr& e, const std::function<Expr(const Atom&)>& leaf)
{
    Expr out;
    for (const auto& [m, c] : e.terms()) {
        for (std::size_t k = 0; k < m.size(); ++k) {
            Expr d = atom_derivative(m[k].first, leaf);
            if (d.is_zero()) continue;
            const Rational coeff = c * m[k].second;
            Terms rest;
            rest.emplace(without_one(m, k), coeff);
            out += Expr::from_terms(std::move(rest)) * d;
        }
    }
    return out;
}

Expr diff(const Expr& e, const Atom& var)
{
    if (!var.is_symbol()) throw DomainError("partial derivative with respect to a non-symbol");
    return apply_derivation(e, [&](const Atom& a) { return compare(a, var) == 0 ? Expr(1L) : Expr(); });
}

Expr diff(const Expr& e, const Expr& var)
{
    auto a = var.as_atom();
    if (!a) throw DomainError("partial derivative with respect to a non-symbol");
    return diff(e, *a);
}

// ---------------------------------------------------------------------------
// Substitution

namespace {

Expr substitute_atom(const Atom& a, const Bindings& bindings);

Expr substitute_impl(const Expr& e, const Bindings& bindings)
{
    Expr out;
    for (const auto& [m, c] : e.terms()) {
        Expr term(c);
        for (const auto& [a, n] : m) term *= pow(substitute_atom(a, bindings), n);
        out += term;
    }
    return out;
}

Expr substitute_atom(const Atom& a, const Bindings& bindings)
{
    if (auto it = bindings.find(a); it != bindings.end()) return it->second;
    if (a.args.empty()) return Expr::from_atom(a);
    Atom rebuilt = a;
    for (auto& arg : rebuilt.args) arg = substitute_impl(arg, bindings);
    return Expr::from_atom(rebuilt);
}

}  // namespace

Expr substitute(const Expr& e, const Bindings& bindings)
{
    if (bindings.empty()) return e;
    return substitute_impl(e, bindings);
}

Expr substitute(const Expr& e, const Bindings& bindings, const JetSpace& space)
{
    Expr out = substitute(e, bindings);
    if (jet_order(out) > space.max_order) {
        throw MaxOrderExceeded("substitution produces jet order " + std::to_string(jet_order(out)) +
                               " above the maximum " + std::to_string(space.max_order));
    }
    return out;
}

Expr substitute_function(const Expr& e, const std::string& name, const std::vector<Expr>& declared_args,
                         const Expr& value)
{
    Expr out;
    for (const auto& [m, c] : e.terms()) {
        Expr term(c);
        for (const auto& [a, n] : m) {
            Atom rebuilt = a;
            for (auto& arg : rebuilt.args) arg = substitute_function(arg, name, declared_args, value);
            if (a.kind == AtomKind::Function && a.name == name) {
                if (rebuilt.args.size() != declared_args.size()) {
                    throw DomainError("function '" + name + "' applied with a wrong argument count");
                }
                Expr v = value;
                for (std::size_t k = 0; k < rebuilt.deriv.size(); ++k) {
                    for (int r = 0; r < rebuilt.deriv[k]; ++r) v = diff(v, declared_args[k]);
                }
                Bindings shift;
                for (std::size_t k = 0; k < declared_args.size(); ++k) {
                    auto atom = declared_args[k].as_atom();
                    if (!atom) throw DomainError("declared argument is not a symbol");
                    if (!(declared_args[k] == rebuilt.args[k])) shift.emplace(*atom, rebuilt.args[k]);
                }
                term *= pow(substitute(v, shift), n);
            } else {
                term *= pow(Expr::from_atom(rebuilt), n);
            }
        }
        out += term;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Evaluation

double Number::to_double() const
{
    if (exact()) return rational().get_d();
    return std::get<double>(value_);
}

Number operator+(const Number& a, const Number& b)
{
    if (a.exact() && b.exact()) return Number(Rational(a.rational() + b.rational()));
    return Number(a.to_double() + b.to_double());
}

Number operator*(const Number& a, const Number& b)
{
    if (a.exact() && b.exact()) return Number(Rational(a.rational() * b.rational()));
    return Number(a.to_double() * b.to_double());
}

Number pow(const Number& a, int exponent)
{
    if (!a.exact()) return Number(std::pow(a.to_double(), exponent));
    const Rational& q = a.rational();
    if (exponent < 0 && q == 0) throw DomainError("division by zero during evaluation");
    Rational base = exponent < 0 ? Rational(1 / q) : q;
    Rational r(1);
    for (int i = 0; i < std::abs(exponent); ++i) r *= base;
    return Number(r);
}

Number eval_exact(const Expr& e, const Assignment& assignment)
{
    Number total;
    for (const auto& [m, c] : e.terms()) {
        Number term(c);
        for (const auto& [a, n] : m) {
            Number v;
            switch (a.kind) {
            case AtomKind::Exp:
                v = Number(std::exp(eval_exact(a.args.front(), assignment).to_double()));
                break;
            case AtomKind::Sin:
                v = Number(std::sin(eval_exact(a.args.front(), assignment).to_double()));
                break;
            case AtomKind::Cos:
                v = Number(std::cos(eval_exact(a.args.front(), assignment).to_double()));
                break;
            default: {
                auto it = assignment.find(a);
                if (it == assignment.end()) {
                    const std::string what = a.name.empty() ? std::string("coordinate") : "'" + a.name + "'";
                    throw UnboundSymbol("no value for " + what);
                }
                v = Number(it->second);
            }
            }
            term = term * pow(v, n);
        }
        total = total + term;
    }
    return total;
}

}  // namespace varic
