#include "varic/forms.hpp"

#include "varic/jet.hpp"

#include <algorithm>
#include <sstream>

namespace varic {

std::strong_ordering operator<=>(const DeltaBasis& a, const DeltaBasis& b)
{
    if (auto c = a.field <=> b.field; c != 0) return c;
    return a.index <=> b.index;
}

FunctionalForm::FunctionalForm(int degree) : degree_(degree)
{
    if (degree < 0 || degree > kMaxFormDegree) throw DomainError("form degree out of range");
}

FunctionalForm FunctionalForm::scalar(const Expr& e)
{
    FunctionalForm f(0);
    f.add({}, e);
    return f;
}

FunctionalForm FunctionalForm::basis(int field, const MultiIndex& index, const Expr& coefficient)
{
    FunctionalForm f(1);
    f.add({DeltaBasis{field, index}}, coefficient);
    return f;
}

FunctionalForm FunctionalForm::euler_form(const std::vector<Expr>& equations, const JetSpace& space)
{
    if (equations.size() != space.field_count()) throw DomainError("one equation per field is required");
    FunctionalForm f(1);
    for (std::size_t a = 0; a < equations.size(); ++a) f.add({DeltaBasis{static_cast<int>(a), space.zero_index()}}, equations[a]);
    return f;
}

Expr FunctionalForm::coefficient(const Wedge& w) const
{
    auto it = terms_.find(w);
    return it == terms_.end() ? Expr() : it->second;
}

Expr FunctionalForm::as_scalar() const
{
    if (degree_ != 0) throw DomainError("form of positive degree used as a scalar");
    return coefficient({});
}

void FunctionalForm::add(Wedge factors, const Expr& coefficient)
{
    if (static_cast<int>(factors.size()) != degree_) throw DomainError("wedge length differs from form degree");
    if (coefficient.is_zero()) return;
    // Insertion sort counting transpositions.
    int swaps = 0;
    for (std::size_t i = 1; i < factors.size(); ++i) {
        for (std::size_t j = i; j > 0 && factors[j] < factors[j - 1]; --j) {
            std::swap(factors[j], factors[j - 1]);
            ++swaps;
        }
    }
    for (std::size_t i = 1; i < factors.size(); ++i) {
        if (factors[i] == factors[i - 1]) return;
    }
    const Expr c = swaps % 2 == 0 ? coefficient : -coefficient;
    auto [it, inserted] = terms_.emplace(std::move(factors), c);
    if (inserted) return;
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
}

FunctionalForm& FunctionalForm::operator+=(const FunctionalForm& other)
{
    if (other.degree_ != degree_) throw DomainError("sum of forms of different degree");
    for (const auto& [w, c] : other.terms_) add(w, c);
    return *this;
}

FunctionalForm& FunctionalForm::operator-=(const FunctionalForm& other)
{
    if (other.degree_ != degree_) throw DomainError("difference of forms of different degree");
    for (const auto& [w, c] : other.terms_) add(w, -c);
    return *this;
}

FunctionalForm operator-(const FunctionalForm& a)
{
    FunctionalForm out(a.degree_);
    for (const auto& [w, c] : a.terms_) out.terms_.emplace(w, -c);
    return out;
}

FunctionalForm operator*(const Expr& c, const FunctionalForm& f)
{
    FunctionalForm out(f.degree_);
    for (const auto& [w, x] : f.terms_) out.add(w, c * x);
    return out;
}

bool operator==(const FunctionalForm& a, const FunctionalForm& b)
{
    if (a.degree_ != b.degree_ || a.terms_.size() != b.terms_.size()) return false;
    auto ia = a.terms_.begin();
    for (auto ib = b.terms_.begin(); ib != b.terms_.end(); ++ia, ++ib) {
        if (!(ia->first == ib->first) || !(ia->second == ib->second)) return false;
    }
    return true;
}

FunctionalForm wedge(const FunctionalForm& f, const FunctionalForm& g)
{
    const int degree = f.degree() + g.degree();
    if (degree > kMaxFormDegree) throw DomainError("wedge product exceeds the supported degree");
    FunctionalForm out(degree);
    for (const auto& [wf, cf] : f.terms()) {
        for (const auto& [wg, cg] : g.terms()) {
            Wedge w = wf;
            w.insert(w.end(), wg.begin(), wg.end());
            out.add(std::move(w), cf * cg);
        }
    }
    return out;
}

FunctionalForm fed(const FunctionalForm& f)
{
    FunctionalForm out(f.degree() + 1);
    for (const auto& [w, c] : f.terms()) {
        for (const Atom& a : jet_atoms(c)) {
            Wedge next;
            next.reserve(w.size() + 1);
            next.push_back(DeltaBasis{a.index, a.multi});
            next.insert(next.end(), w.begin(), w.end());
            out.add(std::move(next), diff(c, a));
        }
    }
    return out;
}

FunctionalForm interior_euler(const FunctionalForm& f, const std::vector<Expr>& center, const JetSpace& space)
{
    if (f.degree() < 1) throw DomainError("interior product needs a form of positive degree");
    FunctionalForm out(f.degree() - 1);
    for (const auto& [w, c] : f.terms()) {
        for (std::size_t k = 0; k < w.size(); ++k) {
            const DeltaBasis& b = w[k];
            Expr value = Expr::jet(b.field, b.index);
            if (!center.empty()) value -= total_derivative(center.at(static_cast<std::size_t>(b.field)), b.index, space);
            if (value.is_zero()) continue;
            Wedge rest = w;
            rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(k));
            out.add(std::move(rest), (k % 2 == 0 ? c : -c) * value);
        }
    }
    return out;
}

FunctionalForm total_derivative(const FunctionalForm& f, std::size_t i, const JetSpace& space)
{
    FunctionalForm out(f.degree());
    for (const auto& [w, c] : f.terms()) {
        out.add(w, total_derivative(c, i, space));
        for (std::size_t k = 0; k < w.size(); ++k) {
            Wedge shifted = w;
            shifted[k].index = shifted[k].index.raised(i);
            if (shifted[k].index.order() > space.max_order) {
                throw MaxOrderExceeded("total derivative of a form exceeds the maximum order");
            }
            out.add(std::move(shifted), c);
        }
    }
    return out;
}

FunctionalForm map_coefficients(const FunctionalForm& f, const std::function<Expr(const Expr&)>& op)
{
    FunctionalForm out(f.degree());
    for (const auto& [w, c] : f.terms()) out.add(w, op(c));
    return out;
}

int form_order(const FunctionalForm& f)
{
    int out = -1;
    for (const auto& [w, c] : f.terms()) {
        out = std::max(out, jet_order(c));
        for (const auto& b : w) out = std::max(out, b.index.order());
    }
    return out;
}

namespace {

std::string basis_text(const DeltaBasis& b, const JetSpace& space, bool latex)
{
    const Expr jet = Expr::jet(b.field, b.index);
    return latex ? "\\delta " + to_latex(jet, space) : "\xCE\xB4" + to_string(jet, space);
}

std::string render(const FunctionalForm& f, const JetSpace& space, bool latex)
{
    if (f.is_zero()) return "0";
    // Reversing k factors contributes (-1)^{k(k-1)/2}.
    const int k = f.degree();
    const bool flip = (k * (k - 1) / 2) % 2 == 1;
    const std::string wedge_sym = latex ? " \\wedge " : " \xE2\x88\xA7 ";
    std::ostringstream os;
    bool first = true;
    for (auto it = f.terms().rbegin(); it != f.terms().rend(); ++it) {
        Expr c = flip ? -it->second : it->second;
        std::string factors;
        for (auto b = it->first.rbegin(); b != it->first.rend(); ++b) {
            if (!factors.empty()) factors += wedge_sym;
            factors += basis_text(*b, space, latex);
        }
        bool negative = false;
        if (c.size() == 1 && c.terms().begin()->second < 0) {
            negative = true;
            c = -c;
        }
        std::string body;
        if (factors.empty()) {
            body = latex ? to_latex(c, space) : to_string(c, space);
            if (c.size() > 1) body = latex ? "\\left(" + body + "\\right)" : "(" + body + ")";
        } else if (c == Expr(1)) {
            body = factors;
        } else {
            body = latex ? to_latex(c, space) : to_string(c, space);
            if (c.size() > 1) body = latex ? "\\left(" + body + "\\right)" : "(" + body + ")";
            body += (latex ? " " : "*") + factors;
        }
        if (first) os << (negative ? "-" : "") << body;
        else os << (negative ? " - " : " + ") << body;
        first = false;
    }
    return os.str();
}

}  // namespace

std::string to_string(const FunctionalForm& f, const JetSpace& space) { return render(f, space, false); }
std::string to_latex(const FunctionalForm& f, const JetSpace& space) { return render(f, space, true); }
std::string to_string(const DeltaBasis& b, const JetSpace& space) { return basis_text(b, space, false); }

}  // namespace varic
