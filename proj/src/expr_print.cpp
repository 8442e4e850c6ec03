#include "varic/expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>
#include <tuple>

namespace varic {

namespace {

bool single_letter_base(const JetSpace& space)
{
    return std::all_of(space.base.begin(), space.base.end(), [](const std::string& s) { return s.size() == 1; });
}

std::string base_name(const JetSpace& space, int i)
{
    if (i >= 0 && static_cast<std::size_t>(i) < space.base.size()) return space.base[static_cast<std::size_t>(i)];
    return "x" + std::to_string(i);
}

std::string field_name(const JetSpace& space, int i)
{
    if (i >= 0 && static_cast<std::size_t>(i) < space.fields.size()) return space.fields[static_cast<std::size_t>(i)];
    return "u" + std::to_string(i);
}

// Sort key placing higher-order and higher-degree monomials first.
auto display_key(const Monomial& m)
{
    int max_jet = -1;
    int fn_derivs = 0;
    int jet_degree = 0;
    int degree = 0;
    for (const auto& [a, n] : m) {
        degree += n;
        if (a.kind == AtomKind::Jet) {
            max_jet = std::max(max_jet, a.multi.order());
            jet_degree += n;
        }
        if (a.kind == AtomKind::Function) {
            for (int d : a.deriv) fn_derivs += d;
        }
    }
    return std::make_tuple(-max_jet, -fn_derivs, -jet_degree, -degree);
}

std::vector<const Terms::value_type*> display_order(const Expr& e)
{
    std::vector<const Terms::value_type*> out;
    for (const auto& t : e.terms()) out.push_back(&t);
    std::stable_sort(out.begin(), out.end(),
                     [](const auto* a, const auto* b) { return display_key(a->first) < display_key(b->first); });
    return out;
}

bool default_args(const Atom& a, const FunctionDecl* decl)
{
    if (decl == nullptr || decl->args.size() != a.args.size()) return false;
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (!(decl->args[i] == a.args[i])) return false;
    }
    return true;
}

const std::array<const char*, 24> kGreek = {"alpha", "beta",  "gamma", "delta",   "epsilon", "zeta",
                                            "eta",   "theta", "iota",  "kappa",   "lambda",  "mu",
                                            "nu",    "xi",    "pi",    "rho",     "sigma",   "tau",
                                            "upsilon", "phi", "chi",   "psi",     "omega",   "varphi"};

std::string latex_name(const std::string& name)
{
    std::string stem = name;
    std::string digits;
    while (!stem.empty() && std::isdigit(static_cast<unsigned char>(stem.back())) != 0) {
        digits.insert(digits.begin(), stem.back());
        stem.pop_back();
    }
    std::string out;
    if (std::find(kGreek.begin(), kGreek.end(), stem) != kGreek.end()) {
        out = "\\" + stem;
    } else if (stem.size() <= 1) {
        out = stem;
    } else {
        std::string escaped;
        for (char c : stem) {
            if (c == '_') escaped += "\\_";
            else escaped += c;
        }
        out = "\\mathrm{" + escaped + "}";
    }
    if (!digits.empty()) out += "_{" + digits + "}";
    return out;
}

std::string jet_letters(const MultiIndex& m, const JetSpace& space, const char* sep)
{
    std::string out;
    bool first = true;
    for (std::size_t dir : m.directions()) {
        if (!first) out += sep;
        out += base_name(space, static_cast<int>(dir));
        first = false;
    }
    return out;
}

std::string join_args(const std::vector<Expr>& args, const JetSpace& space, bool latex)
{
    std::string out;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += latex ? ", " : ",";
        out += latex ? to_latex(args[i], space) : to_string(args[i], space);
    }
    return out;
}

std::string atom_latex(const Atom& a, const JetSpace& space)
{
    switch (a.kind) {
    case AtomKind::Base:
        return latex_name(base_name(space, a.index));
    case AtomKind::Param:
        return latex_name(a.name);
    case AtomKind::Jet: {
        std::string f = latex_name(field_name(space, a.index));
        if (a.multi.order() == 0) return f;
        const char* sep = single_letter_base(space) ? "" : ",";
        std::string letters;
        bool first = true;
        for (std::size_t dir : a.multi.directions()) {
            if (!first) letters += sep;
            letters += latex_name(base_name(space, static_cast<int>(dir)));
            first = false;
        }
        return "{" + f + "}_{" + letters + "}";
    }
    case AtomKind::Function: {
        const FunctionDecl* decl = space.find_function(a.name);
        std::string out = latex_name(a.name);
        std::string sub;
        for (std::size_t k = 0; k < a.deriv.size(); ++k) {
            for (int r = 0; r < a.deriv[k]; ++r) {
                sub += decl != nullptr && k < decl->args.size() ? to_latex(decl->args[k], space)
                                                                  : "\\#" + std::to_string(k);
            }
        }
        if (!sub.empty()) out = "{" + out + "}_{" + sub + "}";
        if (!a.args.empty() && !default_args(a, decl)) out += "\\left(" + join_args(a.args, space, true) + "\\right)";
        return out;
    }
    case AtomKind::Exp:
        return "e^{" + to_latex(a.args.front(), space) + "}";
    case AtomKind::Sin:
        return "\\sin\\left(" + to_latex(a.args.front(), space) + "\\right)";
    case AtomKind::Cos:
        return "\\cos\\left(" + to_latex(a.args.front(), space) + "\\right)";
    }
    return "?";
}

std::string latex_rational(const Rational& q)
{
    if (q.get_den() == 1) return q.get_num().get_str();
    return "\\frac{" + q.get_num().get_str() + "}{" + q.get_den().get_str() + "}";
}

}  // namespace

std::string rational_to_string(const Rational& q)
{
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string atom_to_string(const Atom& a, const JetSpace& space)
{
    switch (a.kind) {
    case AtomKind::Base:
        return base_name(space, a.index);
    case AtomKind::Param:
        return a.name;
    case AtomKind::Jet: {
        const std::string f = field_name(space, a.index);
        if (a.multi.order() == 0) return f;
        if (single_letter_base(space)) return f + "_" + jet_letters(a.multi, space, "");
        std::string out = "D[" + f;
        for (std::size_t i = 0; i < a.multi.dims(); ++i) {
            if (a.multi[i] == 0) continue;
            out += ",{" + base_name(space, static_cast<int>(i)) + "," + std::to_string(a.multi[i]) + "}";
        }
        return out + "]";
    }
    case AtomKind::Function: {
        const FunctionDecl* decl = space.find_function(a.name);
        std::string out;
        bool differentiated = std::any_of(a.deriv.begin(), a.deriv.end(), [](int d) { return d != 0; });
        if (differentiated) {
            out = "pd(" + a.name;
            for (std::size_t k = 0; k < a.deriv.size(); ++k) {
                for (int r = 0; r < a.deriv[k]; ++r) {
                    out += ", ";
                    out += decl != nullptr && k < decl->args.size() ? to_string(decl->args[k], space)
                                                                     : "#" + std::to_string(k);
                }
            }
            out += ")";
        } else {
            out = a.name;
        }
        if (!a.args.empty() && !default_args(a, decl)) out += "(" + join_args(a.args, space, false) + ")";
        return out;
    }
    case AtomKind::Exp:
        return "exp(" + to_string(a.args.front(), space) + ")";
    case AtomKind::Sin:
        return "sin(" + to_string(a.args.front(), space) + ")";
    case AtomKind::Cos:
        return "cos(" + to_string(a.args.front(), space) + ")";
    }
    return "?";
}

Rational leading_display_coefficient(const Expr& e)
{
    if (e.is_zero()) return Rational(0);
    return display_order(e).front()->second;
}

std::string to_string(const Expr& e, const JetSpace& space)
{
    if (e.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto* term : display_order(e)) {
        const Monomial& m = term->first;
        Rational c = term->second;
        const bool negative = c < 0;
        if (negative) c = -c;
        if (first) {
            if (negative) os << "-";
        } else {
            os << (negative ? " - " : " + ");
        }
        first = false;
        if (m.empty()) {
            os << rational_to_string(c);
            continue;
        }
        bool need_star = false;
        if (c != 1) {
            os << rational_to_string(c);
            need_star = true;
        }
        for (const auto& [a, n] : m) {
            if (need_star) os << "*";
            os << atom_to_string(a, space);
            if (n < 0) os << "^(" << n << ")";
            else if (n != 1) os << "^" << n;
            need_star = true;
        }
    }
    return os.str();
}

std::string to_latex(const Expr& e, const JetSpace& space)
{
    if (e.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto* term : display_order(e)) {
        const Monomial& m = term->first;
        Rational c = term->second;
        const bool negative = c < 0;
        if (negative) c = -c;
        if (first) {
            if (negative) os << "-";
        } else {
            os << (negative ? " - " : " + ");
        }
        first = false;
        if (m.empty()) {
            os << latex_rational(c);
            continue;
        }
        if (c != 1) os << latex_rational(c) << " ";
        bool space_needed = false;
        for (const auto& [a, n] : m) {
            if (space_needed) os << " ";
            std::string body = atom_latex(a, space);
            if (n != 1) {
                if (a.kind == AtomKind::Exp || a.kind == AtomKind::Sin || a.kind == AtomKind::Cos) {
                    body = "\\left(" + body + "\\right)";
                }
                body += "^{" + std::to_string(n) + "}";
            }
            os << body;
            space_needed = true;
        }
    }
    return os.str();
}

}  // namespace varic
