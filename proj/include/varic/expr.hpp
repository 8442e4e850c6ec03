#pragma once

// Exact symbolic expressions over jet coordinates.
//
// Every Expr value is kept in canonical form: a fully expanded sum of
// monomials, each a rational coefficient times a sorted product of atoms.
// Structural equality of two Exprs therefore coincides with semantic
// equality on the supported class (polynomials in jet coordinates, base
// coordinates, parameters and unknown-function applications, with exp/sin/cos
// atoms). exp(a)*exp(b) is merged into exp(a+b); no other transcendental
// identity is applied.

#include "varic/error.hpp"

#include <gmpxx.h>

#include <compare>
#include <functional>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace varic {

using Rational = mpq_class;

/// Per-base-coordinate derivative counts. Order-independent by construction.
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::size_t dims) : counts_(dims, 0) {}
    explicit MultiIndex(std::vector<int> counts) : counts_(std::move(counts)) {}

    static MultiIndex unit(std::size_t dims, std::size_t direction);

    [[nodiscard]] std::size_t dims() const noexcept { return counts_.size(); }
    [[nodiscard]] int order() const noexcept;
    [[nodiscard]] int operator[](std::size_t i) const { return counts_.at(i); }
    [[nodiscard]] const std::vector<int>& counts() const noexcept { return counts_; }

    [[nodiscard]] MultiIndex raised(std::size_t direction) const;
    [[nodiscard]] MultiIndex lowered(std::size_t direction) const;
    /// Componentwise <=.
    [[nodiscard]] bool divides(const MultiIndex& other) const;
    [[nodiscard]] MultiIndex operator+(const MultiIndex& other) const;
    [[nodiscard]] MultiIndex operator-(const MultiIndex& other) const;

    /// Directions listed with multiplicity, ascending (t,t,x for u_ttx).
    [[nodiscard]] std::vector<std::size_t> directions() const;

    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
    /// Ordered by total order first, then lexicographically by counts.
    friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b);

private:
    std::vector<int> counts_;
};

enum class AtomKind { Base, Param, Jet, Function, Exp, Sin, Cos };

class Expr;

/// Indivisible factor of a monomial.
///
/// Base: coordinate `index`. Param: opaque constant `name`. Jet: u^index_multi.
/// Function: `name(args)` with partial-derivative counts `deriv` per argument
/// slot. Exp/Sin/Cos: single argument in `args`.
struct Atom {
    AtomKind kind = AtomKind::Base;
    int index = 0;
    MultiIndex multi;
    std::string name;
    bool nonzero = false;  // parameters: declared nonzero, may be inverted
    std::vector<Expr> args;
    std::vector<int> deriv;

    [[nodiscard]] bool is_symbol() const noexcept
    {
        return kind == AtomKind::Base || kind == AtomKind::Param || kind == AtomKind::Jet;
    }
};

int compare(const Atom& a, const Atom& b);
int compare(const Expr& a, const Expr& b);

struct AtomLess {
    bool operator()(const Atom& a, const Atom& b) const { return compare(a, b) < 0; }
};

using Factor = std::pair<Atom, int>;
/// Sorted by atom, exponents nonzero, no repeated atoms, at most one Exp atom
/// (with exponent 1).
using Monomial = std::vector<Factor>;

int compare(const Monomial& a, const Monomial& b);

struct MonomialLess {
    bool operator()(const Monomial& a, const Monomial& b) const { return compare(a, b) < 0; }
};

using Terms = std::map<Monomial, Rational, MonomialLess>;

/// Immutable canonical expression. Cheap to copy.
class Expr {
public:
    Expr();
    Expr(long value);  // NOLINT(google-explicit-constructor)
    Expr(int value) : Expr(static_cast<long>(value)) {}  // NOLINT
    Expr(const Rational& value);  // NOLINT

    static Expr from_atom(const Atom& atom);
    static Expr from_terms(Terms terms);
    static Expr base(int index);
    static Expr jet(int field, MultiIndex index);
    static Expr param(std::string name, bool nonzero = false);
    static Expr function(std::string name, std::vector<Expr> args, std::vector<int> deriv = {});
    static Expr exp(const Expr& arg);
    static Expr sin(const Expr& arg);
    static Expr cos(const Expr& arg);

    [[nodiscard]] const Terms& terms() const noexcept { return *terms_; }
    [[nodiscard]] std::size_t size() const noexcept { return terms_->size(); }
    [[nodiscard]] bool is_zero() const noexcept { return terms_->empty(); }
    [[nodiscard]] std::optional<Rational> as_rational() const;
    /// The single atom if this expression is exactly one atom with coefficient 1.
    [[nodiscard]] std::optional<Atom> as_atom() const;

    friend bool operator==(const Expr& a, const Expr& b) { return compare(a, b) == 0; }
    friend bool operator<(const Expr& a, const Expr& b) { return compare(a, b) < 0; }

    Expr& operator+=(const Expr& other);
    Expr& operator-=(const Expr& other);
    Expr& operator*=(const Expr& other);

private:
    std::shared_ptr<const Terms> terms_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Rational& b);
/// Division by an invertible monomial: nonzero rational times nonzero
/// parameters and exp atoms. Anything else is UnsupportedClass.
Expr divide(const Expr& numerator, const Expr& denominator);
/// Integer power; negative exponents require an invertible base.
Expr pow(const Expr& base, int exponent);

/// True when `e` is a single monomial that `divide` accepts as denominator.
bool is_invertible(const Expr& e);

/// Monomial with coefficient 1 as an expression.
Expr monomial_expr(const Monomial& m);

// ---------------------------------------------------------------------------
// Declarations and jet-space configuration

struct ParamDecl {
    std::string name;
    bool nonzero = false;
};

struct FunctionDecl {
    std::string name;
    std::vector<Expr> args;  // base coordinates and jet coordinates
    bool unknown = false;    // solved for (true) or given arbitrary function
};

/// Symbol table and limits shared by every operation on one problem.
class JetSpace {
public:
    JetSpace() = default;
    JetSpace(std::vector<std::string> base, std::vector<std::string> fields, int max_order = 4);

    std::vector<std::string> base;
    std::vector<std::string> fields;
    int max_order = 4;
    std::vector<ParamDecl> params;
    std::vector<FunctionDecl> functions;

    [[nodiscard]] std::size_t dims() const noexcept { return base.size(); }
    [[nodiscard]] std::size_t field_count() const noexcept { return fields.size(); }

    [[nodiscard]] Expr x(std::size_t i) const;
    [[nodiscard]] Expr x(const std::string& name) const;
    [[nodiscard]] Expr u(std::size_t field, const MultiIndex& index) const;
    /// Jet coordinate from a field name and derivative letters, e.g. u("u", "tx").
    /// Letters refer to single-character base names.
    [[nodiscard]] Expr u(const std::string& field, const std::string& letters = "") const;
    [[nodiscard]] Expr param(const std::string& name) const;
    /// Function applied to its declared arguments, optionally differentiated.
    [[nodiscard]] Expr fn(const std::string& name, std::vector<int> deriv = {}) const;

    ParamDecl& add_param(std::string name, bool nonzero = false);
    FunctionDecl& add_function(std::string name, std::vector<Expr> args, bool unknown);

    [[nodiscard]] const ParamDecl* find_param(const std::string& name) const;
    [[nodiscard]] const FunctionDecl* find_function(const std::string& name) const;
    [[nodiscard]] int base_index(const std::string& name) const;   // -1 when absent
    [[nodiscard]] int field_index(const std::string& name) const;  // -1 when absent

    [[nodiscard]] MultiIndex zero_index() const { return MultiIndex(dims()); }
};

// ---------------------------------------------------------------------------
// Kernel operations

/// Re-canonicalizes `e` and validates every jet coordinate against the
/// space's maximum order. Idempotent.
Expr normalize(const Expr& e, const JetSpace& space);

/// Highest jet order present anywhere in `e` (including inside function and
/// exp arguments); -1 when `e` has no jet coordinate.
int jet_order(const Expr& e);

/// Formal partial derivative with respect to a symbol atom (base coordinate,
/// parameter or jet coordinate). Unknown-function applications differentiate
/// through their arguments by the chain rule, recording slot derivatives.
Expr diff(const Expr& e, const Atom& var);
Expr diff(const Expr& e, const Expr& var);

/// Extends `leaf` (defined on base, parameter and jet atoms) to a derivation
/// on all expressions: Leibniz over products, chain rule through function,
/// exp, sin and cos atoms.
Expr apply_derivation(const Expr& e, const std::function<Expr(const Atom&)>& leaf);

/// Derivative of a function application with respect to argument `slot`.
Expr diff_slot(const Atom& function_atom, std::size_t slot);

using Bindings = std::map<Atom, Expr, AtomLess>;

/// Simultaneous substitution of atoms (symbols or exact function
/// applications). Arguments of function/exp/sin/cos atoms are substituted too.
Expr substitute(const Expr& e, const Bindings& bindings);
/// As above, failing when the result exceeds the space's maximum jet order.
Expr substitute(const Expr& e, const Bindings& bindings, const JetSpace& space);

/// Replaces every application of function `name` (any arguments, any
/// derivative record) by `value`, which is written in terms of the function's
/// declared argument expressions `declared_args`. Derivative records become
/// partial derivatives of `value`.
Expr substitute_function(const Expr& e, const std::string& name,
                         const std::vector<Expr>& declared_args, const Expr& value);

/// Every atom occurring in `e`, including nested ones.
std::vector<Atom> atoms(const Expr& e);
/// Jet coordinates occurring anywhere in `e`, sorted.
std::vector<Atom> jet_atoms(const Expr& e);
bool contains_atom(const Expr& e, const Atom& atom);
/// True when `atom` occurs inside a function/exp/sin/cos argument of `e`.
bool occurs_nested(const Expr& e, const Atom& atom);

/// Is the canonical form zero.
bool is_zero(const Expr& e);

// ---------------------------------------------------------------------------
// Evaluation

/// Exact rational or floating value; arithmetic promotes to floating when
/// either side is inexact.
class Number {
public:
    Number() : value_(Rational(0)) {}
    Number(const Rational& q) : value_(q) {}  // NOLINT
    Number(double d) : value_(d) {}           // NOLINT

    [[nodiscard]] bool exact() const noexcept { return std::holds_alternative<Rational>(value_); }
    [[nodiscard]] const Rational& rational() const { return std::get<Rational>(value_); }
    [[nodiscard]] double to_double() const;

    friend Number operator+(const Number& a, const Number& b);
    friend Number operator*(const Number& a, const Number& b);
    friend Number pow(const Number& a, int exponent);

private:
    std::variant<Rational, double> value_;
};

using Assignment = std::map<Atom, Rational, AtomLess>;

/// Value of `e` under `assignment` (symbols and function applications).
/// exp/sin/cos are evaluated in double precision; everything else exactly.
Number eval_exact(const Expr& e, const Assignment& assignment);

// ---------------------------------------------------------------------------
// Printing

/// Linear ASCII form, re-readable by the problem parser.
std::string to_string(const Expr& e, const JetSpace& space);
/// Math-mode LaTeX fragment.
std::string to_latex(const Expr& e, const JetSpace& space);
std::string atom_to_string(const Atom& a, const JetSpace& space);
std::string rational_to_string(const Rational& q);
/// Coefficient of the term printed first (0 for the zero expression).
Rational leading_display_coefficient(const Expr& e);

}  // namespace varic
