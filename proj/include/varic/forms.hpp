#pragma once

// Functional exterior algebra over the vertical basis du^a_I.

#include "varic/expr.hpp"

#include <map>
#include <vector>

namespace varic {

/// du^field_index. Ordered by field, then total order, then counts.
struct DeltaBasis {
    int field = 0;
    MultiIndex index;

    friend bool operator==(const DeltaBasis&, const DeltaBasis&) = default;
    friend std::strong_ordering operator<=>(const DeltaBasis& a, const DeltaBasis& b);
};

/// Strictly increasing list of basis elements.
using Wedge = std::vector<DeltaBasis>;

inline constexpr int kMaxFormDegree = 3;

class FunctionalForm {
public:
    explicit FunctionalForm(int degree = 0);

    static FunctionalForm scalar(const Expr& e);
    /// coefficient * du^field_index
    static FunctionalForm basis(int field, const MultiIndex& index, const Expr& coefficient = Expr(1));
    /// sum_a E_a du^a
    static FunctionalForm euler_form(const std::vector<Expr>& equations, const JetSpace& space);

    [[nodiscard]] int degree() const noexcept { return degree_; }
    [[nodiscard]] const std::map<Wedge, Expr>& terms() const noexcept { return terms_; }
    [[nodiscard]] bool is_zero() const noexcept { return terms_.empty(); }
    [[nodiscard]] Expr coefficient(const Wedge& w) const;
    /// Degree-0 value (zero for the empty form).
    [[nodiscard]] Expr as_scalar() const;

    /// Adds coefficient * (f_1 ^ ... ^ f_k) for factors in any order.
    void add(Wedge factors, const Expr& coefficient);

    FunctionalForm& operator+=(const FunctionalForm& other);
    FunctionalForm& operator-=(const FunctionalForm& other);
    friend FunctionalForm operator+(FunctionalForm a, const FunctionalForm& b) { return a += b; }
    friend FunctionalForm operator-(FunctionalForm a, const FunctionalForm& b) { return a -= b; }
    friend FunctionalForm operator-(const FunctionalForm& a);
    friend FunctionalForm operator*(const Expr& c, const FunctionalForm& f);
    friend bool operator==(const FunctionalForm& a, const FunctionalForm& b);

private:
    int degree_;
    std::map<Wedge, Expr> terms_;
};

FunctionalForm wedge(const FunctionalForm& f, const FunctionalForm& g);

/// Vertical exterior derivative (no integration by parts).
FunctionalForm fed(const FunctionalForm& f);

/// Contraction with the Euler vector field of `center` (one Expr per field,
/// base coordinates only; empty means zero).
FunctionalForm interior_euler(const FunctionalForm& f, const std::vector<Expr>& center, const JetSpace& space);

/// D_i acting on coefficients and on factors (du_I -> du_{I+e_i}) by Leibniz.
FunctionalForm total_derivative(const FunctionalForm& f, std::size_t i, const JetSpace& space);

/// Applies `op` to every coefficient.
FunctionalForm map_coefficients(const FunctionalForm& f, const std::function<Expr(const Expr&)>& op);

/// Highest order among factors and coefficient jets.
int form_order(const FunctionalForm& f);

/// Terms printed with factors in descending basis order, so an order-0 factor
/// comes last (du_t ^ du).
std::string to_string(const FunctionalForm& f, const JetSpace& space);
std::string to_latex(const FunctionalForm& f, const JetSpace& space);
std::string to_string(const DeltaBasis& b, const JetSpace& space);

}  // namespace varic
