#pragma once

// Total derivatives, the Euler-Lagrange operator, linearization and formal
// adjoints of linear differential operators.

#include "varic/expr.hpp"

#include <map>
#include <vector>

namespace varic {

/// Sum of a_I D_I with expression coefficients. Zero coefficients are never stored.
class LinDiffOp {
public:
    LinDiffOp() = default;

    /// Multiplication by `e` (order-0 operator).
    static LinDiffOp scalar(const Expr& e, std::size_t dims);
    static LinDiffOp derivative(const MultiIndex& index, const Expr& coefficient = Expr(1));

    [[nodiscard]] const std::map<MultiIndex, Expr>& terms() const noexcept { return terms_; }
    [[nodiscard]] Expr coefficient(const MultiIndex& index) const;
    [[nodiscard]] bool is_zero() const noexcept { return terms_.empty(); }
    /// -1 for the zero operator.
    [[nodiscard]] int order() const;

    void add(const MultiIndex& index, const Expr& coefficient);

    LinDiffOp& operator+=(const LinDiffOp& other);
    LinDiffOp& operator-=(const LinDiffOp& other);
    friend LinDiffOp operator+(LinDiffOp a, const LinDiffOp& b) { return a += b; }
    friend LinDiffOp operator-(LinDiffOp a, const LinDiffOp& b) { return a -= b; }
    friend LinDiffOp operator-(const LinDiffOp& a);
    /// Left multiplication by a scalar expression: (e a_I) D_I.
    friend LinDiffOp operator*(const Expr& e, const LinDiffOp& a);
    friend bool operator==(const LinDiffOp& a, const LinDiffOp& b);

private:
    std::map<MultiIndex, Expr> terms_;
};

/// Rows indexed by equation, columns by field.
using LinDiffOpMatrix = std::vector<std::vector<LinDiffOp>>;

bool is_zero(const LinDiffOpMatrix& m);

/// D_i e. Unknown-function applications differentiate through their
/// arguments. Throws MaxOrderExceeded past the space's max order.
Expr total_derivative(const Expr& e, std::size_t i, const JetSpace& space);
/// D_I e, one direction at a time.
Expr total_derivative(const Expr& e, const MultiIndex& index, const JetSpace& space);

/// Variational derivative of `lagrangian` with respect to field `field`.
/// Requires 2 * order(L) <= max order.
Expr euler_lagrange(const Expr& lagrangian, std::size_t field, const JetSpace& space);
std::vector<Expr> euler_lagrange(const Expr& lagrangian, const JetSpace& space);

/// Linearization: entry [a][b] = sum_I dE_a/du^b_I D_I.
LinDiffOpMatrix frechet(const std::vector<Expr>& equations, const JetSpace& space);

Expr op_apply(const LinDiffOp& p, const Expr& e, const JetSpace& space);
/// P o Q, Leibniz-expanded into normal form.
LinDiffOp op_compose(const LinDiffOp& p, const LinDiffOp& q, const JetSpace& space);
/// Formal adjoint sum (-1)^|I| D_I o a_I in normal form.
LinDiffOp adjoint(const LinDiffOp& p, const JetSpace& space);

/// D_i o Q in normal form.
LinDiffOp compose_derivative(std::size_t i, const LinDiffOp& q, const JetSpace& space);

std::string to_string(const LinDiffOp& p, const JetSpace& space);
std::string to_latex(const LinDiffOp& p, const JetSpace& space);

}  // namespace varic
