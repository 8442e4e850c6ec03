#pragma once

// Multiplier and nonlinear-transformation inverse problems.

#include "varic/variationality.hpp"

#include <optional>
#include <string>
#include <vector>

namespace varic {

enum class AnsatzKind { MultiplierDiagonal, MultiplierMatrix, Nonlinear };

/// Unknowns are functions declared with `unknown = true` in the jet space;
/// zero-argument unknowns are constants.
struct Ansatz {
    AnsatzKind kind = AnsatzKind::MultiplierDiagonal;
    /// Diagonal: one entry per equation. Matrix: n*n entries, row-major; row a
    /// multiplies into the coefficient of du^a. Nonlinear: one transformation
    /// per field, or empty to use the equations as written.
    std::vector<Expr> entries;
    int degree = 2;  // nonlinear: total degree of the polynomial ansatz
};

struct Condition {
    Expr expr;           // expr = 0
    std::string origin;  // residual entry and operator power, or "compatibility"
};

struct DeterminingSystem {
    JetSpace space;
    AnsatzKind kind = AnsatzKind::MultiplierDiagonal;
    int degree = 2;
    bool on_solutions = false;
    std::vector<std::string> unknowns;       // in order of first appearance
    std::vector<Expr> equations;             // as given
    std::vector<Expr> transformed;           // A*E or the transformations
    std::vector<std::vector<Expr>> matrix;   // multiplier kinds only
    bool explicit_transforms = false;        // nonlinear with listed transformations
    std::vector<Condition> conditions;
};

/// Residual conditions for A*E (restricted to the solutions of E when asked).
DeterminingSystem multiplier_conditions(const std::vector<Expr>& equations, const Ansatz& ansatz,
                                        const JetSpace& space, bool on_solutions = false);

/// Residual conditions for the transformations plus the requirement that each
/// transformation vanishes on the solutions of the equations.
DeterminingSystem nonlinear_conditions(const std::vector<Expr>& equations, const Ansatz& ansatz,
                                       const JetSpace& space, bool on_solutions = false);

enum class SolveStatus { Solved, Unsolved, NoNontrivialSolution };

std::string to_string(SolveStatus s);

struct SolutionReport {
    SolveStatus status = SolveStatus::Unsolved;
    JetSpace space;  // input space plus the free constants C1, C2, ...
    std::vector<std::pair<std::string, Expr>> bindings;
    std::vector<std::string> free_constants;
    std::vector<std::string> nonzero;  // constants that must not vanish
    std::vector<Expr> transformed;     // the transformed system after substitution
    std::optional<Expr> determinant;   // multiplier kinds
    std::vector<Condition> remaining;  // unsolved: the system as produced
    Verdict residual_check;
    std::vector<std::string> notes;
};

/// Linear algebraic elimination, then f' = c f + r(t) for single unknowns of
/// one base coordinate. Nonlinear systems are first expanded in the
/// polynomial ansatz. Anything else is reported unsolved.
SolutionReport solve_determining(const DeterminingSystem& system);

/// Substitutes every binding (unknown name -> value in its declared arguments).
Expr apply_bindings(const Expr& e, const std::vector<std::pair<std::string, Expr>>& bindings, const JetSpace& space);

/// Scales by the rational content and fixes the sign of the first printed term.
Expr normalize_condition(const Expr& e);

}  // namespace varic
