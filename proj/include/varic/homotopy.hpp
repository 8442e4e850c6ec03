#pragma once

// Homotopy operator for functional forms and Lagrangian reconstruction.

#include "varic/ibp.hpp"
#include "varic/variationality.hpp"

#include <vector>

namespace varic {

/// The closed Euler form handed to lagrangian_from_euler was not closed.
class NotVariational : public Error {
public:
    using Error::Error;
};

/// Name of the internal homotopy parameter; not a valid identifier in problem files.
inline constexpr const char* kHomotopyParameter = "%s";

/// H F = int_0^1 K _| F[u0 + s(u - u0)] s^{k-1} ds for a form of degree k >= 1.
/// `center` holds one base-coordinate expression per field (empty means 0).
/// Coefficients must be polynomial in jet coordinates (UnsupportedClass otherwise).
FunctionalForm homotopy_H(const FunctionalForm& f, const std::vector<Expr>& center, const JetSpace& space);

struct LagrangianResult {
    Expr raw;         // H of the Euler form
    Expr lagrangian;  // after order reduction when requested, else raw
    DivergenceLedger ledger;
    Verdict verdict;
};

/// Lagrangian whose Euler-Lagrange expressions are `equations`. Throws
/// NotVariational when the residual does not vanish.
LagrangianResult lagrangian_from_euler(const std::vector<Expr>& equations, const std::vector<Expr>& center,
                                       const JetSpace& space, bool reduce = true);

/// H(rho F) for F of degree 0 or 1.
FunctionalForm antiexact_project(const FunctionalForm& f, const std::vector<Expr>& center, const JetSpace& space);

/// Checks H rho F + rho H F = F - s F, where s F is F at the center for
/// degree 0 and zero otherwise. Exact comparison first; 1- and 2-forms fall
/// back to equality modulo divergences.
bool invariance_check(const FunctionalForm& f, const std::vector<Expr>& center, const JetSpace& space);

/// Value of a 0-form at the center.
Expr at_center(const Expr& e, const std::vector<Expr>& center, const JetSpace& space);

}  // namespace varic
