#pragma once

// Variationality tests: Helmholtz residual, on-solutions restriction, the
// classical second-order conditions and a Gateaux pairing check.

#include "varic/forms.hpp"
#include "varic/jet.hpp"

#include <string>
#include <utility>
#include <vector>

namespace varic {

/// R[a][b] = Fr[a][b] - adjoint(Fr[b][a]). One equation per field.
LinDiffOpMatrix helmholtz_residual(const std::vector<Expr>& equations, const JetSpace& space);

/// 1/2 sum R[a][b]_J du^b_J ^ du^a; its pairing operator is R.
FunctionalForm residual_witness(const LinDiffOpMatrix& residual);

/// An equation solved for its leading derivative: leading = rhs.
struct SolvedEquation {
    Atom leading;
    Expr rhs;
};

/// Picks, for each equation, a highest-order jet that occurs linearly with an
/// invertible jet-free coefficient, and solves for it. DomainError otherwise.
std::vector<SolvedEquation> solve_leading(const std::vector<Expr>& equations, const JetSpace& space);

/// Substitutes leading derivatives and their prolongations until nothing
/// changes. DomainError when the substitution does not settle.
Expr restrict_on_solutions(const Expr& e, const std::vector<SolvedEquation>& solved, const JetSpace& space);
LinDiffOp restrict_on_solutions(const LinDiffOp& p, const std::vector<SolvedEquation>& solved, const JetSpace& space);
LinDiffOpMatrix restrict_on_solutions(const LinDiffOpMatrix& m, const std::vector<SolvedEquation>& solved,
                                      const JetSpace& space);
FunctionalForm restrict_on_solutions(const FunctionalForm& f, const std::vector<SolvedEquation>& solved,
                                     const JetSpace& space);

struct Verdict {
    bool variational = false;
    LinDiffOpMatrix residual;
    FunctionalForm obstruction{2};
    std::vector<std::string> notes;
};

/// Decides whether `equations` are variational as they stand, or (with
/// on_solutions) after restriction to the solutions of `constraints`
/// (defaults to the equations themselves).
Verdict is_variational(const std::vector<Expr>& equations, const JetSpace& space, bool on_solutions = false,
                       const std::vector<Expr>& constraints = {});

struct HelmholtzCondition {
    int family = 0;  // 1: second-derivative symmetry, 2: velocity, 3: position
    std::size_t i = 0;
    std::size_t j = 0;
    Expr value;
};

struct SecondOrderHC {
    std::vector<HelmholtzCondition> antisymmetrized;  // raw coefficients of rho E, informational
    std::vector<HelmholtzCondition> symmetrized;      // decisive set
    [[nodiscard]] bool satisfied() const;
};

/// Classical conditions for equations of order <= 2 in one base coordinate.
SecondOrderHC second_order_HC(const std::vector<Expr>& equations, const JetSpace& space);

struct GateauxReport {
    bool ok = false;
    bool exact = true;
    double lhs = 0;
    double rhs = 0;
    Rational lhs_exact;
    Rational rhs_exact;
    std::string message;
};

/// Compares d/de int L[phi + e eta] at e = 0 with int sum_a E_a(phi) eta^a over
/// the box. phi and eta are polynomials in base coordinates (exp/sin/cos
/// allowed); `values` assigns every parameter. Exact when the integrands are
/// rational polynomials, Gauss-Legendre with relative tolerance 1e-9
/// otherwise. DomainError when eta or its derivatives below the Lagrangian's
/// order do not vanish on the boundary.
GateauxReport gateaux_check(const Expr& lagrangian, const std::vector<Expr>& equations, const std::vector<Expr>& phi,
                            const std::vector<Expr>& eta, const std::vector<std::pair<Rational, Rational>>& box,
                            const Assignment& values, const JetSpace& space);

}  // namespace varic
