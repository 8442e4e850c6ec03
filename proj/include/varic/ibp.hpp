#pragma once

// Rewriting modulo total divergences.
//
// Every rewrite has the shape  original = rewritten + sum_k D_{i_k}(density_k)
// and records the densities, so the discarded boundary terms stay auditable.

#include "varic/forms.hpp"
#include "varic/jet.hpp"

#include <vector>

namespace varic {

struct LedgerEntry {
    std::size_t direction = 0;
    FunctionalForm density;
};

using DivergenceLedger = std::vector<LedgerEntry>;

struct Rewrite {
    FunctionalForm form;
    DivergenceLedger ledger;
};

/// sum_k D_{i_k}(density_k), as a form of the given degree.
FunctionalForm divergence(const DivergenceLedger& ledger, int degree, const JetSpace& space);

/// Moves one i-derivative off factor `slot` of the term c * w:
/// c du_{I+e_i} -> -(D_i c) du_I for 1-forms, and the Leibniz analogue for
/// higher degree. `form` holds only the rewritten term.
Rewrite shift_derivative_off_slot(const Wedge& w, const Expr& c, std::size_t slot, std::size_t i,
                                  const JetSpace& space);

/// Reverse move on the single-monomial term m * w where m = r u_J^p u_{J+e_i}
/// (the factor u_{J+e_i} has exponent 1): integrates it against the form,
/// adding an i-derivative to every slot.
Rewrite integrate_factor(const Wedge& w, const Expr& monomial, const Atom& factor, std::size_t i,
                         const JetSpace& space);

/// All distinct 1-forms reachable from `f` by single-monomial shifts in either
/// direction, keeping every order <= max_order. Breadth-first; the input comes
/// first. Throws LimitExceeded past `cap` members.
std::vector<FunctionalForm> enumerate_representatives(const FunctionalForm& f, int max_order, const JetSpace& space,
                                                      std::size_t cap = 200);

/// Moves every derivative off the factors of a 1-form.
Rewrite to_euler_form(const FunctionalForm& f, const JetSpace& space);

/// Rewrites a 2-form so that every term has an order-0 factor.
Rewrite reduce_second_slot(const FunctionalForm& f, const JetSpace& space);

struct ReducedLagrangian {
    Expr lagrangian;
    DivergenceLedger ledger;
};

/// Greedy monomial-wise order reduction; EL(result) = EL(L).
ReducedLagrangian reduce_lagrangian_order(const Expr& lagrangian, const JetSpace& space);

/// Operator M with M[a][b] built from each term c du^b_J ^ du^a_I as
/// (-1)^|I| D_I c D_J, antisymmetrized. Two 2-forms are equal modulo
/// divergences exactly when their operators agree.
LinDiffOpMatrix pairing_operator(const FunctionalForm& f, const JetSpace& space);

}  // namespace varic
