#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support.hpp"
#include "varic/homotopy.hpp"

using namespace varic;
using varic::testing::Rng;

namespace {

MultiIndex mi(std::vector<int> c) { return MultiIndex(std::move(c)); }

FunctionalForm random_one_form(const JetSpace& s, Rng& rng, int max_order, int degree)
{
    FunctionalForm f(1);
    for (int k = 0; k < 3; ++k) {
        const auto field = static_cast<std::size_t>(rng.integer(0, static_cast<int>(s.field_count()) - 1));
        std::vector<int> c(s.dims(), 0);
        c[static_cast<std::size_t>(rng.integer(0, static_cast<int>(s.dims()) - 1))] = rng.integer(0, max_order);
        f += FunctionalForm::basis(field, mi(c), testing::random_polynomial(s, rng, max_order, 3, degree, true));
    }
    return f;
}

std::vector<Expr> random_center(const JetSpace& s, Rng& rng)
{
    std::vector<Expr> c;
    for (std::size_t a = 0; a < s.field_count(); ++a) {
        c.push_back(testing::random_base_polynomial(static_cast<int>(s.dims()), rng, 2, 2));
    }
    return c;
}

// Degree-d homogeneous part of a jet polynomial (base coordinates and
// parameters carry no weight).
int jet_degree(const Monomial& m)
{
    int d = 0;
    for (const auto& [a, n] : m) d += a.kind == AtomKind::Jet ? n : 0;
    return d;
}

}  // namespace

TEST_CASE("homotopy examples")
{
    JetSpace s({"t"}, {"u"});
    const Expr u = s.u("u");
    const Expr ut = s.u("u", "t");
    const Expr utt = s.u("u", "tt");
    const FunctionalForm e = FunctionalForm::basis(0, mi({0}), utt + u);
    CHECK(homotopy_H(e, {}, s).as_scalar() == (u * utt + pow(u, 2)) / 2);

    s.add_function("lam", {s.x("t")}, false);
    const Expr lam = s.fn("lam");
    FunctionalForm g = FunctionalForm::basis(0, mi({1}), -lam * ut) + FunctionalForm::basis(0, mi({0}), lam * u);
    CHECK(homotopy_H(g, {}, s).as_scalar() == lam * (-pow(ut, 2) / 2 + pow(u, 2) / 2));

    CHECK_THROWS_AS(homotopy_H(FunctionalForm::basis(0, mi({0}), Expr::sin(u)), {}, s), UnsupportedClass);
    CHECK_THROWS_AS(homotopy_H(FunctionalForm::scalar(u), {}, s), DomainError);
}

TEST_CASE("circle equations reconstruct the expected Lagrangian")
{
    JetSpace c({"t"}, {"x", "y"});
    const Expr x = c.u("x");
    const Expr y = c.u("y");
    const Expr xt = c.u("x", "t");
    const Expr yt = c.u("y", "t");
    const std::vector<Expr> eqs{-c.u("x", "tt") + yt, -c.u("y", "tt") - xt};
    const LagrangianResult r = lagrangian_from_euler(eqs, {}, c);
    CHECK(r.lagrangian == pow(xt, 2) / 2 + pow(yt, 2) / 2 + (x * yt - y * xt) / 2);
    CHECK(jet_order(r.lagrangian) == 1);
    CHECK(jet_order(r.raw) == 2);

    JetSpace h({"t", "x"}, {"u"});
    CHECK_THROWS_AS(lagrangian_from_euler({h.u("u", "t") - h.u("u", "xx")}, {}, h), NotVariational);
}

TEST_CASE("Euler-Lagrange of the reconstruction returns the equations")
{
    JetSpace s({"t", "x"}, {"u", "v"}, 8);
    Rng rng(101);
    for (int k = 0; k < 40; ++k) {
        const Expr l = testing::random_polynomial(s, rng, k % 4 == 0 ? 2 : 1, 4, 3, true);
        const auto eqs = euler_lagrange(l, s);
        const auto center = k % 2 == 0 ? std::vector<Expr>{} : random_center(s, rng);
        const LagrangianResult r = lagrangian_from_euler(eqs, center, s, k % 3 != 0);
        CHECK(euler_lagrange(r.lagrangian, s) == eqs);
        // The two Lagrangians differ by a null Lagrangian.
        for (const auto& d : euler_lagrange(l - r.lagrangian, s)) CHECK(d.is_zero());
    }
}

TEST_CASE("homogeneous forms scale by 1/(d+1)")
{
    JetSpace s({"t", "x"}, {"u", "v"}, 6);
    Rng rng(103);
    for (int k = 0; k < 40; ++k) {
        const FunctionalForm f = random_one_form(s, rng, 2, 3);
        // Split by jet degree and compare with the contraction computed directly.
        std::map<int, FunctionalForm> parts;
        for (const auto& [w, c] : f.terms()) {
            for (const auto& [m, q] : c.terms()) {
                auto [it, ins] = parts.emplace(jet_degree(m), FunctionalForm(1));
                it->second.add(w, Expr(q) * monomial_expr(m));
            }
        }
        for (const auto& [d, part] : parts) {
            const FunctionalForm expected =
                map_coefficients(interior_euler(part, {}, s), [&](const Expr& c) { return c / Rational(d + 1); });
            CHECK(homotopy_H(part, {}, s) == expected);
        }
    }
}

TEST_CASE("homotopy of an exact 1-form recovers the 0-form")
{
    JetSpace s({"t", "x"}, {"u"}, 6);
    Rng rng(107);
    for (int k = 0; k < 40; ++k) {
        const Expr f = testing::random_polynomial(s, rng, 2, 4, 3, true);
        const auto center = k % 2 == 0 ? std::vector<Expr>{} : random_center(s, rng);
        // f minus its value at the center, computed by direct substitution.
        Bindings b;
        for (const Atom& a : jet_atoms(f)) {
            b.emplace(a, center.empty() ? Expr() : total_derivative(center[0], a.multi, s));
        }
        CHECK(antiexact_project(FunctionalForm::scalar(f), center, s).as_scalar() == f - substitute(f, b));
    }
}

TEST_CASE("invariance formula on random forms")
{
    JetSpace s({"t", "x"}, {"u", "v"}, 6);
    Rng rng(109);
    for (int k = 0; k < 30; ++k) {
        const auto center = k % 2 == 0 ? std::vector<Expr>{} : random_center(s, rng);
        CHECK(invariance_check(FunctionalForm::scalar(testing::random_polynomial(s, rng, 2, 3, 3, true)), center, s));
        const FunctionalForm one = random_one_form(s, rng, 2, 2);
        CHECK(invariance_check(one, center, s));
        const FunctionalForm two = wedge(random_one_form(s, rng, 1, 1), random_one_form(s, rng, 1, 1));
        CHECK(invariance_check(two, center, s));
    }
}

TEST_CASE("homotopy images are annihilated by the contraction")
{
    JetSpace s({"t"}, {"u", "v"}, 6);
    Rng rng(113);
    for (int k = 0; k < 30; ++k) {
        const auto center = k % 2 == 0 ? std::vector<Expr>{} : random_center(s, rng);
        const FunctionalForm two = wedge(random_one_form(s, rng, 2, 1), random_one_form(s, rng, 2, 1));
        CHECK(interior_euler(homotopy_H(two, center, s), center, s).is_zero());
        CHECK(homotopy_H(homotopy_H(two, center, s), center, s).is_zero());
    }
}
