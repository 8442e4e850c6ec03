#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support.hpp"
#include "varic/variationality.hpp"

using namespace varic;
using varic::testing::Rng;

namespace {

MultiIndex mi(std::vector<int> c) { return MultiIndex(std::move(c)); }

JetSpace sonin_space()
{
    JetSpace s({"t"}, {"x"});
    s.add_function("g", {s.x("t"), s.u("x"), s.u("x", "t")}, true);
    s.add_function("F", {s.x("t"), s.u("x"), s.u("x", "t")}, false);
    return s;
}

Expr random_t_poly(Rng& rng) { return testing::random_base_polynomial(1, rng, 2, 2); }

// Random linear second-order system in two unknowns; half are Euler-Lagrange
// expressions of quadratic Lagrangians.
std::vector<Expr> random_linear_system(const JetSpace& s, Rng& rng, bool from_lagrangian)
{
    std::vector<Expr> x{s.u("x"), s.u("y")};
    std::vector<Expr> v{s.u("x", "t"), s.u("y", "t")};
    if (from_lagrangian) {
        Expr l;
        for (std::size_t i = 0; i < 2; ++i) {
            for (std::size_t j = i; j < 2; ++j) {
                l += random_t_poly(rng) * v[i] * v[j] + random_t_poly(rng) * x[i] * x[j];
            }
            for (std::size_t j = 0; j < 2; ++j) l += random_t_poly(rng) * v[i] * x[j];
        }
        return euler_lagrange(l, s);
    }
    std::vector<Expr> e(2);
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            e[i] += random_t_poly(rng) * s.u(j, mi({2})) + random_t_poly(rng) * v[j] + random_t_poly(rng) * x[j];
        }
    }
    return e;
}

}  // namespace

TEST_CASE("helmholtz_residual examples")
{
    JetSpace s({"t"}, {"u"});
    s.add_param("b");
    const Expr u = s.u("u");
    const Expr ut = s.u("u", "t");
    const Expr utt = s.u("u", "tt");
    CHECK(is_zero(helmholtz_residual({utt + u}, s)));
    const auto r = helmholtz_residual({utt + s.param("b") * ut + u}, s);
    CHECK(r[0][0] == LinDiffOp::derivative(mi({1}), 2 * s.param("b")));
    CHECK(to_string(r[0][0], s) == "2*b*D_t");

    JetSpace h({"t", "x"}, {"u"});
    const auto rh = helmholtz_residual({h.u("u", "t") - h.u("u", "xx")}, h);
    CHECK(rh[0][0] == LinDiffOp::derivative(mi({1, 0}), Expr(2)));
}

TEST_CASE("is_variational examples and witnesses")
{
    JetSpace a({"t"}, {"x"});
    a.add_function("f", {a.u("x")}, false);
    const Verdict autonomous = is_variational({a.u("x", "t") - a.fn("f")}, a);
    CHECK_FALSE(autonomous.variational);
    CHECK(to_string(autonomous.obstruction, a) == "\xCE\xB4x_t \xE2\x88\xA7 \xCE\xB4x");

    JetSpace o({"t"}, {"x"});
    CHECK(is_variational({o.u("x", "tt") + o.u("x")}, o).variational);

    JetSpace c({"t"}, {"x", "y"});
    const Expr ex = -total_derivative(c.u("x", "t") - c.u("y"), 0, c);
    const Expr ey = -total_derivative(c.u("y", "t") + c.u("x"), 0, c);
    CHECK(is_variational({ex, ey}, c).variational);

    JetSpace h({"t", "x"}, {"u"});
    const Verdict heat = is_variational({h.u("u", "t") - h.u("u", "xx")}, h);
    CHECK_FALSE(heat.variational);
    FunctionalForm expected(2);
    expected.add({DeltaBasis{0, mi({1, 0})}, DeltaBasis{0, mi({0, 0})}}, Expr(1));
    CHECK(heat.obstruction == expected);

    JetSpace d({"t"}, {"u"});
    d.add_param("b");
    const Verdict damped = is_variational({d.u("u", "tt") + d.param("b") * d.u("u", "t") + d.u("u")}, d);
    CHECK(to_string(damped.obstruction, d) == "b*\xCE\xB4u_t \xE2\x88\xA7 \xCE\xB4u");
}

TEST_CASE("restrict_on_solutions examples")
{
    const JetSpace s = sonin_space();
    const Expr xtt = s.u("x", "tt");
    const std::vector<SolvedEquation> solved = solve_leading({xtt - s.fn("F")}, s);
    REQUIRE(solved.size() == 1);
    CHECK(restrict_on_solutions(xtt * s.fn("g", {0, 0, 1}), solved, s) == s.fn("F") * s.fn("g", {0, 0, 1}));
    CHECK(restrict_on_solutions(s.u("x"), solved, s) == s.u("x"));
    CHECK(restrict_on_solutions(total_derivative(s.fn("g"), 0, s), solved, s) ==
          s.fn("g", {1, 0, 0}) + s.fn("g", {0, 1, 0}) * s.u("x", "t") + s.fn("g", {0, 0, 1}) * s.fn("F"));

    // Prolongations: u_ttt on u_tt = -u becomes -u_t.
    JetSpace o({"t"}, {"u"}, 4);
    const auto sho = solve_leading({o.u("u", "tt") + o.u("u")}, o);
    CHECK(restrict_on_solutions(o.u("u", "ttt") + o.u("u", "tttt"), sho, o) == -o.u("u", "t") + o.u("u"));

    JetSpace n({"t"}, {"x"});
    CHECK_THROWS_AS(solve_leading({pow(n.u("x", "t"), 2) - 1}, n), DomainError);

    // x_tt = F(t, x, x_t): R = -2 F_{x_t} D_t - D_t(F_{x_t}), restricted on solutions.
    const Verdict v = is_variational({xtt - s.fn("F")}, s, true);
    CHECK_FALSE(v.variational);
    const Expr fv = s.fn("F", {0, 0, 1});
    const Expr dfv = restrict_on_solutions(total_derivative(fv, 0, s), solved, s);
    CHECK(v.residual[0][0] == LinDiffOp::derivative(mi({1}), -2 * fv) + LinDiffOp::scalar(-dfv, 1));
}

TEST_CASE("second_order_HC examples")
{
    JetSpace s({"t"}, {"x"});
    s.add_param("b");
    CHECK(second_order_HC({s.u("x", "tt") + s.u("x")}, s).satisfied());
    const auto hc = second_order_HC({s.u("x", "tt") + s.param("b") * s.u("x", "t") + s.u("x")}, s);
    CHECK_FALSE(hc.satisfied());
    bool found = false;
    for (const auto& c : hc.symmetrized) {
        if (c.family == 2) {
            CHECK(c.value == s.param("b"));
            found = true;
        } else {
            CHECK(c.value.is_zero());
        }
    }
    CHECK(found);
    JetSpace two({"t", "x"}, {"u"});
    CHECK_THROWS_AS(second_order_HC({two.u("u", "t")}, two), DomainError);
}

TEST_CASE("second_order_HC agrees with the residual on random linear systems")
{
    JetSpace s({"t"}, {"x", "y"}, 4);
    Rng rng(83);
    int variational = 0;
    for (int k = 0; k < 50; ++k) {
        const auto e = random_linear_system(s, rng, k % 2 == 0);
        const bool hc = second_order_HC(e, s).satisfied();
        const bool r = is_zero(helmholtz_residual(e, s));
        CHECK(hc == r);
        variational += r ? 1 : 0;
    }
    CHECK(variational >= 25);
    CHECK(variational < 50);
}

TEST_CASE("residual of an Euler-Lagrange system vanishes; skew-adjointness")
{
    JetSpace s({"t", "x"}, {"u", "v"}, 8);
    Rng rng(89);
    for (int k = 0; k < 50; ++k) {
        const Expr l = testing::random_polynomial(s, rng, k % 3 == 0 ? 2 : 1, 4, 3, true);
        CHECK(is_zero(helmholtz_residual(euler_lagrange(l, s), s)));
        std::vector<Expr> e{testing::random_polynomial(s, rng, 2, 3, 2, true),
                            testing::random_polynomial(s, rng, 2, 3, 2, true)};
        const auto r = helmholtz_residual(e, s);
        for (std::size_t a = 0; a < 2; ++a) {
            for (std::size_t b = 0; b < 2; ++b) CHECK(r[a][b] == -adjoint(r[b][a], s));
        }
    }
}

TEST_CASE("scalar second-order residual: order-0 part is half the derivative of the order-1 part")
{
    JetSpace s({"t"}, {"x"}, 6);
    Rng rng(97);
    for (int k = 0; k < 20; ++k) {
        const Expr g = testing::random_polynomial(s, rng, 1, 3, 2, true);
        const Expr f = testing::random_polynomial(s, rng, 1, 3, 2, true);
        const auto r = helmholtz_residual({g * (s.u("x", "tt") - f)}, s);
        CHECK(r[0][0].coefficient(mi({2})).is_zero());
        CHECK(r[0][0].coefficient(mi({0})) == total_derivative(r[0][0].coefficient(mi({1})), 0, s) / Rational(2));
    }
    // With given functions.
    const JetSpace g = sonin_space();
    const auto r = helmholtz_residual({g.fn("g") * (g.u("x", "tt") - g.fn("F"))}, g);
    CHECK(r[0][0].coefficient(mi({0})) == total_derivative(r[0][0].coefficient(mi({1})), 0, g) / Rational(2));
}

TEST_CASE("gateaux_check examples")
{
    JetSpace s({"t"}, {"u"});
    const Expr u = s.u("u");
    const Expr ut = s.u("u", "t");
    const Expr t = s.x("t");
    const Expr l = -pow(ut, 2) / 2 + pow(u, 2) / 2;
    const std::vector<Expr> e{s.u("u", "tt") + u};
    const std::vector<std::pair<Rational, Rational>> box{{0, 1}};
    const auto rep = gateaux_check(l, e, {pow(t, 2)}, {pow(t, 2) * pow(1 - t, 2)}, box, {}, s);
    CHECK(rep.ok);
    CHECK(rep.exact);
    CHECK(rep.lhs_exact == rep.rhs_exact);

    const auto zero = gateaux_check(l, e, {pow(t, 2)}, {Expr(0)}, box, {}, s);
    CHECK(zero.ok);
    CHECK(zero.lhs_exact == 0);

    const auto bad = gateaux_check(pow(u, 2), {ut}, {pow(t, 2)}, {t * (1 - t)}, box, {}, s);
    CHECK_FALSE(bad.ok);

    CHECK_THROWS_AS(gateaux_check(l, e, {pow(t, 2)}, {t}, box, {}, s), DomainError);

    // exp factor: L = e^{bt}(-u_t^2/2 + u^2/2) with b = 1/3
    s.add_param("b");
    const Expr b = s.param("b");
    const Expr le = Expr::exp(b * t) * l;
    const auto ee = euler_lagrange(le, s);
    const auto rexp = gateaux_check(le, ee, {t + 1}, {pow(t * (1 - t), 2)}, box, {{*b.as_atom(), Rational(1, 3)}}, s);
    CHECK_FALSE(rexp.exact);
    CHECK(rexp.ok);
}
