#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support.hpp"
#include "varic/ibp.hpp"

#include <algorithm>

using namespace varic;
using varic::testing::Rng;

namespace {

MultiIndex mi(std::vector<int> c) { return MultiIndex(std::move(c)); }

FunctionalForm one_form(const Expr& c, int field, const MultiIndex& i) { return FunctionalForm::basis(field, i, c); }

FunctionalForm random_form(const JetSpace& s, Rng& rng, int degree, int order, int coeff_order)
{
    FunctionalForm f(degree);
    const int n = rng.integer(1, 4);
    for (int k = 0; k < n; ++k) {
        Wedge w;
        for (int d = 0; d < degree; ++d) {
            MultiIndex i = s.zero_index();
            const int o = rng.integer(0, order);
            for (int r = 0; r < o; ++r) i = i.raised(static_cast<std::size_t>(rng.integer(0, static_cast<int>(s.dims()) - 1)));
            w.push_back(DeltaBasis{rng.integer(0, static_cast<int>(s.field_count()) - 1), i});
        }
        f.add(w, testing::random_polynomial(s, rng, coeff_order, 3, 2, true));
    }
    return f;
}

bool contains(const std::vector<FunctionalForm>& v, const FunctionalForm& f)
{
    return std::find(v.begin(), v.end(), f) != v.end();
}

// Independent oracle: integral over the unit box of w(X, Y) at the section
// phi, with X and Y vanishing (with derivatives) on the boundary.
Rational pair_integral(const FunctionalForm& w, const std::vector<Expr>& phi, const std::vector<Expr>& x,
                       const std::vector<Expr>& y)
{
    auto value = [](const std::vector<Expr>& v, const DeltaBasis& b) {
        Expr e = v.at(static_cast<std::size_t>(b.field));
        for (std::size_t d = 0; d < b.index.dims(); ++d) {
            for (int r = 0; r < b.index[d]; ++r) e = diff(e, Expr::base(static_cast<int>(d)));
        }
        return e;
    };
    Expr integrand;
    for (const auto& [wedge, c] : w.terms()) {
        const Expr cc = testing::plug_section(c, phi);
        integrand += cc * (value(x, wedge[0]) * value(y, wedge[1]) - value(x, wedge[1]) * value(y, wedge[0]));
    }
    return testing::integrate_unit_box(integrand);
}

Rational one_form_integral(const FunctionalForm& w, const std::vector<Expr>& phi, const std::vector<Expr>& x)
{
    Expr integrand;
    for (const auto& [wedge, c] : w.terms()) {
        Expr e = x.at(static_cast<std::size_t>(wedge[0].field));
        for (std::size_t d = 0; d < wedge[0].index.dims(); ++d) {
            for (int r = 0; r < wedge[0].index[d]; ++r) e = diff(e, Expr::base(static_cast<int>(d)));
        }
        integrand += testing::plug_section(c, phi) * e;
    }
    return testing::integrate_unit_box(integrand);
}

void check_ledger(const FunctionalForm& original, const Rewrite& r, const JetSpace& s)
{
    CHECK(original == r.form + divergence(r.ledger, original.degree(), s));
}

}  // namespace

TEST_CASE("shift examples")
{
    JetSpace h({"t", "x"}, {"u"});
    const Expr u = h.u("u");
    const Expr ux = h.u("u", "x");
    const Expr uxx = h.u("u", "xx");
    const Wedge w0{DeltaBasis{0, mi({0, 0})}};
    const Atom axx = *uxx.as_atom();
    Rewrite once = integrate_factor(w0, uxx, axx, 1, h);
    CHECK(once.form == one_form(-ux, 0, mi({0, 1})));
    check_ledger(one_form(uxx, 0, mi({0, 0})), once, h);
    const Wedge w1{DeltaBasis{0, mi({0, 1})}};
    Rewrite twice = integrate_factor(w1, -ux, *ux.as_atom(), 1, h);
    CHECK(twice.form == one_form(u, 0, mi({0, 2})));

    // and forward again
    Rewrite back = shift_derivative_off_slot(w1, -ux, 0, 1, h);
    CHECK(back.form == one_form(uxx, 0, mi({0, 0})));

    JetSpace s({"t"}, {"u"});
    s.add_function("lambda", {s.x("t")}, true);
    const Expr lam = s.fn("lambda");
    const Expr ut = s.u("u", "t");
    const Expr utt = s.u("u", "tt");
    Rewrite r = integrate_factor({DeltaBasis{0, mi({0})}}, lam * utt, *utt.as_atom(), 0, s);
    CHECK(r.form == -ut * (one_form(s.fn("lambda", {1}), 0, mi({0})) + one_form(lam, 0, mi({1}))));

    CHECK_THROWS_AS(shift_derivative_off_slot(w0, u, 0, 0, h), DomainError);
}

TEST_CASE("2-form shift agrees with the pairing oracle")
{
    JetSpace s({"t"}, {"u"}, 6);
    Rng rng(61);
    const Expr c = s.u("u") * s.x("t") + 2;
    // c du_t ^ du_tt, shift off du_tt
    const Wedge w{DeltaBasis{0, mi({1})}, DeltaBasis{0, mi({2})}};
    Rewrite r = shift_derivative_off_slot(w, c, 1, 0, s);
    FunctionalForm original(2);
    original.add(w, c);
    FunctionalForm expected(2);
    expected.add({DeltaBasis{0, mi({1})}, DeltaBasis{0, mi({1})}}, -total_derivative(c, 0, s));  // vanishes
    expected.add({DeltaBasis{0, mi({2})}, DeltaBasis{0, mi({1})}}, -c);
    CHECK(r.form == expected);
    check_ledger(original, r, s);
    for (int k = 0; k < 10; ++k) {
        const std::vector<Expr> phi{testing::random_base_polynomial(1, rng, 3, 3)};
        const std::vector<Expr> x{testing::random_base_polynomial(1, rng, 2, 3) * testing::bump(1, 3)};
        const std::vector<Expr> y{testing::random_base_polynomial(1, rng, 2, 3) * testing::bump(1, 3)};
        CHECK(pair_integral(original, phi, x, y) == pair_integral(r.form, phi, x, y));
    }
}

TEST_CASE("enumerate_representatives examples")
{
    JetSpace s({"t"}, {"u"});
    const Expr u = s.u("u");
    const Expr ut = s.u("u", "t");
    const Expr utt = s.u("u", "tt");
    auto sho = enumerate_representatives(one_form(utt + u, 0, mi({0})), 2, s);
    REQUIRE(sho.size() == 3);
    CHECK(sho[0] == one_form(utt + u, 0, mi({0})));
    CHECK(contains(sho, one_form(-ut, 0, mi({1})) + one_form(u, 0, mi({0}))));
    CHECK(contains(sho, one_form(u, 0, mi({2})) + one_form(u, 0, mi({0}))));

    JetSpace h({"t", "x"}, {"u"});
    const Expr hu = h.u("u");
    auto heat = enumerate_representatives(one_form(h.u("u", "t") - h.u("u", "xx"), 0, mi({0, 0})), 2, h);
    CHECK(heat.size() == 6);
    CHECK(contains(heat, one_form(h.u("u", "t"), 0, mi({0, 0})) + one_form(h.u("u", "x"), 0, mi({0, 1}))));
    CHECK(contains(heat, one_form(-hu, 0, mi({1, 0})) + one_form(-hu, 0, mi({0, 2}))));
    CHECK(contains(heat, one_form(-hu, 0, mi({1, 0})) + one_form(h.u("u", "x"), 0, mi({0, 1}))));

    auto trivial = enumerate_representatives(one_form(u, 0, mi({0})), 2, s);
    REQUIRE(trivial.size() == 1);
    CHECK(trivial[0] == one_form(u, 0, mi({0})));

    CHECK_THROWS_AS(enumerate_representatives(one_form(h.u("u", "t") - h.u("u", "xx"), 0, mi({0, 0})), 2, h, 4),
                    LimitExceeded);
}

TEST_CASE("representatives share one Euler form and keep the pairing")
{
    JetSpace s({"t", "x"}, {"u"}, 4);
    Rng rng(67);
    for (int k = 0; k < 15; ++k) {
        FunctionalForm f(1);
        for (int n = rng.integer(1, 2); n > 0; --n) {
            MultiIndex i = s.zero_index();
            if (rng.coin()) i = i.raised(static_cast<std::size_t>(rng.integer(0, 1)));
            f.add({DeltaBasis{0, i}}, testing::random_polynomial(s, rng, 2, 3, 1, false));
        }
        auto reps = enumerate_representatives(f, 2, s, 5000);
        CHECK(reps.size() >= 1);  // linear coefficients keep the orbit finite
        const FunctionalForm e = to_euler_form(f, s).form;
        const std::vector<Expr> phi{testing::random_base_polynomial(2, rng, 2, 3)};
        const std::vector<Expr> x{testing::random_base_polynomial(2, rng, 2, 3) * testing::bump(2, 3)};
        const Rational reference = one_form_integral(f, phi, x);
        for (const auto& r : reps) {
            CHECK(to_euler_form(r, s).form == e);
            CHECK(one_form_integral(r, phi, x) == reference);
        }
    }
}

TEST_CASE("to_euler_form examples and projection")
{
    JetSpace s({"t"}, {"u"});
    const Expr u = s.u("u");
    const Expr ut = s.u("u", "t");
    const Expr utt = s.u("u", "tt");
    const FunctionalForm f = one_form(-ut, 0, mi({1})) + one_form(u, 0, mi({0}));
    const Rewrite r = to_euler_form(f, s);
    CHECK(r.form == one_form(utt + u, 0, mi({0})));
    check_ledger(f, r, s);
    CHECK(to_euler_form(r.form, s).form == r.form);
    CHECK(to_euler_form(r.form, s).ledger.empty());

    JetSpace c({"t"}, {"x", "y"});
    c.add_function("f1", {c.u("x"), c.u("y")}, true);
    c.add_function("f2", {c.u("x"), c.u("y")}, true);
    const Expr a = c.u("x", "t") - c.fn("f1");
    const Expr b = c.u("y", "t") - c.fn("f2");
    const FunctionalForm g = one_form(a, 0, mi({1})) + one_form(b, 1, mi({1}));
    const Rewrite rg = to_euler_form(g, c);
    CHECK(rg.form == one_form(-total_derivative(a, 0, c), 0, mi({0})) + one_form(-total_derivative(b, 0, c), 1, mi({0})));
    check_ledger(g, rg, c);

    JetSpace r2({"t", "x"}, {"u", "v"}, 5);
    Rng rng(71);
    for (int k = 0; k < 30; ++k) {
        const FunctionalForm h = random_form(r2, rng, 1, 2, 2);
        const Rewrite e = to_euler_form(h, r2);
        check_ledger(h, e, r2);
        CHECK(to_euler_form(e.form, r2).form == e.form);
        for (const auto& [w, coeff] : e.form.terms()) CHECK(w[0].index.order() == 0);
    }
}

TEST_CASE("reduce_second_slot examples")
{
    JetSpace s({"t"}, {"u"});
    const FunctionalForm e = one_form(s.u("u", "tt") + s.u("u", "t") + s.u("u"), 0, mi({0}));
    const FunctionalForm rho = fed(e);
    const Rewrite r = reduce_second_slot(rho, s);
    check_ledger(rho, r, s);
    CHECK_FALSE(is_zero(pairing_operator(r.form, s)));

    FunctionalForm z(2);
    z.add({DeltaBasis{0, mi({1})}, DeltaBasis{0, mi({1})}}, s.u("u"));
    CHECK(z.is_zero());

    const Expr c = s.u("u") * s.x("t");
    FunctionalForm w(2);
    w.add({DeltaBasis{0, mi({0})}, DeltaBasis{0, mi({1})}}, c);
    const Rewrite rw = reduce_second_slot(w, s);
    FunctionalForm expected(2);
    expected.add({DeltaBasis{0, mi({1})}, DeltaBasis{0, mi({0})}}, -c);
    CHECK(rw.form == expected);
}

TEST_CASE("reduce_second_slot and pairing operator properties")
{
    JetSpace s({"t", "x"}, {"u", "v"}, 8);
    Rng rng(73);
    for (int k = 0; k < 30; ++k) {
        const FunctionalForm f = random_form(s, rng, 2, 2, 1);
        const Rewrite r = reduce_second_slot(f, s);
        check_ledger(f, r, s);
        for (const auto& [w, c] : r.form.terms()) CHECK(std::min(w[0].index.order(), w[1].index.order()) == 0);
        const auto before = pairing_operator(f, s);
        const auto after = pairing_operator(r.form, s);
        for (std::size_t a = 0; a < 2; ++a) {
            for (std::size_t b = 0; b < 2; ++b) CHECK(before[a][b] == after[a][b]);
        }
        // Divergences pair to zero.
        const FunctionalForm t = random_form(s, rng, 2, 1, 1);
        CHECK(is_zero(pairing_operator(total_derivative(t, static_cast<std::size_t>(rng.integer(0, 1)), s), s)));
    }
    // The pairing operator is a faithful invariant: cross-check with the integral oracle.
    JetSpace o({"t"}, {"u", "v"}, 8);
    for (int k = 0; k < 10; ++k) {
        const FunctionalForm f = random_form(o, rng, 2, 2, 1);
        const Rewrite r = reduce_second_slot(f, o);
        const std::vector<Expr> phi{testing::random_base_polynomial(1, rng, 2, 2), testing::random_base_polynomial(1, rng, 2, 2)};
        const std::vector<Expr> x{testing::random_base_polynomial(1, rng, 2, 2) * testing::bump(1, 3),
                                  testing::random_base_polynomial(1, rng, 2, 2) * testing::bump(1, 3)};
        const std::vector<Expr> y{testing::random_base_polynomial(1, rng, 2, 2) * testing::bump(1, 3),
                                  testing::random_base_polynomial(1, rng, 2, 2) * testing::bump(1, 3)};
        CHECK(pair_integral(f, phi, x, y) == pair_integral(r.form, phi, x, y));
    }
}

TEST_CASE("reduce_lagrangian_order examples")
{
    JetSpace s({"t"}, {"u"});
    const Expr u = s.u("u");
    const Expr ut = s.u("u", "t");
    const Expr utt = s.u("u", "tt");
    const Expr l = (u * utt + pow(u, 2)) / 2;
    auto r = reduce_lagrangian_order(l, s);
    CHECK(r.lagrangian == -pow(ut, 2) / 2 + pow(u, 2) / 2);
    CHECK(l == r.lagrangian + divergence(r.ledger, 0, s).as_scalar());

    auto d = reduce_lagrangian_order(ut * u, s);
    CHECK(d.lagrangian.is_zero());
    REQUIRE(d.ledger.size() == 1);
    CHECK(d.ledger[0].density.as_scalar() == pow(u, 2) / 2);

    JetSpace h({"t", "x"}, {"u"});
    const Expr mixed = h.u("u", "x") * h.u("u", "t");
    auto m = reduce_lagrangian_order(mixed, h);
    CHECK(m.lagrangian == mixed);
    CHECK(m.ledger.empty());
}

TEST_CASE("reduce_lagrangian_order preserves EL and the ledger identity")
{
    JetSpace s({"t", "x"}, {"u", "v"}, 6);
    Rng rng(79);
    for (int k = 0; k < 40; ++k) {
        const Expr l = testing::random_polynomial(s, rng, 2, 5, 3, true);
        auto r = reduce_lagrangian_order(l, s);
        CHECK(l == r.lagrangian + divergence(r.ledger, 0, s).as_scalar());
        CHECK(jet_order(r.lagrangian) <= jet_order(l));
        for (std::size_t a = 0; a < 2; ++a) CHECK(euler_lagrange(l, a, s) == euler_lagrange(r.lagrangian, a, s));
    }
}
