// Xi assembly, the packaged constructions, generator symmetry, and the
// word identities behind the freeness proofs.

#include <catch2/catch_amalgamated.hpp>

#include "skewfree/scenario.hpp"

using namespace skewfree;

TEST_CASE("xi parameter validation") {
    // f must be degree one in X.
    CHECK_THROWS_AS(xi_tree<RatFunc>(OreParams{Rat(1), Rat(0), Rat(1), Rat(0)}, true), BadParams);
    // g proportional to f collapses Xi to a scalar.
    CHECK_THROWS_AS(xi_tree<RatFunc>(OreParams{Rat(1), Rat(1), Rat(2), Rat(2)}, true),
                    DegenerateXi);
    // g with both coefficients nonzero fits neither recurrence shape.
    CHECK_THROWS_AS(xi_tree<RatFunc>(OreParams{Rat(0), Rat(1), Rat(1), Rat(1)}, true), BadParams);
    // The X-multiple shape needs delta = 0.
    CHECK_THROWS_AS(xi_tree<RatFunc>(OreParams{Rat(1), Rat(-1), Rat(0), Rat(1)}, false),
                    BadParams);
}

TEST_CASE("xi series oracles") {
    // f = X, g = 1: Xi = X^-1 exactly.
    auto wctx = make_weyl_context(16);
    auto xi_w = evaluate(xi_tree<RatFunc>(OreParams{Rat(0), Rat(1), Rat(1), Rat(0)}, false), wctx);
    CHECK(agree_above_floor(xi_w, TruncSeries<RatFunc>::x_power(wctx, -1), -12));

    // f = 1 - X, g = X: Xi = X (1 - X)^-1 = -(1 + X^-1 + X^-2 + ...).
    auto wide = make_heisenberg_context(16);
    auto xi_h = evaluate(xi_tree<YFunc>(OreParams{Rat(1), Rat(-1), Rat(0), Rat(1)}, true), wide);
    TruncSeries<YFunc> expect = TruncSeries<YFunc>::zero(wide);
    for (int d = -16; d <= 0; ++d) expect.add_to(d, YFunc(-1));
    CHECK(agree_above_floor(xi_h, expect, -12));

    // X^-1 Xi = Xi + 1 is the seed of the X-multiple recurrence.
    auto lhs = skew_inv(TruncSeries<YFunc>::x_power(wide, 1)) * xi_h;
    auto rhs = xi_h + TruncSeries<YFunc>::one(wide);
    CHECK(agree_above_floor(lhs, rhs, -12));
}

TEST_CASE("scenario construction and generator display") {
    auto ml = scenario_weyl_ml();
    CHECK(ml.name == "weyl-ml");
    REQUIRE(ml.generators.size() == 2);
    CHECK(print_expr(ml.generators[0]) == "((1)/(t))*X^-1");
    CHECK(print_expr(ml.generators[1]) == "((-1)/(-t + t^2))*X^-1");
    CHECK(ml.hyp_form == TheoremForm::List);
    CHECK_FALSE(ml.involution.has_value());

    auto ws = scenario_weyl_symmetric();
    CHECK(ws.name == "weyl-symmetric");
    REQUIRE(ws.generators.size() == 2);
    CHECK(ws.involution.has_value());
    CHECK(ws.hyp_alphas.size() == 2);

    auto h1 = scenario_heisenberg(HeisenbergType::I, 1, 1);
    CHECK(h1.name == "heisenberg-I");
    REQUIRE(h1.generators.size() == 2);
    CHECK(h1.hyp_form == TheoremForm::PowersWithOne);
    REQUIRE(h1.hyp_alphas.size() == 1);
    CHECK(h1.involution.has_value());
    CHECK(scenario_heisenberg(HeisenbergType::III, 2, 1).name == "heisenberg-III");
    CHECK(scenario_heisenberg(HeisenbergType::IV, 1, 3).name == "heisenberg-IV");
    CHECK_THROWS_AS(scenario_heisenberg(HeisenbergType::I, 0, 1), BadParams);

    auto p1 = scenario_prop51_shift(RatFunc(QPoly(Rat(1)), QPoly::monomial(Rat(1), 2)), 2);
    CHECK(p1.name == "prop51-i");
    CHECK(p1.generators.size() == 2);
    CHECK(p1.hyp_alphas.size() == 2);
    CHECK(p1.make_ctx(8)->tvar == "u");
    CHECK_THROWS_AS(scenario_prop51_shift(RatFunc(3), 2), BadParams);
    CHECK_THROWS_AS(scenario_prop51_shift(RatFunc(QPoly(Rat(1)), QPoly::variable()), 0),
                    BadParams);

    auto p2 = scenario_prop51_scale(Rat(2), Rat(1), 3);
    CHECK(p2.name == "prop51-ii");
    CHECK(p2.generators.size() == 3);
    for (const Rat& bad : {Rat(0), Rat(1), Rat(-1)})
        CHECK_THROWS_AS(scenario_prop51_scale(bad, Rat(1), 2), BadParams);
}

TEST_CASE("the type II involution is refused with its reference") {
    CHECK_THROWS_AS(scenario_heisenberg(HeisenbergType::II, 1, 1), UnsupportedConstruction);
    CHECK_THROWS_WITH(scenario_heisenberg(HeisenbergType::II, 1, 1),
                      Catch::Matchers::ContainsSubstring("Theorem 1.1 of [FGS13]"));
}

TEST_CASE("scenario generators are symmetric under their involutions") {
    auto check_sym = [](const auto& sc, int order) {
        auto wide = sc.make_ctx(order + 4);
        REQUIRE(sc.involution.has_value());
        CHECK_NOTHROW(check_involution(*sc.involution, wide));
        for (const auto& g : sc.generators) {
            auto lhs = evaluate(g, wide);
            auto rhs = evaluate(involute(g, *sc.involution), wide);
            CHECK(agree_above_floor(lhs, rhs, -order));
        }
    };
    check_sym(scenario_weyl_symmetric(), 10);
    check_sym(scenario_heisenberg(HeisenbergType::I, 1, 1), 8);
    check_sym(scenario_heisenberg(HeisenbergType::I, 2, 3), 8);
    check_sym(scenario_heisenberg(HeisenbergType::III, 1, 1), 8);
    check_sym(scenario_heisenberg(HeisenbergType::III, 2, 2), 8);
    check_sym(scenario_heisenberg(HeisenbergType::IV, 1, 1), 8);
    check_sym(scenario_heisenberg(HeisenbergType::IV, 3, 1), 8);
}

TEST_CASE("proof identities hold for the constant-g template") {
    auto make = [](int order) { return make_weyl_context(order); };
    RatFunc alpha(QPoly(Rat(1)), QPoly::variable());
    IdentityReport rep = verify_proof_identities<RatFunc>(
        make, OreParams{Rat(0), Rat(1), Rat(1), Rat(0)}, alpha, 16, 3);
    CHECK(rep.mismatches == 0);
    CHECK(rep.failures.empty());
    // Tuples of length <= 3 over exponents {1, 2}, two identities each.
    CHECK(rep.checked == 2 * 15);
}

TEST_CASE("proof identities hold for the X-multiple template") {
    auto make = [](int order) { return make_heisenberg_context(order); };
    YFunc alpha = (YFunc(1) - y_yfunc()).inverse();
    IdentityReport rep = verify_proof_identities<YFunc>(
        make, OreParams{Rat(1), Rat(-1), Rat(0), Rat(1)}, alpha, 12, 3);
    CHECK(rep.mismatches == 0);
    CHECK(rep.failures.empty());
    CHECK(rep.checked == 2 * 15);
}

TEST_CASE("proof identities hold over the shifted and scaled fields") {
    auto shift = scenario_prop51_shift(RatFunc(QPoly(Rat(1)), QPoly::monomial(Rat(1), 2)), 1);
    IdentityReport rs =
        verify_proof_identities<RatFunc>(shift.make_ctx, shift.params, shift.hyp_alphas[0], 10, 2);
    CHECK(rs.mismatches == 0);

    auto scale = scenario_prop51_scale(Rat(2), Rat(1), 1);
    IdentityReport rc =
        verify_proof_identities<RatFunc>(scale.make_ctx, scale.params, scale.hyp_alphas[0], 10, 2);
    CHECK(rc.mismatches == 0);
}
