// Expression trees over skew coefficient fields: parsing, canonical
// printing, evaluation against series oracles, and the involution machinery.

#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "skewfree/involution.hpp"
#include "skewfree/scenario.hpp"

using namespace skewfree;

namespace {

std::string reprint(const std::string& text, const std::string& tvar = "t") {
    return print_expr(parse_expr_text<RatFunc>(text, tvar), tvar);
}

}  // namespace

TEST_CASE("parsing and printing round-trip") {
    // Printed form is a fixpoint: parse(print(e)) prints identically.
    for (const char* text : {"X", "t", "X^-1", "t*(X + 1)", "-X", "t - X",
                             "(t)/(1 + t^2)*X^-1", "(X + t)^3", "2*X - X*2"}) {
        std::string once = reprint(text);
        CHECK(reprint(once) == once);
    }

    CHECK(reprint("X^-1") == "X^-1");
    CHECK(reprint("t*(X+1)") == "t*(X + 1)");
    CHECK(reprint("-X") == "-X");
    CHECK(reprint("t - X") == "t - X");
    // X-free subtrees fold into one scalar leaf.
    CHECK(reprint("1 + t + t*t") == "1 + t + t^2");
    CHECK(reprint("(2/3)*t") == "2/3*t");

    // Folding happens for Y too, and prints through the two-variable writer.
    auto y = parse_expr_text<YFunc>("(1-Y)^-1");
    REQUIRE(is_scalar(y));
    CHECK(y->value == (YFunc(1) - y_yfunc()).inverse());
    // Canonical rational functions carry a monic denominator.
    CHECK(print_expr(y) == "(-1)/(-1 + Y)");

    // Division is right-inverse multiplication.
    auto ctx = make_weyl_context(10);
    CHECK(expr_equal(parse_expr_text<RatFunc>("1/t/X"), parse_expr_text<RatFunc>("t^-1*X^-1"),
                     ctx));

    // The t variable can be renamed; the old name then fails to resolve.
    CHECK(reprint("u*(X+1)", "u") == "u*(X + 1)");
    CHECK_THROWS_AS(parse_expr_text<RatFunc>("t+1", "u"), UnknownSymbol);
}

TEST_CASE("parser rejects malformed input with offsets") {
    auto offset_of = [](const std::string& text) {
        try {
            parse_expr_text<RatFunc>(text);
        } catch (const ParseError& e) {
            return e.offset;
        }
        return static_cast<std::size_t>(-1);
    };
    CHECK(offset_of("t +") == 3);       // input ended where a term should start
    CHECK(offset_of("(t") == 2);        // missing ')'
    CHECK(offset_of("t^x") == 2);       // exponent must be an integer
    CHECK(offset_of("t t") == 2);       // trailing input
    CHECK(offset_of("$") == 0);         // unexpected character
    CHECK_THROWS_WITH(parse_expr_text<RatFunc>("(t"), Catch::Matchers::ContainsSubstring("offset 2"));

    CHECK_THROWS_AS(parse_expr_text<RatFunc>("Y+1"), UnknownSymbol);
    CHECK_THROWS_AS(parse_expr_text<RatFunc>("spam"), UnknownSymbol);
    CHECK_NOTHROW(parse_expr_text<YFunc>("Y+1"));
}

TEST_CASE("evaluation matches series oracles") {
    auto ctx = make_weyl_context(12);

    // Commutator oracle: X t - t X = delta(t) = 1.
    auto comm = parse_expr_text<RatFunc>("X*t - t*X");
    CHECK(evaluate(comm, ctx) == TruncSeries<RatFunc>::one(ctx));

    // Binomial oracle: (X + t)^2 = X^2 + (2t)X + t^2 + 1 in the Weyl ring.
    auto sq = parse_expr_text<RatFunc>("(X + t)^2");
    TruncSeries<RatFunc> expect(ctx);
    expect.add_to(2, RatFunc(1));
    expect.add_to(1, RatFunc(Rat(2) * QPoly::variable()));
    expect.add_to(0, RatFunc(QPoly::variable() * QPoly::variable() + QPoly(Rat(1))));
    CHECK(evaluate(sq, ctx) == expect);

    // Negative power = inverse of the power.
    auto a = parse_expr_text<RatFunc>("(1 + X^-1)^-2");
    auto b = parse_expr_text<RatFunc>("((1 + X^-1)^2)^-1");
    CHECK(expr_equal(a, b, ctx));

    auto hctx = make_heisenberg_context(10);
    CHECK(expr_equal(parse_expr_text<YFunc>("X*Y"), parse_expr_text<YFunc>("t*Y*X"), hctx));

    // Inverting an exact zero reports the offending subtree.
    CHECK_THROWS_AS(parse_expr_text<RatFunc>("0^-1"), DivisionByZero);
    auto zero_inv = parse_expr_text<RatFunc>("(X - X + 0)^-1");
    CHECK_THROWS_WITH(evaluate(zero_inv, ctx), Catch::Matchers::ContainsSubstring("X - X"));
}

TEST_CASE("weyl involution X -> -X") {
    auto ctx = make_weyl_context(10);
    InvolutionSpec<RatFunc> spec;
    spec.x_image = ex_neg(ex_x<RatFunc>());
    CHECK_NOTHROW(check_involution(spec, ctx));

    // (a X^-1 a)^2 is fixed; single a X^-1 a flips sign.
    RatFunc a(QPoly::variable(), QPoly(Rat(1)) + QPoly::variable() * QPoly::variable());
    auto alpha = ex_product<RatFunc>({ex_scalar(a), ex_pow(ex_x<RatFunc>(), -1), ex_scalar(a)});
    auto alpha2 = ex_product<RatFunc>({alpha, alpha});
    CHECK(expr_equal(involute(alpha2, spec), alpha2, ctx));
    CHECK(expr_equal(involute(alpha, spec), ex_neg(alpha), ctx));

    // Anti-multiplicativity on a sample product.
    auto u = parse_expr_text<RatFunc>("t*X");
    auto v = parse_expr_text<RatFunc>("X^-1*(1 + t)");
    auto uv = ex_product<RatFunc>({u, v});
    auto vu_star = ex_product<RatFunc>({involute(v, spec), involute(u, spec)});
    CHECK(expr_equal(involute(uv, spec), vu_star, ctx));
}

TEST_CASE("broken involutions are rejected") {
    auto ctx = make_weyl_context(8);
    // X -> X is not compatible with X t = t X + 1.
    InvolutionSpec<RatFunc> keep;
    keep.x_image = ex_x<RatFunc>();
    CHECK_THROWS_AS(check_involution(keep, ctx), BadParams);

    // X -> -X with t -> t + 1 respects the commutation rule but does not
    // square to the identity.
    InvolutionSpec<RatFunc> shift;
    shift.x_image = ex_neg(ex_x<RatFunc>());
    shift.t_image = RatFunc(QPoly::variable() + QPoly(Rat(1)));
    CHECK_THROWS_AS(check_involution(shift, ctx), BadParams);
}

TEST_CASE("heisenberg involutions validate and act anti-multiplicatively") {
    auto ctx = make_heisenberg_context(8);
    YFunc yv = y_yfunc();
    YFunc tv(t_ratfunc());

    InvolutionSpec<YFunc> type1;
    type1.x_image = ex_product<YFunc>({ex_scalar(tv), ex_x<YFunc>()});
    type1.t_image = t_ratfunc().inverse();
    type1.y_value_image = tv * yv;
    CHECK_NOTHROW(check_involution(type1, ctx));

    InvolutionSpec<YFunc> type3;
    type3.x_image = ex_x<YFunc>();
    type3.y_value_image = tv * yv.inverse();
    CHECK_NOTHROW(check_involution(type3, ctx));

    // The generator swap: X* = tY lands in the coefficients, Y* = t^-1 X
    // does not, so Y maps through a tree.
    InvolutionSpec<YFunc> type4;
    type4.x_image = ex_scalar(tv * yv);
    type4.y_tree_image = ex_product<YFunc>({ex_scalar(tv.inverse()), ex_x<YFunc>()});
    CHECK_NOTHROW(check_involution(type4, ctx));

    // Scalars with Y map through trees under type IV: check (cd)* = d* c*
    // and the square on random coefficients.  Images involve inverses of
    // units with positive top degree, so evaluate wide and compare above a
    // floor that the corrupted bottom band cannot reach.
    auto wide = make_heisenberg_context(14);
    std::mt19937_64 rng(77);
    for (int i = 0; i < 20; ++i) {
        YFunc c = random_elem<YFunc>(rng);
        YFunc d = random_elem<YFunc>(rng);
        auto star_cd = involute_scalar(c * d, type4);
        auto prod = ex_product<YFunc>({involute_scalar(d, type4), involute_scalar(c, type4)});
        CHECK(agree_above_floor(evaluate(star_cd, wide), evaluate(prod, wide), -8));
        CHECK(agree_above_floor(evaluate(involute(involute_scalar(c, type4), type4), wide),
                                evaluate(ex_scalar(c), wide), -8));
    }
}

TEST_CASE("twists are ring maps that respect the commutation rule") {
    auto ctx = make_heisenberg_context(8);
    YFunc yv = y_yfunc();
    YFunc tv(t_ratfunc());
    // X -> (1+t)X, Y -> (1+t)Y commutes with sigma.
    ExprPtr<YFunc> x_img = ex_product<YFunc>({ex_scalar(YFunc(1) + tv), ex_x<YFunc>()});
    EndoImages<YFunc> scal{t_ratfunc(), (YFunc(1) + tv) * yv};

    auto lhs = parse_expr_text<YFunc>("X*Y");
    auto rhs = parse_expr_text<YFunc>("t*Y*X");
    REQUIRE(expr_equal(lhs, rhs, ctx));
    CHECK(expr_equal(apply_twist(lhs, x_img, scal), apply_twist(rhs, x_img, scal), ctx));

    auto prod = parse_expr_text<YFunc>("(X + Y)*(X^-1 + t)");
    auto tw_prod = apply_twist(prod, x_img, scal);
    auto prod_tw = ex_product<YFunc>({apply_twist(parse_expr_text<YFunc>("X + Y"), x_img, scal),
                                      apply_twist(parse_expr_text<YFunc>("X^-1 + t"), x_img, scal)});
    CHECK(expr_equal(tw_prod, prod_tw, ctx));
}
