#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "skewfree/series.hpp"

using namespace skewfree;

namespace {

// Compare two series on the part of the window where truncated products are
// faithful: degrees >= floor (descending) or <= floor (ascending). Inverses
// of series with positive top degree m are only determined down to -N + m,
// so roundtrip checks pass a floor above the window edge.
template <class D>
bool agree_above(const TruncSeries<D>& a, const TruncSeries<D>& b, int floor) {
    TruncSeries<D>::same_context(a, b);
    bool desc = a.context()->direction == SeriesDirection::DescendingX;
    auto clip = [&](const TruncSeries<D>& s) {
        TruncSeries<D> r(s.context());
        for (const auto& [d, c] : s.coeffs())
            if (desc ? d >= floor : d <= floor) r.add_to(d, c);
        return r;
    };
    return clip(a) == clip(b);
}

template <class D>
TruncSeries<D> random_series(const ContextPtr<D>& ctx, std::mt19937_64& rng, int lo, int hi) {
    TruncSeries<D> s(ctx);
    std::uniform_int_distribution<int> coin(0, 2);
    for (int d = lo; d <= hi; ++d) {
        if (coin(rng) == 0) continue;
        if constexpr (std::is_same_v<D, RatFunc>) {
            s.add_to(d, random_ratfunc(rng, 2, 4));
        } else {
            s.add_to(d, random_yfunc(rng, 1, 3));
        }
    }
    return s;
}

}  // namespace

TEST_CASE("context construction is validated") {
    CHECK_THROWS_AS(make_weyl_context(0), BadParams);

    // Ascending series need delta = 0.
    EndoImages<RatFunc> id{};
    CHECK_THROWS_AS(
        make_context<RatFunc>(id, id, RatFunc(1), RatFunc(0), 8, SeriesDirection::AscendingX),
        BadParams);

    // A wrong inverse for sigma(t) = t + 1 is rejected.
    RatFunc t = t_ratfunc();
    EndoImages<RatFunc> shift{t + RatFunc(1), std::nullopt};
    CHECK_THROWS_AS(make_context<RatFunc>(shift, shift, RatFunc(0), RatFunc(0), 8), BadParams);
    EndoImages<RatFunc> unshift{t - RatFunc(1), std::nullopt};
    CHECK_NOTHROW(make_context<RatFunc>(shift, unshift, RatFunc(0), RatFunc(0), 8));

    auto weyl = make_weyl_context(8);
    CHECK(weyl->sigma_identity);
    CHECK(!weyl->delta_zero);
    auto heis = make_heisenberg_context(8);
    CHECK(!heis->sigma_identity);
    CHECK(heis->delta_zero);
}

TEST_CASE("delta extension in the Weyl context is d/dt") {
    auto ctx = make_weyl_context(8);
    RatFunc t = t_ratfunc();
    CHECK(ctx->apply_delta(t) == RatFunc(1));
    CHECK(ctx->apply_delta(t * t) == rat_of(2) * t);
    RatFunc inv(QPoly(Rat(1)), QPoly::variable());
    CHECK(ctx->apply_delta(inv) == -(inv * inv));

    std::mt19937_64 rng(3);
    for (int i = 0; i < 30; ++i) {
        RatFunc a = random_ratfunc(rng);
        RatFunc b = random_ratfunc(rng);
        CHECK(ctx->apply_delta(a * b) ==
              ctx->apply_sigma(a) * ctx->apply_delta(b) + ctx->apply_delta(a) * b);
    }
}

TEST_CASE("delta extension with a genuine twist obeys the skew Leibniz rule") {
    // sigma(t) = 2t, delta(t) = 1: a q-difference style derivation.
    RatFunc t = t_ratfunc();
    EndoImages<RatFunc> s{rat_of(2) * t, std::nullopt};
    EndoImages<RatFunc> si{rat_of(1, 2) * t, std::nullopt};
    auto ctx = make_context<RatFunc>(s, si, RatFunc(1), RatFunc(0), 8);
    CHECK(ctx->apply_delta(t) == RatFunc(1));
    // delta(t^2) = sigma(t) delta(t) + delta(t) t = 3t.
    CHECK(ctx->apply_delta(t * t) == rat_of(3) * t);
    // Quotient rule: delta(1/t) = -sigma(1/t) delta(t) / t = -1/(2t^2).
    RatFunc inv(QPoly(Rat(1)), QPoly::variable());
    CHECK(ctx->apply_delta(inv) == rat_of(-1, 2) * inv * inv);
    // make_context already property-checked 100 random pairs by construction.
}

TEST_CASE("Weyl commutation oracles") {
    auto ctx = make_weyl_context(8);
    RatFunc t = t_ratfunc();
    auto X = [&](int k) { return TruncSeries<RatFunc>::x_power(ctx, k); };
    auto S = [&](const RatFunc& c) { return TruncSeries<RatFunc>::from_scalar(ctx, c); };

    // X t = t X + 1
    CHECK(X(1) * S(t) == TruncSeries<RatFunc>::monomial(ctx, t, 1) + S(RatFunc(1)));
    // X^-1 t = t X^-1 - X^-2  (exact: delta^2(t) = 0)
    CHECK(X(-1) * S(t) ==
          TruncSeries<RatFunc>::monomial(ctx, t, -1) - X(-2));
    // X^-1 t^2 = t^2 X^-1 - 2t X^-2 + 2 X^-3
    CHECK(X(-1) * S(t * t) ==
          TruncSeries<RatFunc>::monomial(ctx, t * t, -1) -
              TruncSeries<RatFunc>::monomial(ctx, rat_of(2) * t, -2) +
              TruncSeries<RatFunc>::monomial(ctx, rat_of(2), -3));
    // X^-2 t = t X^-2 - 2 X^-3 (binomial C(2,1) with sign)
    CHECK(X(-2) * S(t) ==
          TruncSeries<RatFunc>::monomial(ctx, t, -2) -
              TruncSeries<RatFunc>::monomial(ctx, rat_of(2), -3));
    // X^3 t = t X^3 + 3 X^2
    CHECK(X(3) * S(t) ==
          TruncSeries<RatFunc>::monomial(ctx, t, 3) +
              TruncSeries<RatFunc>::monomial(ctx, rat_of(3), 2));

    // Power laws hold when composed one step at a time.
    RatFunc a(QPoly(Rat(1)), QPoly::variable());  // 1/t has infinite delta tail
    auto direct = X(-3) * S(a);
    auto stepped = X(-1) * (X(-1) * (X(-1) * S(a)));
    CHECK(direct == stepped);
    CHECK(X(2) * X(-2) == TruncSeries<RatFunc>::one(ctx));
    CHECK(X(-2) * X(2) == TruncSeries<RatFunc>::one(ctx));
}

TEST_CASE("twisted commutation oracles in the Heisenberg context") {
    auto ctx = make_heisenberg_context(8);
    YFunc y = y_yfunc();
    YFunc t(t_ratfunc());
    auto X = [&](int k) { return TruncSeries<YFunc>::x_power(ctx, k); };
    auto S = [&](const YFunc& c) { return TruncSeries<YFunc>::from_scalar(ctx, c); };

    // X Y = tY X and X^-1 Y = (1/t) Y X^-1
    CHECK(X(1) * S(y) == TruncSeries<YFunc>::monomial(ctx, t * y, 1));
    CHECK(X(-1) * S(y) == TruncSeries<YFunc>::monomial(ctx, t.inverse() * y, -1));
    // X^2 Y^2 = t^4 Y^2 X^2 (sigma^2 on Y^2)
    CHECK(X(2) * S(y * y) == TruncSeries<YFunc>::monomial(ctx, t.pow(4) * y * y, 2));
    // t is central for this sigma.
    CHECK(X(1) * S(t) == TruncSeries<YFunc>::monomial(ctx, t, 1));
}

TEST_CASE("multiplication is associative and distributive across all paths") {
    std::mt19937_64 rng(17);
    auto weyl = make_weyl_context(6);
    for (int i = 0; i < 8; ++i) {
        auto a = random_series(weyl, rng, -2, 2);
        auto b = random_series(weyl, rng, -2, 2);
        auto c = random_series(weyl, rng, -2, 2);
        // Products can push unknown low-order terms back into the window only
        // below -N + (top degree budget); stay safely above that.
        CHECK(agree_above((a * b) * c, a * (b * c), -2));
        CHECK((a + b) * c == a * c + b * c);
        CHECK(c * (a + b) == c * a + c * b);
    }
    auto heis = make_heisenberg_context(6);
    for (int i = 0; i < 5; ++i) {
        auto a = random_series(heis, rng, -2, 2);
        auto b = random_series(heis, rng, -2, 2);
        auto c = random_series(heis, rng, -2, 2);
        CHECK((a * b) * c == a * (b * c));  // delta = 0: truncation is exact here
        CHECK((a + b) * c == a * c + b * c);
    }
}

TEST_CASE("series inversion by back-substitution") {
    auto ctx = make_weyl_context(10);
    RatFunc t = t_ratfunc();
    auto one = TruncSeries<RatFunc>::one(ctx);

    // (X t)^-1 = t^-1 X^-1 shifted by the commutation; check the roundtrip.
    auto u = TruncSeries<RatFunc>::x_power(ctx, 1) * TruncSeries<RatFunc>::from_scalar(ctx, t);
    auto v = skew_inv(u);
    CHECK(agree_above(u * v, one, -9));
    CHECK(agree_above(v * u, one, -9));

    // Geometric series: (1 - X^-1)^-1 = sum_k X^-k, exact on the whole window.
    auto g = one - TruncSeries<RatFunc>::x_power(ctx, -1);
    auto ginv = skew_inv(g);
    TruncSeries<RatFunc> expect(ctx);
    for (int k = 0; k >= -10; --k) expect.add_to(k, RatFunc(1));
    CHECK(ginv == expect);
    CHECK(g * ginv == one);

    // Unit with positive top degree: inverse only determined above -N + 1.
    auto w = one - TruncSeries<RatFunc>::x_power(ctx, 1);
    auto winv = skew_inv(w);
    CHECK(agree_above(w * winv, one, -9));
    CHECK(agree_above(winv * w, one, -9));

    CHECK_THROWS_AS(skew_inv(TruncSeries<RatFunc>::zero(ctx)), DivisionByZero);

    // Twisted coefficients: u = Y X^2 + t needs sigma^-2 in the update.
    auto heis = make_heisenberg_context(10);
    YFunc y = y_yfunc();
    auto uh = TruncSeries<YFunc>::monomial(heis, y, 2) +
              TruncSeries<YFunc>::from_scalar(heis, YFunc(t_ratfunc()));
    auto vh = skew_inv(uh);
    auto one_h = TruncSeries<YFunc>::one(heis);
    CHECK(agree_above(uh * vh, one_h, -8));
    CHECK(agree_above(vh * uh, one_h, -8));
}

TEST_CASE("ascending windows") {
    RatFunc t = t_ratfunc();
    EndoImages<RatFunc> s{rat_of(2) * t, std::nullopt};
    EndoImages<RatFunc> si{rat_of(1, 2) * t, std::nullopt};
    auto ctx = make_context<RatFunc>(s, si, RatFunc(0), RatFunc(0), 6,
                                     SeriesDirection::AscendingX);
    auto one = TruncSeries<RatFunc>::one(ctx);
    auto X = TruncSeries<RatFunc>::x_power(ctx, 1);
    auto S = [&](const RatFunc& c) { return TruncSeries<RatFunc>::from_scalar(ctx, c); };

    // X t = 2t X in the ascending model too.
    CHECK(X * S(t) == TruncSeries<RatFunc>::monomial(ctx, rat_of(2) * t, 1));

    // (1 - X)^-1 = sum_{k>=0} X^k up to the ceiling.
    auto g = one - X;
    auto ginv = skew_inv(g);
    TruncSeries<RatFunc> expect(ctx);
    for (int k = 0; k <= 6; ++k) expect.add_to(k, RatFunc(1));
    CHECK(ginv == expect);

    // Degrees above the ceiling are dropped.
    CHECK((TruncSeries<RatFunc>::x_power(ctx, 6) * X).is_zero());

    // Negative degrees are unbounded on this side.
    auto lo = TruncSeries<RatFunc>::x_power(ctx, -40);
    CHECK(!(lo * S(t)).is_zero());
}

TEST_CASE("window truncation and context separation") {
    auto ctx = make_weyl_context(4);
    auto other = make_weyl_context(4);
    auto a = TruncSeries<RatFunc>::x_power(ctx, -4);
    CHECK((TruncSeries<RatFunc>::x_power(ctx, -1) * a).is_zero());
    auto b = TruncSeries<RatFunc>::one(other);
    CHECK_THROWS_AS(TruncSeries<RatFunc>::one(ctx) + b, ContextMismatch);
    CHECK_THROWS_AS(TruncSeries<RatFunc>::one(ctx) == b, ContextMismatch);

    // Printing smoke check.
    auto u = TruncSeries<RatFunc>::monomial(ctx, t_ratfunc(), -1) + TruncSeries<RatFunc>::one(ctx);
    CHECK(to_string(u) == "(1) + (t)*X^-1");
}
