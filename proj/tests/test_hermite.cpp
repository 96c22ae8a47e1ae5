// Hermite reduction: f = rational_part' + remainder with a squarefree,
// proper remainder. The remainder is the linear projection along derivatives
// that the span test is built on.

#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "skewfree/hermite.hpp"

using namespace skewfree;

namespace {

bool denominator_squarefree(const RatFunc& r) {
    for (const auto& [q, m] : squarefree_decomposition(r.den()))
        if (m > 1 && q.degree() > 0) return false;
    return true;
}

bool is_proper(const RatFunc& r) {
    return r.is_zero() || r.num().degree() < r.den().degree();
}

}  // namespace

TEST_CASE("hermite reduction on the hand-checked pair") {
    QPoly t = QPoly::variable();
    RatFunc a(t, QPoly(Rat(1)) + t * t);        // t/(1+t^2)
    RatFunc b(QPoly(Rat(1)), QPoly(Rat(1)) + t);  // 1/(1+t)

    HermiteResult sq = hermite_reduce(a * a);
    CHECK(sq.remainder == RatFunc(QPoly(Rat(1, 2)), QPoly(Rat(1)) + t * t));
    CHECK(sq.rational_part == RatFunc(QPoly::monomial(Rat(-1, 2), 1), QPoly(Rat(1)) + t * t));
    CHECK(sq.rational_part.derivative() + sq.remainder == a * a);

    // ab already has a squarefree denominator: it is its own remainder.
    HermiteResult cross = hermite_reduce(a * b);
    CHECK(cross.rational_part.is_zero());
    CHECK(cross.remainder == a * b);

    CHECK(span_meets_derivatives({a * a, a * b}));
}

TEST_CASE("random reductions reconstruct their input") {
    std::mt19937_64 rng(0x4E8);
    for (int i = 0; i < 100; ++i) {
        RatFunc f = random_ratfunc(rng, 4, 8);
        HermiteResult h = hermite_reduce(f);
        CHECK(h.rational_part.derivative() + h.remainder == f);
        CHECK(is_proper(h.remainder));
        CHECK(denominator_squarefree(h.remainder));
    }
}

TEST_CASE("the remainder is a linear projection that kills derivatives") {
    std::mt19937_64 rng(0x51AB);
    for (int i = 0; i < 30; ++i) {
        RatFunc f = random_ratfunc(rng, 3, 6);
        RatFunc g = random_ratfunc(rng, 3, 6);
        CHECK(hermite_reduce(f + g).remainder ==
              hermite_reduce(f).remainder + hermite_reduce(g).remainder);
        CHECK(hermite_reduce(RatFunc(Rat(3)) * f).remainder ==
              RatFunc(Rat(3)) * hermite_reduce(f).remainder);
        CHECK(hermite_reduce(f.derivative()).remainder.is_zero());
        // Shifting by a derivative never changes the remainder.
        CHECK(hermite_reduce(f + g.derivative()).remainder == hermite_reduce(f).remainder);
    }
}

TEST_CASE("span versus derivatives") {
    QPoly t = QPoly::variable();
    RatFunc invt(QPoly(Rat(1)), t);
    RatFunc inv1t(QPoly(Rat(1)), QPoly(Rat(1)) + t);

    CHECK(span_meets_derivatives({invt, inv1t}));
    // A derivative in the list trips the test on its own.
    CHECK_FALSE(span_meets_derivatives({invt.derivative()}));
    // So does a rational multiple of an earlier element.
    CHECK_FALSE(span_meets_derivatives({invt, RatFunc(Rat(2)) * invt}));
    // And a combination that is a derivative up to lower terms:
    // d/dt(-1/t) = 1/t^2, so {1/t^2} fails while {1/t} passes.
    CHECK_FALSE(span_meets_derivatives({invt * invt}));
    CHECK(span_meets_derivatives({invt}));
}
