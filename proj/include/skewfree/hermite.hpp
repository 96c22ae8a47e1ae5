#pragma once

#include <utility>
#include <vector>

#include "skewfree/linalg.hpp"
#include "skewfree/tower.hpp"

namespace skewfree {

// f = rational_part' + remainder, with the remainder proper and carrying a
// squarefree denominator. That normal form is unique: the derivative of a
// non-polynomial rational function always has a squared factor in its
// denominator, so the difference of two remainders can never be a
// derivative. Uniqueness makes remainder() a Q-linear projection, which is
// what the span tests below rely on.
struct HermiteResult {
    RatFunc rational_part;
    RatFunc remainder;
};

namespace detail {

inline QPoly poly_antiderivative(const QPoly& p) {
    std::vector<Rat> c(static_cast<std::size_t>(p.degree()) + 2, Rat(0));
    for (int i = 0; i <= p.degree(); ++i)
        c[static_cast<std::size_t>(i) + 1] = p.coeff(i) / Rat(i + 1);
    return QPoly::from_coeffs(std::move(c));
}

// Splits off the polynomial part of f into an exact antiderivative,
// returning the proper remainder.
inline RatFunc absorb_polynomial_part(const RatFunc& f, RatFunc& rational_part) {
    if (f.is_zero() || f.num().degree() < f.den().degree()) return f;
    auto [q, r] = divrem(f.num(), f.den());
    rational_part = rational_part + RatFunc(poly_antiderivative(q));
    return RatFunc(r, f.den());
}

}  // namespace detail

// Hermite reduction over Q(t). Works factor by factor: for a squarefree Q
// with s Q + u Q' = 1 and any numerator A,
//   A/Q^m = d/dt( -A u / ((m-1) Q^(m-1)) ) + ( A s + (A u)'/(m-1) ) / Q^(m-1),
// an exact identity that lowers the multiplicity until the denominator is
// squarefree.
inline HermiteResult hermite_reduce(const RatFunc& f) {
    HermiteResult out;
    RatFunc rest = detail::absorb_polynomial_part(f, out.rational_part);
    for (;;) {
        if (rest.is_zero()) break;
        auto factors = squarefree_decomposition(rest.den());
        const std::pair<QPoly, int>* pick = nullptr;
        for (const auto& fm : factors)
            if (fm.second >= 2) {
                pick = &fm;
                break;
            }
        if (!pick) break;
        const QPoly& Q = pick->first;
        const int m = pick->second;
        QPoly V = exact_div(rest.den(), Q.pow(m));

        // Partial fractions: A/(V Q^m) = (A s')/V + (A u')/Q^m
        // with s' Q^m + u' V = 1.
        auto [g1, sp, up] = extended_gcd(Q.pow(m), V);
        if (!(g1 == QPoly(Rat(1)))) throw AlgebraError("squarefree factors not coprime");
        const QPoly& A = rest.num();
        QPoly A2 = A * up;

        auto [g2, s, u] = extended_gcd(Q, Q.derivative());
        if (!(g2 == QPoly(Rat(1)))) throw AlgebraError("squarefree factor shares a root with its derivative");

        Rat inv_m1 = rat_of(1, m - 1);
        out.rational_part =
            out.rational_part + RatFunc(-(inv_m1 * (A2 * u)), Q.pow(m - 1));
        RatFunc lowered(A2 * s + inv_m1 * (A2 * u).derivative(), Q.pow(m - 1));
        RatFunc other = V.is_constant() ? RatFunc(0) : RatFunc(A * sp, V);
        rest = detail::absorb_polynomial_part(lowered + other, out.rational_part);
    }
    out.remainder = rest;
    return out;
}

// True iff the only Q-linear combination of the given elements that is a
// derivative of a rational function is the trivial one. Since the Hermite
// remainder is a linear projection that kills exactly the derivatives, this
// is equivalent to Q-linear independence of the remainders.
inline bool span_meets_derivatives(const std::vector<RatFunc>& elems) {
    std::vector<RatFunc> rems;
    rems.reserve(elems.size());
    QPoly lcd(Rat(1));
    for (const RatFunc& f : elems) {
        RatFunc r = hermite_reduce(f).remainder;
        lcd = poly_lcm(lcd, r.den());
        rems.push_back(std::move(r));
    }
    // Columns: t-degree of the cleared numerator, constant term included.
    int width = 0;
    for (const RatFunc& r : rems)
        width = std::max(width, r.num().degree() + (lcd.degree() - r.den().degree()) + 1);
    RowReducer<Rat> red;
    for (const RatFunc& r : rems) {
        std::vector<Rat> row(static_cast<std::size_t>(std::max(width, 1)), Rat(0));
        if (!r.is_zero()) {
            QPoly cleared = r.num() * exact_div(lcd, r.den());
            for (int i = 0; i <= cleared.degree(); ++i) row[static_cast<std::size_t>(i)] = cleared.coeff(i);
        }
        if (!red.feed(std::move(row)).independent) return false;
    }
    return true;
}

}  // namespace skewfree
