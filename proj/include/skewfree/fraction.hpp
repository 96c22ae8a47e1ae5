#pragma once

#include <utility>

#include "skewfree/error.hpp"
#include "skewfree/polynomial.hpp"

namespace skewfree {

// Field of fractions of Polynomial<K>. Canonical form is maintained by every
// operation: gcd(num, den) = 1 and den monic, zero stored as 0/1. Because of
// that, operator== on the representation is semantic equality.
template <class K>
class RationalFunction {
    Polynomial<K> num_;
    Polynomial<K> den_;

    static RationalFunction make_monic(Polynomial<K> n, Polynomial<K> d) {
        RationalFunction r;
        if (n.is_zero()) {
            r.num_ = Polynomial<K>();
            r.den_ = Polynomial<K>(K(1));
            return r;
        }
        K lead = d.leading();
        if (!(lead == K(1))) {
            K inv = kf_inv(lead);
            n = inv * n;
            d = inv * d;
        }
        r.num_ = std::move(n);
        r.den_ = std::move(d);
        return r;
    }

  public:
    using coeff_type = K;
    using poly_type = Polynomial<K>;

    RationalFunction() : num_(), den_(K(1)) {}
    RationalFunction(long c) : num_(K(c)), den_(K(1)) {}
    RationalFunction(const K& c) : num_(c), den_(K(1)) {}
    RationalFunction(const Polynomial<K>& p) : num_(p), den_(K(1)) {}

    // Lift of an exact rational into K, for coefficient fields that reduce
    // rationals (compiled only where K provides the reduction).
    static RationalFunction from_rational(const Rat& r) {
        return RationalFunction(K::from_rational(r));
    }

    // General quotient; reduces to canonical form.
    RationalFunction(Polynomial<K> n, Polynomial<K> d) {
        if (d.is_zero()) throw DivisionByZero("rational function with zero denominator");
        if (n.is_zero()) {
            num_ = Polynomial<K>();
            den_ = Polynomial<K>(K(1));
            return;
        }
        Polynomial<K> g = poly_gcd(n, d);
        if (g.degree() > 0) {
            n = exact_div(n, g);
            d = exact_div(d, g);
        }
        *this = make_monic(std::move(n), std::move(d));
    }

    const Polynomial<K>& num() const { return num_; }
    const Polynomial<K>& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return den_.is_constant() && num_ == Polynomial<K>(K(1)); }
    // Constant means: lies in the coefficient field K.
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    K as_base() const {
        if (!is_constant()) throw AlgebraError("rational function is not a constant");
        if (num_.is_zero()) return K(0);
        return num_.coeff(0);
    }

    RationalFunction operator-() const {
        RationalFunction r(*this);
        r.num_ = -r.num_;
        return r;
    }

    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        // Split off g = gcd of the denominators; any surviving common factor
        // of the sum divides g, so one small gcd finishes the reduction.
        Polynomial<K> g = poly_gcd(a.den_, b.den_);
        Polynomial<K> da = (g.degree() > 0) ? exact_div(a.den_, g) : a.den_;
        Polynomial<K> db = (g.degree() > 0) ? exact_div(b.den_, g) : b.den_;
        Polynomial<K> n = a.num_ * db + b.num_ * da;
        if (n.is_zero()) return RationalFunction();
        Polynomial<K> d = da * b.den_;
        if (g.degree() > 0) {
            Polynomial<K> h = poly_gcd(n, g);
            if (h.degree() > 0) {
                n = exact_div(n, h);
                d = exact_div(d, h);
            }
        }
        return make_monic(std::move(n), std::move(d));
    }
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
        return a + (-b);
    }
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
        if (a.is_zero() || b.is_zero()) return RationalFunction();
        // Cross-cancel before multiplying; the four cross gcds being 1
        // guarantees the product is already reduced.
        Polynomial<K> g1 = poly_gcd(a.num_, b.den_);
        Polynomial<K> g2 = poly_gcd(b.num_, a.den_);
        Polynomial<K> n = (g1.degree() > 0 ? exact_div(a.num_, g1) : a.num_) *
                          (g2.degree() > 0 ? exact_div(b.num_, g2) : b.num_);
        Polynomial<K> d = (g2.degree() > 0 ? exact_div(a.den_, g2) : a.den_) *
                          (g1.degree() > 0 ? exact_div(b.den_, g1) : b.den_);
        return make_monic(std::move(n), std::move(d));
    }
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
        return a * b.inverse();
    }

    RationalFunction inverse() const {
        if (is_zero()) throw DivisionByZero("inverse of zero rational function");
        return make_monic(den_, num_);
    }

    RationalFunction pow(long e) const {
        if (e == 0) return RationalFunction(1);
        if (e < 0) return inverse().pow(-e);
        // Powers of a reduced fraction stay reduced.
        return make_monic(num_.pow(e), den_.pow(e));
    }

    // Formal derivative in the fraction variable (quotient rule).
    RationalFunction derivative() const {
        if (is_zero() || (num_.is_constant() && den_.is_constant())) return RationalFunction();
        Polynomial<K> n = num_.derivative() * den_ - num_ * den_.derivative();
        return RationalFunction(std::move(n), den_ * den_);
    }

    friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RationalFunction& a, const RationalFunction& b) { return !(a == b); }
};

// ---- gcd in (K(x))[y] via the primitive remainder sequence ------------------

namespace detail {

template <class K>
int frac_deg(const std::vector<Polynomial<K>>& v) {
    return static_cast<int>(v.size()) - 1;
}

template <class K>
void frac_trim(std::vector<Polynomial<K>>& v) {
    while (!v.empty() && v.back().is_zero()) v.pop_back();
}

// Divide out the gcd of the coefficients. Early exit on a constant content:
// the first two coefficients are usually already coprime.
template <class K>
void frac_strip_content(std::vector<Polynomial<K>>& v) {
    Polynomial<K> content;
    for (const auto& c : v) {
        if (c.is_zero()) continue;
        content = poly_gcd(content, c);
        if (content.degree() == 0) return;
    }
    if (content.degree() <= 0) return;
    for (auto& c : v)
        if (!c.is_zero()) c = exact_div(c, content);
}

// Coefficients of p scaled into K[x] with content 1. Scaling is by a nonzero
// element of K(x), so gcds are unaffected.
template <class K>
std::vector<Polynomial<K>> frac_primitive(const Polynomial<RationalFunction<K>>& p) {
    std::vector<Polynomial<K>> v;
    if (p.is_zero()) return v;
    Polynomial<K> l(K(1));
    for (const auto& c : p.coeffs())
        if (!c.is_zero()) l = poly_lcm(l, c.den());
    v.reserve(p.coeffs().size());
    for (const auto& c : p.coeffs())
        v.push_back(c.is_zero() ? Polynomial<K>() : c.num() * exact_div(l, c.den()));
    frac_strip_content(v);
    return v;
}

// Pseudo-remainder of a by b: some power of lc(b) times (a mod b), computed
// without any division in K(x).
template <class K>
std::vector<Polynomial<K>> frac_prem(std::vector<Polynomial<K>> a,
                                     const std::vector<Polynomial<K>>& b) {
    const Polynomial<K>& lb = b.back();
    int db = frac_deg(b);
    while (frac_deg(a) >= db) {
        Polynomial<K> la = a.back();
        int shift = frac_deg(a) - db;
        for (auto& x : a) x = x * lb;
        for (int i = 0; i <= db; ++i)
            a[static_cast<std::size_t>(i + shift)] = a[static_cast<std::size_t>(i + shift)] - la * b[static_cast<std::size_t>(i)];
        frac_trim(a);
        if (a.empty()) break;
    }
    return a;
}

}  // namespace detail

// Monic gcd in (K(x))[y]. Monic Euclid directly over the fraction field
// roughly squares the inner x-degrees at every remainder step; clearing the
// denominators once and keeping each pseudo-remainder primitive keeps them
// near the size of the answer instead.
template <class K>
Polynomial<RationalFunction<K>> poly_gcd(const Polynomial<RationalFunction<K>>& a,
                                         const Polynomial<RationalFunction<K>>& b) {
    if (a.is_zero()) return b.monic();
    if (b.is_zero()) return a.monic();
    std::vector<Polynomial<K>> A = detail::frac_primitive(a);
    std::vector<Polynomial<K>> B = detail::frac_primitive(b);
    if (detail::frac_deg(A) < detail::frac_deg(B)) std::swap(A, B);
    while (detail::frac_deg(B) > 0) {
        std::vector<Polynomial<K>> R = detail::frac_prem(A, B);
        if (R.empty()) break;
        detail::frac_strip_content(R);
        A = std::move(B);
        B = std::move(R);
    }
    if (detail::frac_deg(B) == 0) B.assign(1, Polynomial<K>(K(1)));
    std::vector<RationalFunction<K>> out;
    out.reserve(B.size());
    for (const auto& c : B) out.emplace_back(c);
    return Polynomial<RationalFunction<K>>::from_coeffs(std::move(out)).monic();
}

}  // namespace skewfree
