#pragma once

#include <algorithm>
#include <functional>
#include <random>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "skewfree/error.hpp"
#include "skewfree/rational.hpp"

namespace skewfree {

// Small field-op shims so Polynomial<K> works for K = Rat and for richer
// coefficient fields (which expose is_zero()/inverse() members).
inline bool kf_is_zero(const Rat& x) { return sgn(x) == 0; }
inline Rat kf_inv(const Rat& x) { return rat_inv(x); }
template <class K>
bool kf_is_zero(const K& x) {
    return x.is_zero();
}
template <class K>
K kf_inv(const K& x) {
    return x.inverse();
}

// Dense univariate polynomial over a field K. Invariant: no trailing zero
// coefficients, so the zero polynomial is the empty vector and degree() is
// -1 for it.
template <class K>
class Polynomial {
    std::vector<K> c_;

    void trim() {
        while (!c_.empty() && kf_is_zero(c_.back())) c_.pop_back();
    }

  public:
    Polynomial() = default;
    Polynomial(const K& constant) {
        c_.push_back(constant);
        trim();
    }
    Polynomial(long constant) : Polynomial(K(constant)) {}

    static Polynomial from_coeffs(std::vector<K> coeffs) {
        Polynomial p;
        p.c_ = std::move(coeffs);
        p.trim();
        return p;
    }
    static Polynomial monomial(const K& coeff, int deg) {
        Polynomial p;
        if (!kf_is_zero(coeff)) {
            p.c_.assign(static_cast<std::size_t>(deg) + 1, K(0));
            p.c_.back() = coeff;
        }
        return p;
    }
    static Polynomial variable() { return monomial(K(1), 1); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }
    const std::vector<K>& coeffs() const { return c_; }

    K coeff(int i) const {
        if (i < 0 || i >= static_cast<int>(c_.size())) return K(0);
        return c_[static_cast<std::size_t>(i)];
    }
    const K& leading() const { return c_.back(); }

    Polynomial operator-() const {
        Polynomial r(*this);
        for (auto& x : r.c_) x = -x;
        return r;
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        Polynomial r;
        r.c_.resize(std::max(a.c_.size(), b.c_.size()), K(0));
        for (std::size_t i = 0; i < r.c_.size(); ++i) {
            if (i < a.c_.size()) r.c_[i] = r.c_[i] + a.c_[i];
            if (i < b.c_.size()) r.c_[i] = r.c_[i] + b.c_[i];
        }
        r.trim();
        return r;
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return Polynomial();
        Polynomial r;
        r.c_.assign(a.c_.size() + b.c_.size() - 1, K(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (kf_is_zero(a.c_[i])) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                r.c_[i + j] = r.c_[i + j] + a.c_[i] * b.c_[j];
        }
        r.trim();
        return r;
    }
    friend Polynomial operator*(const K& s, const Polynomial& p) {
        Polynomial r(p);
        for (auto& x : r.c_) x = s * x;
        r.trim();
        return r;
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

    // Multiply by x^k.
    Polynomial shifted(int k) const {
        if (is_zero()) return Polynomial();
        Polynomial r;
        r.c_.assign(c_.size() + static_cast<std::size_t>(k), K(0));
        std::copy(c_.begin(), c_.end(), r.c_.begin() + k);
        return r;
    }

    Polynomial derivative() const {
        Polynomial r;
        for (std::size_t i = 1; i < c_.size(); ++i) r.c_.push_back(K(static_cast<long>(i)) * c_[i]);
        r.trim();
        return r;
    }

    // Horner evaluation in any commutative ring L reachable from K via lift.
    template <class L, class Lift>
    L eval(const L& x, Lift&& lift) const {
        L acc(0);
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + lift(c_[i]);
        return acc;
    }

    Polynomial monic() const {
        if (is_zero()) return *this;
        return kf_inv(leading()) * *this;
    }

    Polynomial pow(long e) const {
        Polynomial acc(K(1));
        Polynomial base(*this);
        while (e > 0) {
            if (e & 1) acc = acc * base;
            base = base * base;
            e >>= 1;
        }
        return acc;
    }
};

template <class K>
std::pair<Polynomial<K>, Polynomial<K>> divrem(const Polynomial<K>& a, const Polynomial<K>& b) {
    if (b.is_zero()) throw DivisionByZero("polynomial division by zero");
    Polynomial<K> q;
    Polynomial<K> r = a;
    const K lead_inv = kf_inv(b.leading());
    while (!r.is_zero() && r.degree() >= b.degree()) {
        K factor = r.leading() * lead_inv;
        int shift = r.degree() - b.degree();
        Polynomial<K> term = Polynomial<K>::monomial(factor, shift);
        q = q + term;
        r = r - term * b;
    }
    return {q, r};
}

// Division known to be exact; the nonzero-remainder check guards internal
// algebra (subresultant steps, factor cancellation).
template <class K>
Polynomial<K> exact_div(const Polynomial<K>& a, const Polynomial<K>& b) {
    auto [q, r] = divrem(a, b);
    if (!r.is_zero()) throw AlgebraError("exact polynomial division left a remainder");
    return q;
}

template <class K>
bool divides(const Polynomial<K>& b, const Polynomial<K>& a) {
    if (b.is_zero()) return a.is_zero();
    return divrem(a, b).second.is_zero();
}

// ---- integer subresultant gcd for Q[x] ------------------------------------

namespace detail {

// Scale a rational polynomial to a primitive integer vector (content 1,
// positive leading coefficient). The scaling is by a nonzero rational, so
// gcds are unaffected.
inline std::vector<Int> int_primitive(const Polynomial<Rat>& p) {
    std::vector<Int> v;
    if (p.is_zero()) return v;
    Int den_lcm(1);
    for (const Rat& c : p.coeffs()) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
    v.reserve(p.coeffs().size());
    for (const Rat& c : p.coeffs()) {
        Rat scaled = c * Rat(den_lcm);
        v.push_back(scaled.get_num());
    }
    Int content(0);
    for (const Int& x : v) mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), x.get_mpz_t());
    if (sgn(v.back()) < 0) content = -content;
    for (Int& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), content.get_mpz_t());
    return v;
}

inline int zdeg(const std::vector<Int>& v) { return static_cast<int>(v.size()) - 1; }

inline void ztrim(std::vector<Int>& v) {
    while (!v.empty() && sgn(v.back()) == 0) v.pop_back();
}

// Pseudo-remainder of a by b over Z: lc(b)^(deg a - deg b + 1) * a mod b.
// Each reduction step contributes one factor of lc(b); if the degree drops by
// more than one (leading terms cancel), the missing factors are padded in at
// the end so the result is the full pseudo-remainder the subresultant
// divisions require.
inline std::vector<Int> zprem(std::vector<Int> a, const std::vector<Int>& b) {
    const Int& lb = b.back();
    int db = zdeg(b);
    int want = zdeg(a) - db + 1;
    int steps = 0;
    while (zdeg(a) >= db) {
        Int la = a.back();
        int shift = zdeg(a) - db;
        for (Int& x : a) x *= lb;
        for (int i = 0; i <= db; ++i) a[static_cast<std::size_t>(i + shift)] -= la * b[static_cast<std::size_t>(i)];
        ztrim(a);
        ++steps;
        if (a.empty()) break;
    }
    for (; steps < want; ++steps)
        for (Int& x : a) x *= lb;
    return a;
}

}  // namespace detail

// Monic gcd in Q[x] via the subresultant polynomial remainder sequence over
// Z, which keeps intermediate coefficients near the size of the true
// subresultants instead of exploding the way fraction-based Euclid does.
inline Polynomial<Rat> poly_gcd(const Polynomial<Rat>& a, const Polynomial<Rat>& b) {
    if (a.is_zero()) return b.monic();
    if (b.is_zero()) return a.monic();
    std::vector<Int> A = detail::int_primitive(a);
    std::vector<Int> B = detail::int_primitive(b);
    if (detail::zdeg(A) < detail::zdeg(B)) std::swap(A, B);
    Int g(1), h(1);
    while (true) {
        int d = detail::zdeg(A) - detail::zdeg(B);
        std::vector<Int> R = detail::zprem(A, B);
        if (R.empty()) break;
        if (detail::zdeg(R) == 0) {
            B.assign(1, Int(1));
            break;
        }
        A = std::move(B);
        B = std::move(R);
        Int scale = g;
        for (int i = 0; i < d; ++i) scale *= h;
        for (Int& x : B) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), scale.get_mpz_t());
        g = A.back();
        if (d > 0) {
            // h = g^d / h^(d-1), exact by the subresultant theory.
            Int num = g;
            for (int i = 1; i < d; ++i) num *= g;
            Int den(1);
            for (int i = 1; i < d; ++i) den *= h;
            mpz_divexact(h.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        }
    }
    std::vector<Rat> out;
    out.reserve(B.size());
    for (const Int& x : B) out.emplace_back(x);
    return Polynomial<Rat>::from_coeffs(std::move(out)).monic();
}

// Fallback for other coefficient fields: monic Euclid. Fine for the small
// degrees it is used at.
template <class K>
Polynomial<K> poly_gcd(const Polynomial<K>& a, const Polynomial<K>& b) {
    Polynomial<K> x = a, y = b;
    while (!y.is_zero()) {
        auto [q, r] = divrem(x, y);
        (void)q;
        x = std::move(y);
        y = std::move(r);
    }
    return x.monic();
}

template <class K>
Polynomial<K> poly_lcm(const Polynomial<K>& a, const Polynomial<K>& b) {
    if (a.is_zero() || b.is_zero()) return Polynomial<K>();
    return exact_div(a * b, poly_gcd(a, b)).monic();
}

template <class K>
K evaluate_at(const Polynomial<K>& p, const K& x) {
    K acc(0);
    for (int i = p.degree(); i >= 0; --i) acc = acc * x + p.coeff(i);
    return acc;
}

// Extended Euclid over a field: returns (g, s, u) with s*a + u*b = g, g monic.
template <class K>
std::tuple<Polynomial<K>, Polynomial<K>, Polynomial<K>> extended_gcd(const Polynomial<K>& a,
                                                                     const Polynomial<K>& b) {
    Polynomial<K> r0 = a, r1 = b;
    Polynomial<K> s0(K(1)), s1(K(0));
    Polynomial<K> t0(K(0)), t1(K(1));
    while (!r1.is_zero()) {
        auto [q, r] = divrem(r0, r1);
        r0 = std::move(r1);
        r1 = std::move(r);
        Polynomial<K> s2 = s0 - q * s1;
        s0 = std::move(s1);
        s1 = std::move(s2);
        Polynomial<K> t2 = t0 - q * t1;
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.is_zero()) return {r0, s0, t0};
    K inv = kf_inv(r0.leading());
    return {inv * r0, inv * s0, inv * t0};
}

// Yun's squarefree decomposition: p = lc * prod_i out[i].first^(out[i].second)
// with the factors monic, squarefree and pairwise coprime, exponents strictly
// increasing.
template <class K>
std::vector<std::pair<Polynomial<K>, int>> squarefree_decomposition(const Polynomial<K>& p) {
    std::vector<std::pair<Polynomial<K>, int>> out;
    if (p.is_constant()) return out;
    Polynomial<K> f = p.monic();
    Polynomial<K> fp = f.derivative();
    Polynomial<K> c = poly_gcd(f, fp);
    Polynomial<K> w = exact_div(f, c);
    Polynomial<K> y = exact_div(fp, c);
    Polynomial<K> z = y - w.derivative();
    int i = 1;
    while (!w.is_constant()) {
        Polynomial<K> g = poly_gcd(w, z);
        if (!g.is_constant()) out.emplace_back(g, i);
        w = exact_div(w, g);
        y = exact_div(z, g);
        z = y - w.derivative();
        ++i;
    }
    return out;
}

inline Polynomial<Rat> random_poly(std::mt19937_64& rng, int maxdeg, long bound = 9) {
    std::uniform_int_distribution<int> degd(0, maxdeg);
    int d = degd(rng);
    std::vector<Rat> c;
    c.reserve(static_cast<std::size_t>(d) + 1);
    for (int i = 0; i <= d; ++i) c.push_back(random_rat(rng, bound));
    return Polynomial<Rat>::from_coeffs(std::move(c));
}

// Renders with ascending powers; coefficients are printed so that the result
// reparses under the expression grammar (explicit '*', '^' for powers).
template <class K, class CoeffPrint>
std::string poly_to_string(const Polynomial<K>& p, const std::string& var, CoeffPrint&& cp) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (int i = 0; i <= p.degree(); ++i) {
        K c = p.coeff(i);
        if (kf_is_zero(c)) continue;
        auto [text, negated] = cp(c);  // cp may pull a leading '-' out
        std::string term;
        if (i == 0) {
            term = text;
        } else {
            std::string xpow = (i == 1) ? var : var + "^" + std::to_string(i);
            term = (text == "1") ? xpow : text + "*" + xpow;
        }
        if (first) {
            out = negated ? "-" + term : term;
            first = false;
        } else {
            out += negated ? " - " + term : " + " + term;
        }
    }
    return out;
}

}  // namespace skewfree
