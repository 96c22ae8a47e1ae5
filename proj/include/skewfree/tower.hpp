#pragma once

#include <map>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "skewfree/fraction.hpp"

namespace skewfree {

using QPoly = Polynomial<Rat>;            // Q[t]
using RatFunc = RationalFunction<Rat>;    // Q(t)
using YPoly = Polynomial<RatFunc>;        // Q(t)[Y]
using YFunc = RationalFunction<RatFunc>;  // Q(t)(Y)

enum class Level { Qt, QtY };

template <class D>
inline constexpr Level level_of = std::is_same_v<D, RatFunc> ? Level::Qt : Level::QtY;

// ---- gcd in Q(t)[Y] --------------------------------------------------------
//
// Subresultant remainder sequence over Q[t] after clearing the t-denominators.
// Keeping the coefficients polynomial avoids the degree explosion of running
// Euclid with rational-function divisions at the Y level.

namespace detail {

inline std::vector<QPoly> clear_to_bipoly(const Polynomial<RatFunc>& p) {
    QPoly L(Rat(1));
    for (const RatFunc& c : p.coeffs()) L = poly_lcm(L, c.den());
    std::vector<QPoly> v;
    v.reserve(p.coeffs().size());
    for (const RatFunc& c : p.coeffs()) v.push_back(c.num() * exact_div(L, c.den()));
    return v;
}

inline int bdeg(const std::vector<QPoly>& v) { return static_cast<int>(v.size()) - 1; }

inline void btrim(std::vector<QPoly>& v) {
    while (!v.empty() && v.back().is_zero()) v.pop_back();
}

// Full pseudo-remainder lc(b)^(deg a - deg b + 1) * a mod b; missing factors
// from multi-degree drops are padded so the subresultant divisions stay exact.
inline std::vector<QPoly> bprem(std::vector<QPoly> a, const std::vector<QPoly>& b) {
    const QPoly& lb = b.back();
    int db = bdeg(b);
    int want = bdeg(a) - db + 1;
    int steps = 0;
    while (bdeg(a) >= db) {
        QPoly la = a.back();
        int shift = bdeg(a) - db;
        for (QPoly& x : a) x = lb * x;
        for (int i = 0; i <= db; ++i) {
            auto k = static_cast<std::size_t>(i + shift);
            a[k] = a[k] - la * b[static_cast<std::size_t>(i)];
        }
        btrim(a);
        ++steps;
        if (a.empty()) break;
    }
    for (; steps < want; ++steps)
        for (QPoly& x : a) x = lb * x;
    return a;
}

}  // namespace detail

inline Polynomial<RatFunc> poly_gcd(const Polynomial<RatFunc>& a, const Polynomial<RatFunc>& b) {
    if (a.is_zero()) return b.monic();
    if (b.is_zero()) return a.monic();
    if (a.degree() == 0 || b.degree() == 0) return Polynomial<RatFunc>(RatFunc(1));
    std::vector<QPoly> A = detail::clear_to_bipoly(a);
    std::vector<QPoly> B = detail::clear_to_bipoly(b);
    if (detail::bdeg(A) < detail::bdeg(B)) std::swap(A, B);
    QPoly g(Rat(1)), h(Rat(1));
    while (true) {
        int d = detail::bdeg(A) - detail::bdeg(B);
        std::vector<QPoly> R = detail::bprem(A, B);
        if (R.empty()) break;
        if (detail::bdeg(R) == 0) {
            B.assign(1, QPoly(Rat(1)));
            break;
        }
        A = std::move(B);
        B = std::move(R);
        QPoly scale = g;
        for (int i = 0; i < d; ++i) scale = scale * h;
        for (QPoly& x : B) x = exact_div(x, scale);
        g = A.back();
        if (d > 0) {
            QPoly num = g;
            for (int i = 1; i < d; ++i) num = num * g;
            QPoly den(Rat(1));
            for (int i = 1; i < d; ++i) den = den * h;
            h = exact_div(num, den);
        }
    }
    std::vector<RatFunc> out;
    out.reserve(B.size());
    for (QPoly& x : B) out.emplace_back(std::move(x));
    return Polynomial<RatFunc>::from_coeffs(std::move(out)).monic();
}

// ---- canonical generators and embeddings -----------------------------------

inline RatFunc t_ratfunc() { return RatFunc(QPoly::variable()); }
inline YFunc y_yfunc() { return YFunc(YPoly::variable()); }

template <class D>
D from_rat(const Rat& r) {
    if constexpr (std::is_same_v<D, RatFunc>) {
        return RatFunc(r);
    } else if constexpr (std::is_same_v<D, YFunc>) {
        return YFunc(RatFunc(r));
    } else {
        return D::from_rational(r);  // reduced-coefficient levels
    }
}

// The distinguished variable of the level: t over Q(t), and the fraction
// variable itself at reduced levels (where it stands in for Y).
template <class D>
D t_elem() {
    if constexpr (std::is_same_v<D, RatFunc>) {
        return t_ratfunc();
    } else if constexpr (std::is_same_v<D, YFunc>) {
        return YFunc(t_ratfunc());
    } else {
        return D(D::poly_type::variable());
    }
}

template <class D>
D y_elem() {
    if constexpr (std::is_same_v<D, YFunc>) {
        return y_yfunc();
    } else {
        throw UnknownSymbol("Y is not available at this level");
    }
}

// Every representation in the tower is kept canonical by construction
// (reduced, monic denominator); normalize is the identity made explicit.
template <class D>
D normalize(const D& x) {
    return x;
}

inline bool y_free(const RatFunc&) { return true; }
inline bool y_free(const YFunc& x) { return x.num().is_constant() && x.den().is_constant(); }

inline bool is_y_atom(const YFunc& x) {
    return x.den() == YPoly(RatFunc(1)) && x.num() == YPoly::variable();
}
template <class K>
bool is_y_atom(const RationalFunction<K>& x) {
    return x.den() == Polynomial<K>(K(1)) && x.num() == Polynomial<K>::variable();
}

// Is the element a rational constant, and if so which one.
inline bool is_rat_const(const RatFunc& x) { return x.is_constant() && x.num().is_constant(); }
inline bool is_rat_const(const YFunc& x) { return y_free(x) && is_rat_const(x.num().coeff(0)); }
inline Rat as_rat(const RatFunc& x) { return x.num().coeff(0); }
inline Rat as_rat(const YFunc& x) { return as_rat(x.num().coeff(0)); }

// ---- substitution homomorphisms --------------------------------------------

inline RatFunc substitute(const RatFunc& x, const RatFunc& t_img) {
    auto lift = [](const Rat& c) { return RatFunc(c); };
    RatFunc n = x.num().eval(t_img, lift);
    RatFunc d = x.den().eval(t_img, lift);
    if (d.is_zero()) throw DivisionByZero("substitution maps a denominator to zero");
    return n / d;
}

inline YFunc substitute(const YFunc& x, const RatFunc& t_img, const YFunc& y_img) {
    auto lift = [&](const RatFunc& c) { return YFunc(substitute(c, t_img)); };
    YFunc n = x.num().eval(y_img, lift);
    YFunc d = x.den().eval(y_img, lift);
    if (d.is_zero()) throw DivisionByZero("substitution maps a denominator to zero");
    return n / d;
}

// Reduced levels carry one variable (the Y slot); t is inert there, so only
// the identity t image is meaningful.
template <class K>
RationalFunction<K> substitute(const RationalFunction<K>& x, const RatFunc& t_img,
                               const RationalFunction<K>& y_img) {
    if (!(t_img == t_ratfunc()))
        throw UnsupportedConstruction("reduced level cannot move t");
    auto lift = [](const K& c) { return RationalFunction<K>(c); };
    RationalFunction<K> n = x.num().eval(y_img, lift);
    RationalFunction<K> d = x.den().eval(y_img, lift);
    if (d.is_zero()) throw DivisionByZero("substitution maps a denominator to zero");
    return n / d;
}

// Endomorphism descriptor: where the tower generators go.
template <class D>
struct EndoImages {
    RatFunc t_img = t_ratfunc();
    std::optional<D> y_img;  // required at the two-variable level

    bool is_identity() const {
        if (!(t_img == t_ratfunc())) return false;
        if constexpr (std::is_same_v<D, RatFunc>) {
            return true;
        } else {
            return y_img && is_y_atom(*y_img);
        }
    }
};

template <class D>
D apply_images(const D& x, const EndoImages<D>& im) {
    if constexpr (std::is_same_v<D, RatFunc>) {
        return substitute(x, im.t_img);
    } else {
        if (!im.y_img) throw AlgebraError("missing Y image in endomorphism descriptor");
        return substitute(x, im.t_img, *im.y_img);
    }
}

// ---- rational specialization ------------------------------------------------

inline Rat evaluate_at(const RatFunc& f, const Rat& x) {
    Rat d = evaluate_at(f.den(), x);
    if (is_zero(d)) throw DivisionByZero("specialization point is a pole");
    return evaluate_at(f.num(), x) / d;
}

// Fixes t at a rational point, leaving Y as the one remaining fraction
// variable. Where every denominator involved stays nonzero this is a ring
// homomorphism Q(t)(Y) -> Q(Y), and in particular Q-linear.
inline RatFunc specialize_t(const YFunc& f, const Rat& tau) {
    auto drop = [&](const YPoly& p) {
        std::vector<Rat> c;
        c.reserve(static_cast<std::size_t>(p.degree()) + 1);
        for (int j = 0; j <= p.degree(); ++j) c.push_back(evaluate_at(p.coeff(j), tau));
        return QPoly::from_coeffs(std::move(c));
    };
    QPoly den = drop(f.den());
    if (den.is_zero()) throw DivisionByZero("specialization point is a pole");
    return RatFunc(drop(f.num()), std::move(den));
}

// ---- denominator clearing / coefficient vectors ----------------------------

inline std::map<int, Rat> coefficient_vector(const RatFunc& x, const QPoly& clearer) {
    if (clearer.is_zero() || !divides(x.den(), clearer))
        throw NotCleared("clearer is not a multiple of the denominator");
    QPoly p = x.num() * exact_div(clearer, x.den());
    std::map<int, Rat> out;
    for (int i = 0; i <= p.degree(); ++i)
        if (!kf_is_zero(p.coeff(i))) out[i] = p.coeff(i);
    return out;
}

// Keys are (Y-degree, t-degree).
inline std::map<std::pair<int, int>, Rat> coefficient_vector(const YFunc& x, const YPoly& y_clearer,
                                                             const QPoly& t_clearer) {
    if (y_clearer.is_zero() || !divides(x.den(), y_clearer))
        throw NotCleared("Y clearer is not a multiple of the denominator");
    YPoly p = x.num() * exact_div(y_clearer, x.den());
    std::map<std::pair<int, int>, Rat> out;
    for (int j = 0; j <= p.degree(); ++j) {
        RatFunc c = p.coeff(j);
        if (c.is_zero()) continue;
        for (auto& [i, v] : coefficient_vector(c, t_clearer)) out[{j, i}] = v;
    }
    return out;
}

// ---- printing ---------------------------------------------------------------

namespace detail {

inline std::pair<std::string, bool> rat_coeff_text(const Rat& c) {
    bool neg = sgn(c) < 0;
    Rat a = neg ? Rat(-c) : c;
    return {a.get_str(), neg};
}

}  // namespace detail

inline std::string to_string(const QPoly& p, const std::string& var = "t") {
    return poly_to_string(p, var, detail::rat_coeff_text);
}

inline std::string to_string(const RatFunc& x, const std::string& var = "t") {
    if (x.den() == QPoly(Rat(1))) return to_string(x.num(), var);
    return "(" + to_string(x.num(), var) + ")/(" + to_string(x.den(), var) + ")";
}

inline std::string to_string(const YPoly& p, const std::string& yvar = "Y",
                             const std::string& tvar = "t") {
    auto cp = [&](const RatFunc& c) -> std::pair<std::string, bool> {
        if (is_rat_const(c)) return detail::rat_coeff_text(as_rat(c));
        if (c.den() == QPoly(Rat(1)) && [&] {
                int nterms = 0;
                for (const Rat& q : c.num().coeffs())
                    if (sgn(q) != 0) ++nterms;
                return nterms == 1;
            }()) {
            // single monomial coefficient reads fine without parentheses
            int d = c.num().degree();
            auto [text, neg] = detail::rat_coeff_text(c.num().leading());
            std::string tp = (d == 1) ? tvar : tvar + "^" + std::to_string(d);
            return {text == "1" ? tp : text + "*" + tp, neg};
        }
        return {"(" + to_string(c, tvar) + ")", false};
    };
    return poly_to_string(p, yvar, cp);
}

inline std::string to_string(const YFunc& x, const std::string& yvar = "Y",
                             const std::string& tvar = "t") {
    if (x.den() == YPoly(RatFunc(1))) return to_string(x.num(), yvar, tvar);
    return "(" + to_string(x.num(), yvar, tvar) + ")/(" + to_string(x.den(), yvar, tvar) + ")";
}

// ---- randomized elements for property tests --------------------------------

inline RatFunc random_ratfunc(std::mt19937_64& rng, int maxdeg = 3, long bound = 9) {
    QPoly num = random_poly(rng, maxdeg, bound);
    QPoly den;
    do {
        den = random_poly(rng, maxdeg, bound);
    } while (den.is_zero());
    return RatFunc(num, den);
}

inline YFunc random_yfunc(std::mt19937_64& rng, int maxdeg = 2, long bound = 5) {
    auto rand_ypoly = [&](bool nonzero) {
        std::uniform_int_distribution<int> degd(0, maxdeg);
        for (;;) {
            int d = degd(rng);
            std::vector<RatFunc> c;
            c.reserve(static_cast<std::size_t>(d) + 1);
            std::uniform_int_distribution<int> zero_coin(0, 2);
            for (int i = 0; i <= d; ++i)
                c.push_back(zero_coin(rng) == 0 ? RatFunc(0) : random_ratfunc(rng, 1, bound));
            YPoly p = YPoly::from_coeffs(std::move(c));
            if (!nonzero || !p.is_zero()) return p;
        }
    };
    return YFunc(rand_ypoly(false), rand_ypoly(true));
}

template <class D>
D random_elem(std::mt19937_64& rng) {
    if constexpr (std::is_same_v<D, RatFunc>) {
        return random_ratfunc(rng);
    } else if constexpr (std::is_same_v<D, YFunc>) {
        return random_yfunc(rng);
    } else {
        using P = typename D::poly_type;
        using K = typename D::coeff_type;
        std::uniform_int_distribution<long> pick(-9, 9);
        auto rand_poly = [&](bool nonzero) {
            for (;;) {
                P p = P::from_coeffs({K(pick(rng)), K(pick(rng)), K(pick(rng))});
                if (!nonzero || !p.is_zero()) return p;
            }
        };
        return D(rand_poly(false), rand_poly(true));
    }
}

}  // namespace skewfree
