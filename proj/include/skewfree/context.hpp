#pragma once

#include <memory>
#include <random>
#include <string>
#include <type_traits>
#include <vector>

#include "skewfree/tower.hpp"

namespace skewfree {

// Which completion the series live in: descending keeps degrees in
// [-order, +inf), ascending (only legal when delta = 0) keeps (-inf, +order].
enum class SeriesDirection { DescendingX, AscendingX };

// The twisted polynomial data: X * c = sigma(c) * X + delta(c). sigma must be
// an automorphism (its inverse is part of the descriptor), delta a
// sigma-derivation. Everything downstream (series, expressions, the
// certifier) carries a shared immutable context.
template <class D>
class SkewContext {
  public:
    EndoImages<D> sigma;
    EndoImages<D> sigma_inv;
    D delta_t = D(0);
    D delta_y = D(0);  // ignored at the one-variable level
    int order = 16;    // truncation window size N
    SeriesDirection direction = SeriesDirection::DescendingX;
    std::string tvar = "t";

    bool sigma_identity = true;
    bool delta_zero = true;

    D apply_sigma(const D& x) const { return sigma_identity ? x : apply_images(x, sigma); }
    D apply_sigma_inv(const D& x) const { return sigma_identity ? x : apply_images(x, sigma_inv); }

    D apply_sigma_pow(const D& x, long k) const {
        if (sigma_identity || k == 0) return x;
        D acc = x;
        const EndoImages<D>& im = (k > 0) ? sigma : sigma_inv;
        for (long i = 0; i < (k > 0 ? k : -k); ++i) acc = apply_images(acc, im);
        return acc;
    }

    D apply_delta(const D& x) const {
        if (delta_zero) return D(0);
        if constexpr (std::is_same_v<D, RatFunc>) {
            if (sigma_identity) return delta_t * x.derivative();
            return delta_fraction(x.num(), x.den());
        } else if constexpr (std::is_same_v<D, YFunc>) {
            if (sigma_identity && !y_involved()) {
                // delta acts through t only and sigma is the identity there.
                YFunc dt = delta_t;
                return dt * formal_t_derivative(x);
            }
            return delta_fraction(x.num(), x.den());
        } else {
            throw UnsupportedConstruction("reduced levels carry no derivation");
        }
    }

  private:
    bool y_involved() const {
        if constexpr (std::is_same_v<D, YFunc>) return !delta_y.is_zero();
        return false;
    }

    static YFunc formal_t_derivative(const YFunc& x) {
        auto dnum = [](const YPoly& p) {
            std::vector<RatFunc> c;
            c.reserve(p.coeffs().size());
            for (const RatFunc& q : p.coeffs()) c.push_back(q.derivative());
            return YPoly::from_coeffs(std::move(c));
        };
        YFunc n(dnum(x.num()));
        YFunc d(dnum(x.den()));
        YFunc fd(x.den());
        return (n - x * d) / fd;
    }

    // delta on a quotient via the sigma-derivation quotient rule:
    // delta(p/q) = (delta(p) - sigma(p/q) * delta(q)) / q.
    template <class P>
    D delta_fraction(const P& num, const P& den) const {
        D dn = delta_poly(num);
        D dd = delta_poly(den);
        D frac = make_fraction(num, den);
        D q = lift_poly(den);
        return (dn - apply_sigma(frac) * dd) / q;
    }

    D delta_poly(const QPoly& p) const {
        // delta(t^i) = sigma(t) delta(t^{i-1}) + delta(t) t^{i-1}
        D sig_t = lift_t(sigma.t_img);
        D acc(0);
        D tpow_prev(0);  // delta(t^i), built up
        D tpow(1);       // t^{i-1} embedded
        D t = t_elem<D>();
        for (int i = 1; i <= p.degree(); ++i) {
            tpow_prev = sig_t * tpow_prev + delta_t * tpow;
            tpow = tpow * t;
            Rat a = p.coeff(i);
            if (!kf_is_zero(a)) acc = acc + from_rat<D>(a) * tpow_prev;
        }
        return acc;
    }

    D delta_poly(const YPoly& p) const {
        if constexpr (std::is_same_v<D, YFunc>) {
            D sig_y = *sigma.y_img;
            D acc(0);
            D ypow_prev(0);  // delta(Y^j) at the top of iteration j
            D ypow(1);       // Y^j at the top of iteration j
            D y = y_elem<D>();
            for (int j = 0; j <= p.degree(); ++j) {
                const RatFunc& c = p.coeff(j);
                if (!c.is_zero()) {
                    D dc = delta_fraction(c.num(), c.den());
                    D cj(c);
                    acc = acc + apply_sigma(cj) * ypow_prev + dc * ypow;
                }
                ypow_prev = sig_y * ypow_prev + delta_y * ypow;
                ypow = ypow * y;
            }
            return acc;
        } else {
            throw AlgebraError("unreachable");
        }
    }

    static D lift_poly(const QPoly& p) { return D(RationalFunction<Rat>(p)); }
    static D lift_poly(const YPoly& p) {
        if constexpr (std::is_same_v<D, YFunc>) return YFunc(p);
        throw AlgebraError("unreachable");
    }
    static D lift_t(const RatFunc& x) {
        if constexpr (std::is_same_v<D, RatFunc>) return x;
        return D(x);
    }
    static D make_fraction(const QPoly& n, const QPoly& d) { return D(RatFunc(n, d)); }
    static D make_fraction(const YPoly& n, const YPoly& d) {
        if constexpr (std::is_same_v<D, YFunc>) return YFunc(n, d);
        throw AlgebraError("unreachable");
    }
};

template <class D>
using ContextPtr = std::shared_ptr<const SkewContext<D>>;

// Builds and validates a context. Checks: the truncation order is positive,
// ascending mode only with delta = 0, sigma and sigmaInverse invert each
// other on the tower generators, and the sigma-derivation law
// delta(u v) = sigma(u) delta(v) + delta(u) v on 100 random pairs.
template <class D>
ContextPtr<D> make_context(EndoImages<D> sigma, EndoImages<D> sigma_inv, D delta_t, D delta_y,
                           int order, SeriesDirection direction = SeriesDirection::DescendingX,
                           std::string tvar = "t") {
    auto ctx = std::make_shared<SkewContext<D>>();
    ctx->sigma = std::move(sigma);
    ctx->sigma_inv = std::move(sigma_inv);
    ctx->delta_t = std::move(delta_t);
    ctx->delta_y = std::move(delta_y);
    ctx->order = order;
    ctx->direction = direction;
    ctx->tvar = std::move(tvar);
    ctx->sigma_identity = ctx->sigma.is_identity() && ctx->sigma_inv.is_identity();
    ctx->delta_zero = ctx->delta_t.is_zero() && ctx->delta_y.is_zero();

    if (order < 1) throw BadParams("truncation order must be at least 1");
    if (direction == SeriesDirection::AscendingX && !ctx->delta_zero)
        throw BadParams("ascending series require delta = 0");
    if constexpr (std::is_same_v<D, YFunc>) {
        if (!ctx->sigma.y_img || !ctx->sigma_inv.y_img)
            throw BadParams("two-variable context needs Y images for sigma and its inverse");
    }

    // sigma and sigma_inv must be mutually inverse on generators.
    {
        D t = t_elem<D>();
        if (!(ctx->apply_sigma_inv(ctx->apply_sigma(t)) == t) ||
            !(ctx->apply_sigma(ctx->apply_sigma_inv(t)) == t))
            throw BadParams("sigmaInverse does not invert sigma on t");
        if constexpr (std::is_same_v<D, YFunc>) {
            D y = y_elem<D>();
            if (!(ctx->apply_sigma_inv(ctx->apply_sigma(y)) == y) ||
                !(ctx->apply_sigma(ctx->apply_sigma_inv(y)) == y))
                throw BadParams("sigmaInverse does not invert sigma on Y");
        }
    }

    if (!ctx->delta_zero) {
        std::mt19937_64 rng(0xD31A5EED);
        for (int i = 0; i < 100; ++i) {
            D u = random_elem<D>(rng);
            D v = random_elem<D>(rng);
            D lhs = ctx->apply_delta(u * v);
            D rhs = ctx->apply_sigma(u) * ctx->apply_delta(v) + ctx->apply_delta(u) * v;
            if (!(lhs == rhs)) throw BadParams("delta violates the sigma-derivation law");
        }
    }
    return ctx;
}

// The first Weyl algebra's division ring: sigma = id, delta(t) = 1.
inline ContextPtr<RatFunc> make_weyl_context(int order,
                                             SeriesDirection dir = SeriesDirection::DescendingX,
                                             std::string tvar = "t") {
    EndoImages<RatFunc> id{t_ratfunc(), std::nullopt};
    return make_context<RatFunc>(id, id, RatFunc(1), RatFunc(0), order, dir, std::move(tvar));
}

// One-variable twisted-coefficient context: sigma(t) = t_img, delta = 0.
inline ContextPtr<RatFunc> make_qt_twist_context(const RatFunc& t_img, const RatFunc& t_img_inv,
                                                 int order,
                                                 SeriesDirection dir = SeriesDirection::DescendingX,
                                                 std::string tvar = "t") {
    EndoImages<RatFunc> s{t_img, std::nullopt};
    EndoImages<RatFunc> si{t_img_inv, std::nullopt};
    return make_context<RatFunc>(s, si, RatFunc(0), RatFunc(0), order, dir, std::move(tvar));
}

// The Heisenberg division ring model: coefficients Q(t)(Y), sigma fixes t and
// sends Y to tY, delta = 0.
inline ContextPtr<YFunc> make_heisenberg_context(int order,
                                                 SeriesDirection dir = SeriesDirection::DescendingX) {
    YFunc t(t_ratfunc());
    YFunc y = y_yfunc();
    EndoImages<YFunc> s{t_ratfunc(), t * y};
    EndoImages<YFunc> si{t_ratfunc(), t.inverse() * y};
    return make_context<YFunc>(s, si, YFunc(0), YFunc(0), order, dir);
}

}  // namespace skewfree
