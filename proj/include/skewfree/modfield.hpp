#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "skewfree/certifier.hpp"
#include "skewfree/expr.hpp"
#include "skewfree/linalg.hpp"

namespace skewfree {

// Prime field with a compile-time modulus, usable as the coefficient field K
// of Polynomial<K> / RationalFunction<K>. The reduction pipeline works with
// two fixed 62-bit primes rather than random ones: rank can only drop under
// a reduction, so a full-rank observation is a certificate for any modulus,
// and the retry room a collision needs comes from varying the evaluation
// point and switching to the second prime.
template <std::uint64_t P>
class Fp {
    static_assert(P >= 3 && (P >> 62) == 0, "modulus must be an odd prime below 2^62");

  public:
    Fp() = default;
    Fp(long n) {
        long long r = static_cast<long long>(n) % static_cast<long long>(P);
        if (r < 0) r += static_cast<long long>(P);
        v_ = static_cast<std::uint64_t>(r);
    }

    static Fp from_raw(std::uint64_t r) {
        Fp x;
        x.v_ = r % P;
        return x;
    }

    // The image of an exact rational; defined unless P divides the denominator.
    static Fp from_rational(const Rat& r) {
        std::uint64_t dn = detail::mpz_mod_u64(r.get_den(), P);
        if (dn == 0) throw DivisionByZero("denominator vanishes modulo the prime");
        std::uint64_t nm = detail::mpz_mod_u64(r.get_num(), P);
        return from_raw(detail::mulmod_u64(nm, detail::invmod_u64(dn, P), P));
    }

    std::uint64_t raw() const { return v_; }
    bool is_zero() const { return v_ == 0; }

    Fp inverse() const {
        if (v_ == 0) throw DivisionByZero("inverse of zero in the prime field");
        return from_raw(detail::invmod_u64(v_, P));
    }

    Fp pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        return from_raw(detail::powmod_u64(v_, static_cast<std::uint64_t>(e), P));
    }

    Fp operator-() const {
        Fp r;
        r.v_ = v_ == 0 ? 0 : P - v_;
        return r;
    }
    friend Fp operator+(Fp a, Fp b) {
        Fp r;
        r.v_ = a.v_ + b.v_;  // < 2^63, no overflow
        if (r.v_ >= P) r.v_ -= P;
        return r;
    }
    friend Fp operator-(Fp a, Fp b) { return a + (-b); }
    friend Fp operator*(Fp a, Fp b) {
        Fp r;
        r.v_ = detail::mulmod_u64(a.v_, b.v_, P);
        return r;
    }
    friend Fp operator/(Fp a, Fp b) { return a * b.inverse(); }
    friend bool operator==(Fp a, Fp b) { return a.v_ == b.v_; }
    friend bool operator!=(Fp a, Fp b) { return a.v_ != b.v_; }

  private:
    std::uint64_t v_ = 0;
};

template <std::uint64_t P>
using FpPoly = Polynomial<Fp<P>>;
template <std::uint64_t P>
using FpFunc = RationalFunction<Fp<P>>;

// 2^61 - 1 and the next prime above 2^61.
inline constexpr std::uint64_t reduction_primes[2] = {2305843009213693951ull,
                                                      2305843009213693967ull};

template <std::uint64_t P>
std::string to_string(const Fp<P>& c) {
    return std::to_string(c.raw());
}

template <std::uint64_t P>
std::string to_string(const FpPoly<P>& p, const std::string& var = "Y") {
    return poly_to_string(p, var, [](const Fp<P>& c) {
        return std::pair<std::string, bool>(std::to_string(c.raw()), false);
    });
}

template <std::uint64_t P>
std::string to_string(const FpFunc<P>& x, const std::string& var = "Y") {
    if (x.den() == FpPoly<P>(Fp<P>(1))) return to_string(x.num(), var);
    return "(" + to_string(x.num(), var) + ")/(" + to_string(x.den(), var) + ")";
}

// ---- reduction maps ---------------------------------------------------------
//
// The partial ring homomorphism Q(t)(Y) -> F_P(Y) that sends t to a fixed
// residue and keeps Y as the fraction variable. Partial: it throws where a
// denominator (of a rational number or of a t-fraction) dies modulo P, and
// the caller retries at another evaluation point or prime. Where defined it
// commutes with +, *, and the Y-twist, which is what the transfer arguments
// in the reduced certifier rely on.

template <std::uint64_t P>
Fp<P> reduce_ratfunc_at(const RatFunc& f, std::uint64_t tau) {
    const Fp<P> tp = Fp<P>::from_raw(tau);
    auto eval_poly = [&](const QPoly& p) {
        Fp<P> acc(0);
        for (int i = p.degree(); i >= 0; --i) acc = acc * tp + Fp<P>::from_rational(p.coeff(i));
        return acc;
    };
    Fp<P> den = eval_poly(f.den());
    if (den.is_zero()) throw DivisionByZero("evaluation point is a pole modulo the prime");
    return eval_poly(f.num()) / den;
}

template <std::uint64_t P>
FpFunc<P> reduce_yfunc_at(const YFunc& f, std::uint64_t tau) {
    auto drop = [&](const YPoly& p) {
        std::vector<Fp<P>> c;
        c.reserve(p.coeffs().size());
        for (const RatFunc& q : p.coeffs()) c.push_back(reduce_ratfunc_at<P>(q, tau));
        return FpPoly<P>::from_coeffs(std::move(c));
    };
    FpPoly<P> den = drop(f.den());
    if (den.is_zero()) throw DivisionByZero("evaluation point is a pole modulo the prime");
    return FpFunc<P>(drop(f.num()), std::move(den));
}

// Shape-preserving image of an expression tree, so that an inversion trace
// recorded on the exact side replays against the reduced evaluation.
template <std::uint64_t P>
ExprPtr<FpFunc<P>> reduce_expr_at(const ExprPtr<YFunc>& e, std::uint64_t tau) {
    return map_expr<FpFunc<P>>(e, [&](const YFunc& v) { return reduce_yfunc_at<P>(v, tau); });
}

// Image of a twist-only two-variable context: sigma keeps acting on the Y
// slot, with its t-coefficients evaluated. make_context revalidates the
// reduced data, so an evaluation point that breaks mutual inversion is
// rejected there.
template <std::uint64_t P>
ContextPtr<FpFunc<P>> reduce_context_at(const SkewContext<YFunc>& ctx, std::uint64_t tau,
                                        int order) {
    if (!ctx.delta_zero) throw UnsupportedConstruction("reduction needs a twist-only context");
    if (!(ctx.sigma.t_img == t_ratfunc()))
        throw UnsupportedConstruction("reduction needs sigma to fix t");
    EndoImages<FpFunc<P>> s{t_ratfunc(), reduce_yfunc_at<P>(*ctx.sigma.y_img, tau)};
    EndoImages<FpFunc<P>> si{t_ratfunc(), reduce_yfunc_at<P>(*ctx.sigma_inv.y_img, tau)};
    return make_context<FpFunc<P>>(std::move(s), std::move(si), FpFunc<P>(0), FpFunc<P>(0), order,
                                   ctx.direction, "Y");
}

// Freeness certification on reduced generator series. Words are built as in
// certify_freeness; the rank runs over F_P directly. Soundness transfers to
// the exact generators: a rational dependency among the exact words scales
// to a primitive integer one, survives the (everywhere-defined on the words)
// reduction with some coefficient nonzero mod P, and per-degree denominator
// clearing is injective, so full row rank here proves the exact words
// independent over Q. A rank deficit stays one-sided as always, and carries
// no witness: a combination mod P need not lift.
template <std::uint64_t P>
FreenessReport certify_freeness_reduced(const std::vector<TruncSeries<FpFunc<P>>>& gens,
                                        int max_len) {
    if (gens.empty()) throw BadParams("no generators to certify");
    const ContextPtr<FpFunc<P>>& ctx = gens[0].context();

    std::vector<TruncSeries<FpFunc<P>>> words{TruncSeries<FpFunc<P>>::one(ctx)};
    std::size_t level_begin = 0;
    for (int len = 1; len <= max_len; ++len) {
        const std::size_t level_end = words.size();
        for (std::size_t w = level_begin; w < level_end; ++w)
            for (const auto& g : gens) words.push_back(words[w] * g);
        level_begin = level_end;
    }

    FreenessReport rep;
    rep.word_count = words.size();
    rep.max_word_length = max_len;
    rep.truncation_order = ctx->order;

    std::map<int, FpPoly<P>> lcd;
    for (const auto& w : words)
        for (const auto& [d, c] : w.coeffs()) {
            auto [it, fresh] = lcd.emplace(d, c.den());
            if (!fresh) it->second = poly_lcm(it->second, c.den());
        }

    std::vector<std::map<int, FpPoly<P>>> cleared(words.size());
    std::map<int, int> width;
    for (std::size_t i = 0; i < words.size(); ++i)
        for (const auto& [d, c] : words[i].coeffs()) {
            FpPoly<P> p = c.num() * exact_div(lcd.at(d), c.den());
            int& wd = width[d];
            wd = std::max(wd, p.degree() + 1);
            cleared[i].emplace(d, std::move(p));
        }
    std::map<int, std::size_t> offset;
    std::size_t ncols = 0;
    for (const auto& [d, wd] : width) {
        offset[d] = ncols;
        ncols += static_cast<std::size_t>(wd);
    }
    rep.matrix_rows = words.size();
    rep.matrix_cols = ncols;

    detail::ModRowReducer red(P);
    for (auto& cm : cleared) {
        std::vector<std::uint64_t> row(ncols, 0);
        for (auto& [d, p] : cm)
            for (int i = 0; i <= p.degree(); ++i)
                row[offset.at(d) + static_cast<std::size_t>(i)] = p.coeff(i).raw();
        red.feed(std::move(row));
    }
    rep.rank = red.rank();
    rep.certified = rep.rank == rep.word_count;
    return rep;
}

}  // namespace skewfree
