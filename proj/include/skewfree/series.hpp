#pragma once

#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "skewfree/context.hpp"

namespace skewfree {

// Log of the inversion base degrees of successive skew_inv calls. A run on
// exact coefficients records them; a rerun of the same expression tree over
// reduced coefficients replays the log and must see the same degrees. A
// mismatch means a leading coefficient vanished under the reduction, which
// would silently move the inversion base and decouple the rerun from the
// exact one, so the replay throws and the caller moves to a different
// reduction point.
struct InvTopTrace {
    std::vector<int> tops;
    std::size_t at = 0;
    bool recording = true;
};

template <class D>
class TruncSeries;
template <class D>
TruncSeries<D> skew_mul(const TruncSeries<D>& a, const TruncSeries<D>& b);
template <class D>
TruncSeries<D> skew_inv(const TruncSeries<D>& a, InvTopTrace* trace = nullptr);

// Truncated skew Laurent series sum_d c_d X^d over a shared SkewContext.
// Descending contexts keep degrees in [-order, +inf), ascending ones in
// (-inf, +order]; coefficients that fall outside are dropped on insertion,
// so every arithmetic result is already truncated. The map holds no zeros.
template <class D>
class TruncSeries {
  public:
    TruncSeries() = default;
    explicit TruncSeries(ContextPtr<D> ctx) : ctx_(std::move(ctx)) {}

    static TruncSeries zero(ContextPtr<D> ctx) { return TruncSeries(std::move(ctx)); }

    static TruncSeries from_scalar(ContextPtr<D> ctx, const D& c) {
        TruncSeries s(std::move(ctx));
        s.set(0, c);
        return s;
    }

    static TruncSeries one(ContextPtr<D> ctx) { return from_scalar(std::move(ctx), D(1)); }

    // c * X^k as a series.
    static TruncSeries monomial(ContextPtr<D> ctx, const D& c, int k) {
        TruncSeries s(std::move(ctx));
        s.set(k, c);
        return s;
    }

    static TruncSeries x_power(ContextPtr<D> ctx, int k) {
        return monomial(std::move(ctx), D(1), k);
    }

    const ContextPtr<D>& context() const { return ctx_; }
    const std::map<int, D>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }

    D coeff(int d) const {
        auto it = c_.find(d);
        return it == c_.end() ? D(0) : it->second;
    }

    // Degree of the leading term in the module's ordering: the highest
    // X-power present (series are finite maps, so this always exists).
    int max_degree() const {
        if (c_.empty()) throw AlgebraError("degree of zero series");
        return c_.rbegin()->first;
    }
    int min_degree() const {
        if (c_.empty()) throw AlgebraError("degree of zero series");
        return c_.begin()->first;
    }

    // Inserts (adds) a coefficient, enforcing the truncation window.
    void add_to(int d, const D& c) {
        if (c.is_zero() || !in_window(d)) return;
        auto it = c_.find(d);
        if (it == c_.end()) {
            c_.emplace(d, c);
        } else {
            it->second = it->second + c;
            if (it->second.is_zero()) c_.erase(it);
        }
    }

    void set(int d, const D& c) {
        c_.erase(d);
        add_to(d, c);
    }

    TruncSeries operator-() const {
        TruncSeries r(ctx_);
        for (const auto& [d, c] : c_) r.c_.emplace(d, -c);
        return r;
    }

    friend TruncSeries operator+(const TruncSeries& a, const TruncSeries& b) {
        same_context(a, b);
        TruncSeries r = a;
        for (const auto& [d, c] : b.c_) r.add_to(d, c);
        return r;
    }

    friend TruncSeries operator-(const TruncSeries& a, const TruncSeries& b) {
        same_context(a, b);
        TruncSeries r = a;
        for (const auto& [d, c] : b.c_) r.add_to(d, -c);
        return r;
    }

    // Left multiplication by a coefficient: c * sum u_d X^d = sum (c u_d) X^d.
    // (Right multiplication by a scalar goes through skew_mul.)
    friend TruncSeries operator*(const D& c, const TruncSeries& a) {
        TruncSeries r(a.ctx_);
        if (c.is_zero()) return r;
        for (const auto& [d, u] : a.c_) r.add_to(d, c * u);
        return r;
    }

    friend TruncSeries operator*(const TruncSeries& a, const TruncSeries& b) {
        return skew_mul(a, b);
    }

    friend bool operator==(const TruncSeries& a, const TruncSeries& b) {
        same_context(a, b);
        return a.c_ == b.c_;
    }
    friend bool operator!=(const TruncSeries& a, const TruncSeries& b) { return !(a == b); }

    static void same_context(const TruncSeries& a, const TruncSeries& b) {
        if (a.ctx_.get() != b.ctx_.get())
            throw ContextMismatch("series belong to different contexts");
    }

  private:
    ContextPtr<D> ctx_;
    std::map<int, D> c_;

    bool in_window(int d) const {
        if (ctx_->direction == SeriesDirection::DescendingX) return d >= -ctx_->order;
        return d <= ctx_->order;
    }
};

namespace detail {

// X^d * c as a series, for sigma = id (Weyl-type contexts):
//   d >= 0:  X^d c = sum_{i=0..d}  C(d,i)            delta^i(c) X^{d-i}
//   d  < 0:  X^d c = sum_{i>=0}  (-1)^i C(-d-1+i, i) delta^i(c) X^{d-i}
// dtab caches delta powers of c; it is extended on demand.
inline Rat binom(long n, long i) {
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(i));
    return Rat(b);
}

template <class D>
void extend_delta_table(const SkewContext<D>& ctx, std::vector<D>& dtab, size_t upto) {
    while (dtab.size() <= upto) {
        if (dtab.back().is_zero()) {
            dtab.push_back(D(0));
        } else {
            dtab.push_back(ctx.apply_delta(dtab.back()));
        }
    }
}

}  // namespace detail

template <class D>
TruncSeries<D> skew_mul(const TruncSeries<D>& a, const TruncSeries<D>& b) {
    TruncSeries<D>::same_context(a, b);
    const ContextPtr<D>& ctx = a.context();
    TruncSeries<D> r(ctx);
    if (a.is_zero() || b.is_zero()) return r;

    if (ctx->delta_zero) {
        // X^d c = sigma^d(c) X^d. Walk a's degrees in order and keep a copy
        // of b's coefficients twisted by sigma^d, advancing it incrementally.
        long cur = 0;
        std::vector<std::pair<int, D>> twisted(b.coeffs().begin(), b.coeffs().end());
        for (const auto& [d, u] : a.coeffs()) {
            while (cur < d) {
                for (auto& [f, w] : twisted) w = ctx->apply_sigma(w);
                ++cur;
            }
            while (cur > d) {
                for (auto& [f, w] : twisted) w = ctx->apply_sigma_inv(w);
                --cur;
            }
            for (const auto& [f, w] : twisted) r.add_to(d + f, u * w);
        }
        return r;
    }

    if (ctx->sigma_identity) {
        const int lo = -ctx->order;
        for (const auto& [f, w] : b.coeffs()) {
            std::vector<D> dtab{w};
            for (const auto& [d, u] : a.coeffs()) {
                long imax = d >= 0 ? d : static_cast<long>(d) + f - lo;
                for (long i = 0; i <= imax; ++i) {
                    detail::extend_delta_table(*ctx, dtab, static_cast<size_t>(i));
                    const D& dw = dtab[static_cast<size_t>(i)];
                    if (dw.is_zero()) break;  // delta powers stay zero from here on
                    Rat cf = d >= 0 ? detail::binom(d, i)
                                    : ((i % 2 == 0) ? detail::binom(-d - 1 + i, i)
                                                    : -detail::binom(-d - 1 + i, i));
                    r.add_to(d + f - static_cast<int>(i), u * (from_rat<D>(cf) * dw));
                }
            }
        }
        return r;
    }

    // Generic case (sigma != id and delta != 0): build X^d * b for each degree
    // d in a's support by repeated one-step shifts.
    //   X   * (w X^f) = sigma(w) X^{f+1} + delta(w) X^f
    //   X^-1* (w X^f) = sum_{k>=1} (-1)^{k-1} sigma^{-1}(T^{k-1}(w)) X^{f-k},
    // with T = delta o sigma^{-1}; the sum is truncated at the window edge.
    {
        long cur = 0;
        TruncSeries<D> shifted = b;
        auto step_up = [&](TruncSeries<D>& s) {
            TruncSeries<D> n(ctx);
            for (const auto& [f, w] : s.coeffs()) {
                n.add_to(f + 1, ctx->apply_sigma(w));
                n.add_to(f, ctx->apply_delta(w));
            }
            s = std::move(n);
        };
        auto step_down = [&](TruncSeries<D>& s) {
            TruncSeries<D> n(ctx);
            for (const auto& [f, w] : s.coeffs()) {
                D v = w;
                for (int k = 1; f - k >= -ctx->order; ++k) {
                    D term = ctx->apply_sigma_inv(v);
                    if (k % 2 == 0) term = -term;
                    n.add_to(f - k, term);
                    v = ctx->apply_delta(ctx->apply_sigma_inv(v));
                    if (v.is_zero()) break;
                }
            }
            s = std::move(n);
        };
        for (const auto& [d, u] : a.coeffs()) {
            while (cur < d) {
                step_up(shifted);
                ++cur;
            }
            while (cur > d) {
                step_down(shifted);
                --cur;
            }
            for (const auto& [f, w] : shifted.coeffs()) r.add_to(d + f, u * w);
        }
        return r;
    }
}

// Two-sided inverse of a unit, computed by back-substitution against the
// leading term: if a = c_m X^m + lower, the correction w X^{d-m} with
// w = sigma^{-m}(c_m^{-1} r_d) cancels the top residual term r_d X^d.
// Iterating until the residual falls out of the truncation window yields v
// with a v = 1 (and v a = 1) up to truncation.
template <class D>
TruncSeries<D> skew_inv(const TruncSeries<D>& a, InvTopTrace* trace) {
    if (a.is_zero()) throw DivisionByZero("inverse of the zero series");
    const ContextPtr<D>& ctx = a.context();
    const bool desc = ctx->direction == SeriesDirection::DescendingX;
    const int m = desc ? a.max_degree() : a.min_degree();
    if (trace) {
        if (trace->recording) {
            trace->tops.push_back(m);
        } else if (trace->at >= trace->tops.size() || trace->tops[trace->at++] != m) {
            throw DivisionByZero("leading coefficient vanished under reduction");
        }
    }
    const D lead_inv = a.coeff(m).inverse();

    TruncSeries<D> v(ctx);
    TruncSeries<D> residual = TruncSeries<D>::one(ctx);
    while (!residual.is_zero()) {
        const int d = desc ? residual.max_degree() : residual.min_degree();
        const int e = d - m;
        if (desc ? (e < -ctx->order) : (e > ctx->order)) break;
        D w = ctx->apply_sigma_pow(lead_inv * residual.coeff(d), -m);
        TruncSeries<D> corr = TruncSeries<D>::monomial(ctx, w, e);
        v = v + corr;
        residual = residual - skew_mul(a, corr);
    }
    return v;
}

template <class D>
std::string to_string(const TruncSeries<D>& s) {
    if (s.is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    // Highest degree first: that is the natural reading order here.
    for (auto it = s.coeffs().rbegin(); it != s.coeffs().rend(); ++it) {
        if (!first) out << " + ";
        first = false;
        out << "(" << to_string(it->second) << ")";
        if (it->first != 0) out << "*X^" << it->first;
    }
    return out.str();
}

}  // namespace skewfree
