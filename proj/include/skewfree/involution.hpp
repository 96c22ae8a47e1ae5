#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "skewfree/expr.hpp"

namespace skewfree {

// A ring anti-automorphism of order two, described by generator images.
// X goes to an expression tree (it may map to X^-1, to a scalar multiple of
// X, or even to a coefficient like zeta*Y). t goes to a rational function
// under an automorphism of Q(t). Y, when present, goes either to a field
// value or, in the one construction that swaps the generators, to a tree
// containing X.
template <class D>
struct InvolutionSpec {
    ExprPtr<D> x_image;
    RatFunc t_image = t_ratfunc();
    std::optional<D> y_value_image;
    ExprPtr<D> y_tree_image;  // used only when y_value_image is absent
};

namespace detail {

// t-only substitution on a coefficient known to be Y-free.
inline RatFunc map_t_only(const RatFunc& d, const RatFunc& t_image) {
    return substitute(d, t_image);
}
inline YFunc map_t_only(const YFunc& d, const RatFunc& t_image) {
    // Canonical form: a Y-free element has denominator 1 in Y.
    return YFunc(substitute(d.num().coeff(0), t_image));
}

}  // namespace detail

template <class D>
ExprPtr<D> involute_scalar(const D& d, const InvolutionSpec<D>& spec) {
    if (y_free(d)) return ex_scalar(detail::map_t_only(d, spec.t_image));
    if constexpr (std::is_same_v<D, YFunc>) {
        if (spec.y_value_image) {
            return ex_scalar(substitute(d, spec.t_image, *spec.y_value_image));
        }
        if (!spec.y_tree_image) throw BadParams("involution lacks an image for Y");
        // Y maps out of the coefficient field, so apply the anti-automorphism
        // structurally: (c Y^j)* = (Y*)^j c*, and (n/m)* = (m*)^-1 n*.
        auto poly_image = [&](const YPoly& p) {
            std::vector<ExprPtr<D>> terms;
            for (int j = 0; j <= p.degree(); ++j) {
                const RatFunc& c = p.coeff(j);
                if (c.is_zero()) continue;
                D cimg = detail::map_t_only(YFunc(c), spec.t_image);
                if (j == 0) {
                    terms.push_back(ex_scalar(cimg));
                } else {
                    terms.push_back(ex_product<D>(
                        {ex_pow(spec.y_tree_image, j), ex_scalar(cimg)}));
                }
            }
            if (terms.empty()) return ex_scalar(D(0));
            return ex_sum(std::move(terms));
        };
        ExprPtr<D> num = poly_image(d.num());
        if (d.den() == YPoly(RatFunc(1))) return num;
        return ex_product<D>({ex_inv(poly_image(d.den())), num});
    } else {
        throw AlgebraError("unreachable");
    }
}

template <class D>
ExprPtr<D> involute(const ExprPtr<D>& e, const InvolutionSpec<D>& spec) {
    using K = Expr<D>::Kind;
    switch (e->kind) {
        case K::Scalar:
            return involute_scalar(e->value, spec);
        case K::X:
            return spec.x_image;
        case K::Sum: {
            std::vector<ExprPtr<D>> kids;
            kids.reserve(e->kids.size());
            for (const auto& k : e->kids) kids.push_back(involute(k, spec));
            return ex_sum(std::move(kids));
        }
        case K::Product: {
            std::vector<ExprPtr<D>> kids;
            kids.reserve(e->kids.size());
            for (auto it = e->kids.rbegin(); it != e->kids.rend(); ++it)
                kids.push_back(involute(*it, spec));
            return ex_product(std::move(kids));
        }
        case K::Negate:
            return ex_neg(involute(e->kids[0], spec));
        case K::Inverse:
            return ex_inv(involute(e->kids[0], spec));
        case K::IntPower:
            return ex_pow(involute(e->kids[0], spec), e->expo);
    }
    throw AlgebraError("unreachable expression kind");
}

// Validates that the images define an involution compatible with the skew
// structure, by evaluation at the context's truncation order:
//  - the square of the map fixes X, t (and Y when present);
//  - the defining relation X c = sigma(c) X + delta(c) maps to an identity,
//    which is exactly well-definedness of the anti-automorphism on samples.
template <class D>
void check_involution(const InvolutionSpec<D>& spec, const ContextPtr<D>& ctx,
                      int relation_samples = 8) {
    auto twice = [&](const ExprPtr<D>& e) { return involute(involute(e, spec), spec); };

    ExprPtr<D> x = ex_x<D>();
    if (!expr_equal(twice(x), x, ctx))
        throw BadParams("involution squared does not fix X");
    ExprPtr<D> t = ex_scalar(t_elem<D>());
    if (!expr_equal(twice(t), t, ctx))
        throw BadParams("involution squared does not fix t");
    if constexpr (std::is_same_v<D, YFunc>) {
        ExprPtr<D> y = ex_scalar(y_elem<D>());
        if (!expr_equal(twice(y), y, ctx))
            throw BadParams("involution squared does not fix Y");
    }

    std::mt19937_64 rng(0x1A5B0C4D);
    for (int i = 0; i < relation_samples; ++i) {
        D c = random_elem<D>(rng);
        ExprPtr<D> lhs = ex_product<D>({ex_x<D>(), ex_scalar(c)});
        ExprPtr<D> rhs = ex_sum<D>({ex_product<D>({ex_scalar(ctx->apply_sigma(c)), ex_x<D>()}),
                                    ex_scalar(ctx->apply_delta(c))});
        if (!expr_equal(involute(lhs, spec), involute(rhs, spec), ctx))
            throw BadParams("involution is not well-defined against the commutation rule");
    }
}

}  // namespace skewfree
