#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "skewfree/derivation.hpp"
#include "skewfree/involution.hpp"

namespace skewfree {

// Copies a series into another context, dropping coefficients outside the
// target window. Used to move results computed at a widened truncation order
// back to the working one, which makes them exact there.
template <class D>
TruncSeries<D> recontext(const TruncSeries<D>& s, const ContextPtr<D>& target) {
    TruncSeries<D> r(target);
    for (const auto& [d, c] : s.coeffs()) r.add_to(d, c);
    return r;
}

// Equality of truncations above a degree floor. Series multiplied or
// inverted near the window edge are only trustworthy above some floor, so
// identity checks compare there.
template <class D>
bool agree_above_floor(const TruncSeries<D>& a, const TruncSeries<D>& b, int floor) {
    TruncSeries<D>::same_context(a, b);
    for (const auto& [d, c] : a.coeffs())
        if (d >= floor && !(c == b.coeff(d))) return false;
    for (const auto& [d, c] : b.coeffs())
        if (d >= floor && !(c == a.coeff(d))) return false;
    return true;
}

namespace detail {

// Product that drops unit factors, keeping printed generators tidy.
template <class D>
ExprPtr<D> mul2(ExprPtr<D> a, ExprPtr<D> b) {
    if (is_scalar(a) && a->value == D(1)) return b;
    if (is_scalar(b) && b->value == D(1)) return a;
    return ex_product<D>({std::move(a), std::move(b)});
}

template <class D>
ExprPtr<D> degree_one_tree(const Rat& lin, const Rat& cst) {
    std::vector<ExprPtr<D>> terms;
    if (lin == 1) {
        terms.push_back(ex_x<D>());
    } else {
        terms.push_back(ex_product<D>({ex_scalar(from_rat<D>(lin)), ex_x<D>()}));
    }
    if (cst != 0) terms.push_back(ex_scalar(from_rat<D>(cst)));
    return ex_sum(std::move(terms));
}

}  // namespace detail

// Validates the defining parameters and assembles Xi = g f^-1 with
// f = a1 X + a0 and g = b1 X + b0 as an expression tree. Eligibility:
// either g is constant, or g is a multiple of X and delta = 0; in both
// shapes the left-multiplication recurrences below close over the words.
template <class D>
ExprPtr<D> xi_tree(const OreParams& pr, bool delta_is_zero) {
    if (pr.a1 == 0) throw BadParams("f must have X-degree one");
    if (pr.a0 * pr.b1 - pr.a1 * pr.b0 == 0)
        throw DegenerateXi("g is proportional to f, so Xi is a scalar");
    if (!(pr.b1 == 0 || (pr.b0 == 0 && delta_is_zero)))
        throw BadParams("parameters fit neither supported shape of Xi");
    ExprPtr<D> f = detail::degree_one_tree<D>(pr.a1, pr.a0);
    ExprPtr<D> g;
    if (pr.b1 == 0) {
        g = ex_scalar(from_rat<D>(pr.b0));
    } else {
        g = detail::degree_one_tree<D>(pr.b1, pr.b0);
    }
    return detail::mul2(std::move(g), ex_inv(std::move(f)));
}

// An endomorphism of the skew field given by generator images: X to a tree,
// coefficients through a field map that commutes with sigma and delta.
// Applied structurally; products keep their factor order.
template <class D>
ExprPtr<D> apply_twist(const ExprPtr<D>& e, const ExprPtr<D>& x_image,
                       const EndoImages<D>& scalar_map) {
    using K = Expr<D>::Kind;
    switch (e->kind) {
        case K::Scalar:
            return ex_scalar(apply_images(e->value, scalar_map));
        case K::X:
            return x_image;
        case K::Sum: {
            std::vector<ExprPtr<D>> kids;
            kids.reserve(e->kids.size());
            for (const auto& k : e->kids) kids.push_back(apply_twist(k, x_image, scalar_map));
            return ex_sum(std::move(kids));
        }
        case K::Product: {
            std::vector<ExprPtr<D>> kids;
            kids.reserve(e->kids.size());
            for (const auto& k : e->kids) kids.push_back(apply_twist(k, x_image, scalar_map));
            return ex_product(std::move(kids));
        }
        case K::Negate:
            return ex_neg(apply_twist(e->kids[0], x_image, scalar_map));
        case K::Inverse:
            return ex_inv(apply_twist(e->kids[0], x_image, scalar_map));
        case K::IntPower:
            return ex_pow(apply_twist(e->kids[0], x_image, scalar_map), e->expo);
    }
    throw AlgebraError("unreachable expression kind");
}

// A named construction: a coefficient field and skew structure, candidate
// free generators, optionally an involution making them symmetric, and the
// data for the theorem-hypothesis checks.
template <class D>
struct Scenario {
    std::string name;
    std::function<ContextPtr<D>(int)> make_ctx;  // truncation order -> context
    OreParams params{};
    std::vector<ExprPtr<D>> generators;
    std::optional<InvolutionSpec<D>> involution;
    std::vector<D> hyp_alphas;
    TheoremForm hyp_form = TheoremForm::List;
};

// ---- concrete scenarios --------------------------------------------------------

// Weyl coefficients, Xi = X^-1, generators (1/t) X^-1 and (1/(t(1-t))) X^-1.
inline Scenario<RatFunc> scenario_weyl_ml() {
    Scenario<RatFunc> s;
    s.name = "weyl-ml";
    s.make_ctx = [](int order) { return make_weyl_context(order); };
    s.params = OreParams{Rat(0), Rat(1), Rat(1), Rat(0)};
    QPoly t = QPoly::variable();
    RatFunc a1(QPoly(Rat(1)), t);
    RatFunc a2(QPoly(Rat(1)), t - t * t);
    ExprPtr<RatFunc> xi = xi_tree<RatFunc>(s.params, false);
    s.generators = {detail::mul2(ex_scalar(a1), xi), detail::mul2(ex_scalar(a2), xi)};
    s.hyp_alphas = {a1, a2};
    s.hyp_form = TheoremForm::List;
    return s;
}

// Weyl coefficients with the involution X -> -X, t -> t. The generators
// alpha^2 and alpha beta, built from alpha = a X^-1 a and beta = b X^-1 a,
// are symmetric because a and b commute.
inline Scenario<RatFunc> scenario_weyl_symmetric() {
    Scenario<RatFunc> s;
    s.name = "weyl-symmetric";
    s.make_ctx = [](int order) { return make_weyl_context(order); };
    s.params = OreParams{Rat(0), Rat(1), Rat(1), Rat(0)};
    QPoly t = QPoly::variable();
    RatFunc a(t, QPoly(Rat(1)) + t * t);
    RatFunc b(QPoly(Rat(1)), QPoly(Rat(1)) + t);
    ExprPtr<RatFunc> xinv = ex_pow(ex_x<RatFunc>(), -1);
    ExprPtr<RatFunc> alpha = ex_product<RatFunc>({ex_scalar(a), xinv, ex_scalar(a)});
    ExprPtr<RatFunc> beta = ex_product<RatFunc>({ex_scalar(b), xinv, ex_scalar(a)});
    s.generators = {ex_product<RatFunc>({alpha, alpha}), ex_product<RatFunc>({alpha, beta})};
    InvolutionSpec<RatFunc> inv;
    inv.x_image = ex_neg(ex_x<RatFunc>());
    s.involution = inv;
    s.hyp_alphas = {a * a, a * b};
    s.hyp_form = TheoremForm::List;
    return s;
}

enum class HeisenbergType { I, II, III, IV };

// Heisenberg coefficients Q(t)(Y) with sigma(Y) = tY, Xi = X(1-X)^-1.
// Four involutions, each with its own symmetric generator pair; zeta = t^p
// and eta = t^q parametrize the involutions and the symmetrizing twists.
inline Scenario<YFunc> scenario_heisenberg(HeisenbergType type, int p, int q) {
    if (p < 1 || q < 1) throw BadParams("involution exponents must be positive");
    if (type == HeisenbergType::II)
        throw UnsupportedConstruction(
            "no free symmetric pair is provided for the type II involution "
            "(X -> X^-1, Y -> Y^-1, t -> t^-1); by Theorem 1.1 of [FGS13] the "
            "symmetric elements of this form generate no free subalgebra of the "
            "required shape");

    Scenario<YFunc> s;
    s.name = std::string("heisenberg-") +
             (type == HeisenbergType::I ? "I" : type == HeisenbergType::III ? "III" : "IV");
    s.make_ctx = [](int order) { return make_heisenberg_context(order); };
    s.params = OreParams{Rat(1), Rat(-1), Rat(0), Rat(1)};

    YFunc one(1);
    YFunc yv = y_yfunc();
    RatFunc zeta_t(QPoly::monomial(Rat(1), p));
    RatFunc eta_t(QPoly::monomial(Rat(1), q));
    YFunc zeta(zeta_t);
    YFunc eta(eta_t);
    ExprPtr<YFunc> xi = xi_tree<YFunc>(s.params, true);
    s.hyp_form = TheoremForm::PowersWithOne;

    auto pair_ab = [&](const YFunc& alpha) {
        ExprPtr<YFunc> A = detail::mul2(ex_scalar(alpha), xi);
        ExprPtr<YFunc> B = detail::mul2(xi, ex_scalar(alpha));
        return std::pair{A, B};
    };

    if (type == HeisenbergType::I) {
        YFunc alpha = (one - yv).inverse();
        auto [A, B] = pair_ab(alpha);
        // Twist X -> (1+zeta)X, Y -> (1+eta)Y; it commutes with sigma, so it
        // extends to the skew field and carries AB, BA to symmetric elements.
        ExprPtr<YFunc> x_img = ex_product<YFunc>({ex_scalar(one + zeta), ex_x<YFunc>()});
        EndoImages<YFunc> scal{t_ratfunc(), (one + eta) * yv};
        s.generators = {apply_twist(ex_product<YFunc>({A, B}), x_img, scal),
                        apply_twist(ex_product<YFunc>({B, A}), x_img, scal)};
        InvolutionSpec<YFunc> inv;
        inv.x_image = ex_product<YFunc>({ex_scalar(zeta), ex_x<YFunc>()});
        inv.t_image = t_ratfunc().inverse();
        inv.y_value_image = eta * yv;
        s.involution = inv;
        s.hyp_alphas = {alpha};
    } else if (type == HeisenbergType::III) {
        // alpha = Y^2 (zeta - Y^2)^-2 is fixed by the involution; A* = B.
        YPoly den = YPoly::from_coeffs({zeta_t, RatFunc(0), RatFunc(-1)});
        YFunc alpha(YPoly::monomial(RatFunc(1), 2), den * den);
        auto [A, B] = pair_ab(alpha);
        s.generators = {ex_product<YFunc>({A, B}), ex_product<YFunc>({B, A})};
        InvolutionSpec<YFunc> inv;
        inv.x_image = ex_x<YFunc>();
        inv.y_value_image = zeta * yv.inverse();
        s.involution = inv;
        s.hyp_alphas = {alpha};
    } else {
        // Type IV swaps the generators: X* = zeta Y lands in the coefficient
        // field while Y* = zeta^-1 X leaves it.
        YFunc alpha(YPoly::variable(), YPoly::from_coeffs({RatFunc(1), RatFunc(-1)}));
        auto [A, B] = pair_ab(alpha);
        ExprPtr<YFunc> x_img = ex_x<YFunc>();
        EndoImages<YFunc> scal{t_ratfunc(), zeta * yv};
        s.generators = {apply_twist(A, x_img, scal), apply_twist(B, x_img, scal)};
        InvolutionSpec<YFunc> inv;
        inv.x_image = ex_scalar(zeta * yv);
        inv.y_tree_image = ex_product<YFunc>({ex_scalar(zeta.inverse()), ex_x<YFunc>()});
        s.involution = inv;
        s.hyp_alphas = {alpha};
    }
    return s;
}

// Shift coefficients: sigma(u) = u + 1 over Q(u), Xi = X(1-X)^-1, generators
// alpha^j Xi for j = 1..m.
inline Scenario<RatFunc> scenario_prop51_shift(const RatFunc& alpha, int m) {
    if (m < 1) throw BadParams("need at least one generator");
    if (alpha.is_zero() || alpha.is_constant())
        throw BadParams("alpha must be a nonconstant rational function");
    Scenario<RatFunc> s;
    s.name = "prop51-i";
    s.make_ctx = [](int order) {
        QPoly u = QPoly::variable();
        return make_qt_twist_context(RatFunc(u + QPoly(Rat(1))), RatFunc(u - QPoly(Rat(1))),
                                     order, SeriesDirection::DescendingX, "u");
    };
    s.params = OreParams{Rat(1), Rat(-1), Rat(0), Rat(1)};
    ExprPtr<RatFunc> xi = xi_tree<RatFunc>(s.params, true);
    for (int j = 1; j <= m; ++j) {
        s.generators.push_back(detail::mul2(ex_scalar(alpha.pow(j)), xi));
        s.hyp_alphas.push_back(alpha.pow(j));
    }
    s.hyp_form = TheoremForm::List;
    return s;
}

// Scaling coefficients: sigma(t) = lambda t, alpha_j = (t-b)^-j, generators
// alpha_j Xi for j = 1..m. lambda must not be 0 or a root of unity, or sigma
// has finite order and the fixed field grows.
inline Scenario<RatFunc> scenario_prop51_scale(const Rat& lambda, const Rat& b, int m) {
    if (m < 1) throw BadParams("need at least one generator");
    if (lambda == 0 || lambda == 1 || lambda == -1)
        throw BadParams("lambda must be nonzero and not a root of unity");
    Scenario<RatFunc> s;
    s.name = "prop51-ii";
    s.make_ctx = [lambda](int order) {
        QPoly t = QPoly::variable();
        return make_qt_twist_context(RatFunc(lambda * t), RatFunc(rat_inv(lambda) * t), order);
    };
    s.params = OreParams{Rat(1), Rat(-1), Rat(0), Rat(1)};
    ExprPtr<RatFunc> xi = xi_tree<RatFunc>(s.params, true);
    RatFunc base(QPoly::from_coeffs({-b, Rat(1)}));
    for (int j = 1; j <= m; ++j) {
        s.generators.push_back(detail::mul2(ex_scalar(base.pow(-j)), xi));
        s.hyp_alphas.push_back(base.pow(-j));
    }
    s.hyp_form = TheoremForm::List;
    return s;
}

// ---- proof-identity verification ----------------------------------------------

// The words of the freeness proof: V over the index tuple I = (i1, ..., ik)
// is Xi alpha^{i1} Xi alpha^{i2} ... alpha^{ik} Xi, and R_I peels the
// leading Xi off. Each tuple is checked against the two identities that
// drive the induction:
//   Xi^-1 V_I = R_I                      (and Xi^-1 V_() = 1),
//   g is constant:     X V_I = -(a0/a1) V_I + (b0/a1) R_I,
//   g a multiple of X: X^-1 V_I = -(a1/a0) V_I + (b1/a0) R_I,
// with R_() read as 1. Mismatches are counted coefficientwise down to the
// working window; the series are built at a widened order so that every
// compared coefficient is exact.
struct IdentityReport {
    int checked = 0;
    int mismatches = 0;
    std::vector<std::string> failures;
};

template <class D>
IdentityReport verify_proof_identities(const std::function<ContextPtr<D>(int)>& make_ctx,
                                       const OreParams& pr, const D& alpha, int order,
                                       int max_len, int max_power = 2) {
    ContextPtr<D> ctx = make_ctx(order + max_len + 4);
    const int floor = -order;

    ExprPtr<D> xit = xi_tree<D>(pr, ctx->delta_zero);
    TruncSeries<D> xi = evaluate(xit, ctx);
    TruncSeries<D> xi_inv = skew_inv(xi);
    TruncSeries<D> one = TruncSeries<D>::one(ctx);
    TruncSeries<D> x_pos = TruncSeries<D>::x_power(ctx, 1);

    std::vector<D> apow{D(1)};
    for (int i = 1; i <= max_power; ++i) apow.push_back(apow.back() * alpha);

    // Tuples in length-lex order; every tail precedes its extensions.
    // Exponent 0 is a legal entry: alpha^0 factors do not collapse the word
    // because the Xi between them survives.
    std::vector<std::vector<int>> tuples{{}};
    for (std::size_t head = 0; head < tuples.size(); ++head) {
        if (static_cast<int>(tuples[head].size()) >= max_len) continue;
        for (int i = 0; i <= max_power; ++i) {
            std::vector<int> next{i};
            next.insert(next.end(), tuples[head].begin(), tuples[head].end());
            tuples.push_back(std::move(next));
        }
    }
    std::map<std::vector<int>, TruncSeries<D>> V;
    V.emplace(std::vector<int>{}, xi);
    auto compute_v = [&](auto&& self, const std::vector<int>& id) -> const TruncSeries<D>& {
        auto it = V.find(id);
        if (it != V.end()) return it->second;
        std::vector<int> tail(id.begin() + 1, id.end());
        TruncSeries<D> v = xi * (apow[static_cast<std::size_t>(id[0])] * self(self, tail));
        return V.emplace(id, std::move(v)).first->second;
    };

    IdentityReport rep;
    auto label = [](const std::vector<int>& id) {
        std::string out = "(";
        for (std::size_t i = 0; i < id.size(); ++i)
            out += (i ? "," : "") + std::to_string(id[i]);
        return out + ")";
    };
    auto check = [&](const std::string& what, const TruncSeries<D>& lhs,
                     const TruncSeries<D>& rhs) {
        ++rep.checked;
        if (!agree_above_floor(lhs, rhs, floor)) {
            ++rep.mismatches;
            rep.failures.push_back(what);
        }
    };

    const bool const_g = pr.b1 == 0;
    TruncSeries<D> x_neg = const_g ? one : skew_inv(x_pos);
    for (const auto& id : tuples) {
        const TruncSeries<D>& v = compute_v(compute_v, id);
        TruncSeries<D> r =
            id.empty() ? one
                       : apow[static_cast<std::size_t>(id[0])] *
                             compute_v(compute_v, std::vector<int>(id.begin() + 1, id.end()));
        check("peel " + label(id), xi_inv * v, r);
        if (const_g) {
            TruncSeries<D> rhs = from_rat<D>(-pr.a0 / pr.a1) * v + from_rat<D>(pr.b0 / pr.a1) * r;
            check("recurrence " + label(id), x_pos * v, rhs);
        } else {
            TruncSeries<D> rhs = from_rat<D>(-pr.a1 / pr.a0) * v + from_rat<D>(pr.b1 / pr.a0) * r;
            check("recurrence " + label(id), x_neg * v, rhs);
        }
    }
    return rep;
}

}  // namespace skewfree
