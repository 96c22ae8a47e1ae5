#pragma once

#include <cctype>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "skewfree/series.hpp"

namespace skewfree {

// Immutable expression tree over the coefficient field D with one
// noncommuting generator X. Maximal X-free subtrees are folded into Scalar
// leaves at construction, so a tree contains operation nodes only where X
// makes the order of factors matter.
template <class D>
struct Expr {
    enum class Kind { Scalar, X, Sum, Product, Negate, Inverse, IntPower };

    Kind kind;
    D value = D(0);                                    // Scalar
    std::vector<std::shared_ptr<const Expr>> kids;     // n-ary for Sum/Product
    long expo = 0;                                     // IntPower
};

template <class D>
using ExprPtr = std::shared_ptr<const Expr<D>>;

template <class D>
std::string print_expr(const ExprPtr<D>& e);

template <class D>
ExprPtr<D> ex_scalar(const D& v) {
    auto e = std::make_shared<Expr<D>>();
    e->kind = Expr<D>::Kind::Scalar;
    e->value = v;
    return e;
}

template <class D>
ExprPtr<D> ex_x() {
    auto e = std::make_shared<Expr<D>>();
    e->kind = Expr<D>::Kind::X;
    return e;
}

template <class D>
bool is_scalar(const ExprPtr<D>& e) {
    return e->kind == Expr<D>::Kind::Scalar;
}

template <class D>
ExprPtr<D> ex_sum(std::vector<ExprPtr<D>> kids) {
    if (kids.size() == 1) return kids[0];
    bool all_scalar = true;
    for (const auto& k : kids) all_scalar = all_scalar && is_scalar(k);
    if (all_scalar) {
        D acc(0);
        for (const auto& k : kids) acc = acc + k->value;
        return ex_scalar(acc);
    }
    auto e = std::make_shared<Expr<D>>();
    e->kind = Expr<D>::Kind::Sum;
    e->kids = std::move(kids);
    return e;
}

template <class D>
ExprPtr<D> ex_product(std::vector<ExprPtr<D>> kids) {
    if (kids.size() == 1) return kids[0];
    bool all_scalar = true;
    for (const auto& k : kids) all_scalar = all_scalar && is_scalar(k);
    if (all_scalar) {
        D acc(1);
        for (const auto& k : kids) acc = acc * k->value;
        return ex_scalar(acc);
    }
    auto e = std::make_shared<Expr<D>>();
    e->kind = Expr<D>::Kind::Product;
    e->kids = std::move(kids);
    return e;
}

template <class D>
ExprPtr<D> ex_neg(ExprPtr<D> k) {
    if (is_scalar(k)) return ex_scalar(-k->value);
    auto e = std::make_shared<Expr<D>>();
    e->kind = Expr<D>::Kind::Negate;
    e->kids.push_back(std::move(k));
    return e;
}

template <class D>
ExprPtr<D> ex_inv(ExprPtr<D> k) {
    if (is_scalar(k)) {
        if (k->value.is_zero())
            throw DivisionByZero("inverse of the zero subexpression " + print_expr(k));
        return ex_scalar(k->value.inverse());
    }
    auto e = std::make_shared<Expr<D>>();
    e->kind = Expr<D>::Kind::Inverse;
    e->kids.push_back(std::move(k));
    return e;
}

template <class D>
ExprPtr<D> ex_pow(ExprPtr<D> k, long expo) {
    if (expo == 1) return k;
    if (is_scalar(k)) {
        if (k->value.is_zero() && expo < 0)
            throw DivisionByZero("inverse of the zero subexpression " + print_expr(k));
        return ex_scalar(k->value.pow(expo));
    }
    if (expo == 0) return ex_scalar(D(1));
    auto e = std::make_shared<Expr<D>>();
    e->kind = Expr<D>::Kind::IntPower;
    e->kids.push_back(std::move(k));
    e->expo = expo;
    return e;
}

// ---- evaluation --------------------------------------------------------------

// The optional trace logs (or replays) the inversion base degree of every
// skew_inv, in evaluation order; see InvTopTrace. Only the tree shape and
// the kid order determine that order, so a shape-preserving image of the
// tree (map_expr) replays a trace recorded here, even at another truncation
// order: leading degrees are computed from leading terms alone and do not
// depend on the window.
template <class D>
TruncSeries<D> evaluate(const ExprPtr<D>& e, const ContextPtr<D>& ctx,
                        InvTopTrace* trace = nullptr) {
    using K = Expr<D>::Kind;
    switch (e->kind) {
        case K::Scalar:
            return TruncSeries<D>::from_scalar(ctx, e->value);
        case K::X:
            return TruncSeries<D>::x_power(ctx, 1);
        case K::Sum: {
            TruncSeries<D> acc(ctx);
            for (const auto& k : e->kids) acc = acc + evaluate(k, ctx, trace);
            return acc;
        }
        case K::Product: {
            TruncSeries<D> acc = TruncSeries<D>::one(ctx);
            for (const auto& k : e->kids) acc = skew_mul(acc, evaluate(k, ctx, trace));
            return acc;
        }
        case K::Negate:
            return -evaluate(e->kids[0], ctx, trace);
        case K::Inverse: {
            TruncSeries<D> v = evaluate(e->kids[0], ctx, trace);
            if (v.is_zero())
                throw DivisionByZero("inverse of the zero subexpression " +
                                     print_expr(e->kids[0]));
            return skew_inv(v, trace);
        }
        case K::IntPower: {
            long n = e->expo;
            TruncSeries<D> base = evaluate(e->kids[0], ctx, trace);
            if (n < 0) {
                if (base.is_zero())
                    throw DivisionByZero("inverse of the zero subexpression " +
                                         print_expr(e->kids[0]));
                base = skew_inv(base, trace);
                n = -n;
            }
            TruncSeries<D> acc = TruncSeries<D>::one(ctx);
            while (n > 0) {
                if (n & 1) acc = skew_mul(acc, base);
                if (n >>= 1) base = skew_mul(base, base);
            }
            return acc;
        }
    }
    throw AlgebraError("unreachable expression kind");
}

// Semantic equality at the working truncation order.
template <class D>
bool expr_equal(const ExprPtr<D>& a, const ExprPtr<D>& b, const ContextPtr<D>& ctx) {
    return evaluate(a, ctx) == evaluate(b, ctx);
}

// Rebuilds the tree over another coefficient field by mapping the scalar
// leaves. The node structure is copied one to one, with none of the folding
// the ex_* builders do, so evaluating the image performs the same operations
// in the same order as evaluating the original; that is what lets an
// InvTopTrace recorded on one side be replayed on the other, and it defers
// zero tests on mapped scalars to evaluation time where the replay's
// retry-on-throw logic can see them.
template <class DO, class DI, class F>
ExprPtr<DO> map_expr(const ExprPtr<DI>& e, F&& scalar_map) {
    using KI = typename Expr<DI>::Kind;
    using KO = typename Expr<DO>::Kind;
    auto out = std::make_shared<Expr<DO>>();
    switch (e->kind) {
        case KI::Scalar:
            out->kind = KO::Scalar;
            out->value = scalar_map(e->value);
            break;
        case KI::X:
            out->kind = KO::X;
            break;
        case KI::Sum:
            out->kind = KO::Sum;
            break;
        case KI::Product:
            out->kind = KO::Product;
            break;
        case KI::Negate:
            out->kind = KO::Negate;
            break;
        case KI::Inverse:
            out->kind = KO::Inverse;
            break;
        case KI::IntPower:
            out->kind = KO::IntPower;
            out->expo = e->expo;
            break;
    }
    out->kids.reserve(e->kids.size());
    for (const auto& k : e->kids) out->kids.push_back(map_expr<DO>(k, scalar_map));
    return out;
}

// Evaluates a mapped image of a tree against the inversion trace its exact
// original recorded. A diverging inversion base surfaces as DivisionByZero
// inside skew_inv; a trace not consumed exactly would mean the two trees do
// not perform the same operations, which is a usage bug, not bad luck.
template <class D>
TruncSeries<D> evaluate_replay(const ExprPtr<D>& e, const ContextPtr<D>& ctx,
                               const InvTopTrace& recorded) {
    InvTopTrace replay = recorded;
    replay.recording = false;
    replay.at = 0;
    TruncSeries<D> out = evaluate(e, ctx, &replay);
    if (replay.at != replay.tops.size())
        throw AlgebraError("inversion trace not fully consumed");
    return out;
}

// ---- printing ----------------------------------------------------------------

namespace detail {

inline bool scalar_text_is_atomic(const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-') ? 1 : 0;
    if (i == 1 && s.size() == 1) return false;
    bool seen_caret = false;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (std::isalnum(static_cast<unsigned char>(c))) continue;
        if (c == '^' && !seen_caret) {
            seen_caret = true;
            continue;
        }
        return false;
    }
    return s[0] != '-';  // a leading minus still needs parens inside products
}

inline std::string scalar_text(const RatFunc& v, const std::string& tvar) {
    return to_string(v, tvar);
}
inline std::string scalar_text(const YFunc& v, const std::string& tvar) {
    return to_string(v, "Y", tvar);
}
// Other coefficient fields print through their one-variable to_string.
template <class D>
std::string scalar_text(const D& v, const std::string& tvar) {
    return to_string(v, tvar);
}

}  // namespace detail

// Canonical rendering: products use explicit '*', inverses print as ^-1, and
// subtraction appears only through negated summands. The output reparses to
// an equal expression, and reprinting the reparse reproduces it verbatim.
template <class D>
std::string print_expr(const ExprPtr<D>& e, const std::string& tvar) {
    using K = Expr<D>::Kind;
    auto factor = [&](const ExprPtr<D>& k) {
        std::string s = print_expr(k, tvar);
        switch (k->kind) {
            case K::Scalar:
                return detail::scalar_text_is_atomic(s) ? s : "(" + s + ")";
            case K::X:
            case K::IntPower:
            case K::Inverse:
                return s;
            default:
                return "(" + s + ")";
        }
    };
    switch (e->kind) {
        case K::Scalar:
            return detail::scalar_text(e->value, tvar);
        case K::X:
            return "X";
        case K::Sum: {
            std::string out;
            bool first = true;
            for (const auto& k : e->kids) {
                if (k->kind == K::Negate) {
                    out += first ? "-" + print_expr(k->kids[0], tvar)
                                 : " - " + print_expr(k->kids[0], tvar);
                } else {
                    out += first ? print_expr(k, tvar) : " + " + print_expr(k, tvar);
                }
                first = false;
            }
            return out;
        }
        case K::Product: {
            std::string out;
            for (const auto& k : e->kids) {
                if (!out.empty()) out += "*";
                out += factor(k);
            }
            return out;
        }
        case K::Negate:
            return "-" + factor(e->kids[0]);
        case K::Inverse:
            return factor(e->kids[0]) + "^-1";
        case K::IntPower:
            return factor(e->kids[0]) + "^" + std::to_string(e->expo);
    }
    return "?";
}

template <class D>
std::string print_expr(const ExprPtr<D>& e) {
    return print_expr(e, "t");
}

// ---- parsing -----------------------------------------------------------------

// Grammar:
//   expr   := ['-'] term { ('+'|'-') term }
//   term   := factor { ('*'|'/') factor }          '/' is right-inverse: a/b = a*b^-1
//   factor := base [ '^' ['-'] integer ]
//   base   := 'X' | 'Y' | tvar | integer | '(' expr ')'
// Whitespace is free. tvar defaults to "t" and can be renamed per context.
template <class D>
class ExprParser {
  public:
    explicit ExprParser(std::string text, std::string tvar = "t")
        : s_(std::move(text)), tvar_(std::move(tvar)) {}

    ExprPtr<D> parse() {
        ExprPtr<D> e = parse_expr();
        skip_ws();
        if (pos_ != s_.size())
            throw ParseError("unexpected trailing input", pos_);
        return e;
    }

  private:
    std::string s_;
    std::string tvar_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    ExprPtr<D> parse_expr() {
        bool neg = eat('-');
        ExprPtr<D> acc = parse_term();
        if (neg) acc = ex_neg(std::move(acc));
        std::vector<ExprPtr<D>> kids{std::move(acc)};
        for (;;) {
            if (eat('+')) {
                kids.push_back(parse_term());
            } else if (eat('-')) {
                kids.push_back(ex_neg(parse_term()));
            } else {
                break;
            }
        }
        return ex_sum(std::move(kids));
    }

    ExprPtr<D> parse_term() {
        std::vector<ExprPtr<D>> kids{parse_factor()};
        for (;;) {
            if (eat('*')) {
                kids.push_back(parse_factor());
            } else if (eat('/')) {
                kids.push_back(ex_inv(parse_factor()));
            } else {
                break;
            }
        }
        return ex_product(std::move(kids));
    }

    ExprPtr<D> parse_factor() {
        ExprPtr<D> base = parse_base();
        if (eat('^')) {
            bool neg = eat('-');
            long n = parse_integer();
            return ex_pow(std::move(base), neg ? -n : n);
        }
        return base;
    }

    long parse_integer() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == start) throw ParseError("expected an integer", start);
        return std::stol(s_.substr(start, pos_ - start));
    }

    ExprPtr<D> parse_base() {
        skip_ws();
        if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            ExprPtr<D> e = parse_expr();
            if (!eat(')')) throw ParseError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            Rat v(s_.substr(start, pos_ - start));
            return ex_scalar(from_rat<D>(v));
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            std::string name = s_.substr(start, pos_ - start);
            if (name == "X") return ex_x<D>();
            if (name == tvar_) return ex_scalar(t_elem<D>());
            if (name == "Y") {
                if constexpr (std::is_same_v<D, YFunc>) {
                    return ex_scalar(y_elem<D>());
                } else {
                    throw UnknownSymbol("symbol 'Y' needs the two-variable coefficient field (offset " +
                                        std::to_string(start) + ")");
                }
            }
            throw UnknownSymbol("unknown symbol '" + name + "' (offset " +
                                std::to_string(start) + ")");
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }
};

template <class D>
ExprPtr<D> parse_expr_text(const std::string& text, const std::string& tvar = "t") {
    return ExprParser<D>(text, tvar).parse();
}

}  // namespace skewfree
