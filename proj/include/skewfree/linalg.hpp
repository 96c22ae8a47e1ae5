#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "skewfree/tower.hpp"

namespace skewfree {

template <class F>
class DenseMatrix {
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<F> a_;

  public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t r, std::size_t c) : rows_(r), cols_(c), a_(r * c, F(0)) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    F& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    const F& at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

    std::vector<F> row(std::size_t r) const {
        return std::vector<F>(a_.begin() + static_cast<long>(r * cols_),
                              a_.begin() + static_cast<long>((r + 1) * cols_));
    }
};

// Incremental Gaussian elimination over a field. Rows are fed one at a time;
// a dependent row comes back with the exact linear combination of previously
// fed rows that produces it (by their feed indices). Since the stored pivot
// rows are independent, that combination's support is the unique minimal
// dependent subset containing the new row.
template <class F>
class RowReducer {
  public:
    struct Feed {
        bool independent = false;
        // Present only for dependent rows: fed_row = sum coeff * row[index].
        std::map<std::size_t, F> combination;
    };

    Feed feed(std::vector<F> row) {
        const std::size_t my_index = fed_count_++;
        std::map<std::size_t, F> mix;  // expression of `row` in original rows
        mix[my_index] = F(1);
        for (const Pivot& p : pivots_) {
            const F lead = row[p.col];  // by value: the loop below zeroes row[p.col]
            if (kf_is_zero(lead)) continue;
            // row -= lead * pivot (pivot rows are normalized to lead 1)
            for (std::size_t c = p.col; c < row.size(); ++c)
                row[c] = row[c] - lead * p.v[c];
            for (const auto& [idx, coeff] : p.mix) {
                auto it = mix.find(idx);
                if (it == mix.end()) {
                    mix.emplace(idx, -(lead * coeff));
                } else {
                    it->second = it->second - lead * coeff;
                    if (kf_is_zero(it->second)) mix.erase(it);
                }
            }
        }
        std::size_t col = 0;
        while (col < row.size() && kf_is_zero(row[col])) ++col;
        Feed out;
        if (col == row.size()) {
            // Dependent: mix says 0 = sum mix[idx] * row_idx with mix[my] = 1,
            // so fed_row = -sum_{idx != my} mix[idx] * row_idx.
            for (auto& [idx, coeff] : mix) {
                if (idx == my_index) continue;
                out.combination.emplace(idx, -coeff);
            }
            return out;
        }
        F inv = kf_inv(row[col]);
        for (auto& x : row) x = inv * x;
        for (auto& [idx, coeff] : mix) coeff = inv * coeff;
        pivots_.push_back(Pivot{std::move(row), col, std::move(mix)});
        out.independent = true;
        return out;
    }

    std::size_t rank() const { return pivots_.size(); }

  private:
    struct Pivot {
        std::vector<F> v;
        std::size_t col;
        std::map<std::size_t, F> mix;
    };
    std::vector<Pivot> pivots_;
    std::size_t fed_count_ = 0;
};

template <class F>
std::size_t rank_exact(const DenseMatrix<F>& m) {
    RowReducer<F> red;
    for (std::size_t r = 0; r < m.rows(); ++r) red.feed(m.row(r));
    return red.rank();
}

// Basis of the right nullspace { x : M x = 0 } over a field, via
// reduced row echelon form. Each basis vector has a 1 at its free column.
template <class F>
std::vector<std::vector<F>> nullspace(DenseMatrix<F> m) {
    const std::size_t R = m.rows(), C = m.cols();
    std::vector<std::size_t> pivot_col_of_row;
    std::size_t r = 0;
    for (std::size_t c = 0; c < C && r < R; ++c) {
        std::size_t sel = r;
        while (sel < R && kf_is_zero(m.at(sel, c))) ++sel;
        if (sel == R) continue;
        for (std::size_t j = 0; j < C; ++j) std::swap(m.at(sel, j), m.at(r, j));
        F inv = kf_inv(m.at(r, c));
        for (std::size_t j = c; j < C; ++j) m.at(r, j) = inv * m.at(r, j);
        for (std::size_t i = 0; i < R; ++i) {
            if (i == r) continue;
            const F& f = m.at(i, c);
            if (kf_is_zero(f)) continue;
            F scale = f;
            for (std::size_t j = c; j < C; ++j) m.at(i, j) = m.at(i, j) - scale * m.at(r, j);
        }
        pivot_col_of_row.push_back(c);
        ++r;
    }
    std::vector<bool> is_pivot(C, false);
    for (std::size_t c : pivot_col_of_row) is_pivot[c] = true;
    std::vector<std::vector<F>> basis;
    for (std::size_t c = 0; c < C; ++c) {
        if (is_pivot[c]) continue;
        std::vector<F> v(C, F(0));
        v[c] = F(1);
        for (std::size_t i = 0; i < pivot_col_of_row.size(); ++i)
            v[pivot_col_of_row[i]] = -m.at(i, c);
        basis.push_back(std::move(v));
    }
    return basis;
}

// ---- modular rank probe -----------------------------------------------------

namespace detail {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

inline std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t acc = 1;
    while (e) {
        if (e & 1) acc = mulmod_u64(acc, a, p);
        a = mulmod_u64(a, a, p);
        e >>= 1;
    }
    return acc;
}

inline std::uint64_t invmod_u64(std::uint64_t a, std::uint64_t p) {
    return powmod_u64(a % p, p - 2, p);  // p prime
}

inline std::uint64_t mpz_mod_u64(const Int& z, std::uint64_t p) {
    Int m = z % Int(p);
    if (sgn(m) < 0) m += Int(p);
    return m.get_ui();
}

// Incremental row reduction over F_p. Rows are reduced against the stored
// basis in feed order; every stored row is zero at all earlier pivots, so
// the forward sweep is a complete reduction.
struct ModRowReducer {
    std::uint64_t p;
    std::vector<std::vector<std::uint64_t>> rows;
    std::vector<std::size_t> pivots;

    explicit ModRowReducer(std::uint64_t prime) : p(prime) {}

    std::size_t rank() const { return rows.size(); }

    // True when the row was independent of everything fed before it.
    bool feed(std::vector<std::uint64_t> v) {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            std::uint64_t f = v[pivots[i]];
            if (f == 0) continue;
            for (std::size_t j = pivots[i]; j < v.size(); ++j) {
                std::uint64_t sub = mulmod_u64(f, rows[i][j], p);
                v[j] = (v[j] >= sub) ? v[j] - sub : v[j] + (p - sub);
            }
        }
        std::size_t piv = v.size();
        for (std::size_t j = 0; j < v.size(); ++j)
            if (v[j] != 0) {
                piv = j;
                break;
            }
        if (piv == v.size()) return false;
        std::uint64_t inv = invmod_u64(v[piv], p);
        for (std::size_t j = piv; j < v.size(); ++j) v[j] = mulmod_u64(v[j], inv, p);
        rows.push_back(std::move(v));
        pivots.push_back(piv);
        return true;
    }
};

}  // namespace detail

inline std::uint64_t random_prime_near_2_62(std::mt19937_64& rng) {
    // Draw in [2^61, 2^62): big enough that an accidental hit on a fixed
    // denominator is vanishingly unlikely, small enough that products fit a
    // 128-bit intermediate.
    std::uniform_int_distribution<std::uint64_t> d(0, (1ull << 61) - 1);
    Int start = (Int(1) << 61) + Int(d(rng));
    Int p;
    mpz_nextprime(p.get_mpz_t(), start.get_mpz_t());
    return p.get_ui();
}

// Rank of a rational matrix reduced mod p. Denominators hitting zero mod p
// make the reduction meaningless; the caller redraws the prime then.
inline std::optional<std::size_t> rank_mod_prime(const DenseMatrix<Rat>& m, std::uint64_t p) {
    const std::size_t R = m.rows(), C = m.cols();
    std::vector<std::vector<std::uint64_t>> a(R, std::vector<std::uint64_t>(C, 0));
    for (std::size_t i = 0; i < R; ++i)
        for (std::size_t j = 0; j < C; ++j) {
            const Rat& q = m.at(i, j);
            std::uint64_t den = detail::mpz_mod_u64(Int(q.get_den()), p);
            if (den == 0) return std::nullopt;
            std::uint64_t num = detail::mpz_mod_u64(Int(q.get_num()), p);
            a[i][j] = detail::mulmod_u64(num, detail::invmod_u64(den, p), p);
        }
    std::size_t rank = 0;
    for (std::size_t c = 0; c < C && rank < R; ++c) {
        std::size_t sel = rank;
        while (sel < R && a[sel][c] == 0) ++sel;
        if (sel == R) continue;
        std::swap(a[sel], a[rank]);
        std::uint64_t inv = detail::invmod_u64(a[rank][c], p);
        for (std::size_t j = c; j < C; ++j) a[rank][j] = detail::mulmod_u64(a[rank][j], inv, p);
        for (std::size_t i = rank + 1; i < R; ++i) {
            std::uint64_t f = a[i][c];
            if (f == 0) continue;
            for (std::size_t j = c; j < C; ++j) {
                std::uint64_t sub = detail::mulmod_u64(f, a[rank][j], p);
                a[i][j] = (a[i][j] >= sub) ? a[i][j] - sub : a[i][j] + (p - sub);
            }
        }
        ++rank;
    }
    return rank;
}

// Probabilistic-but-sound full-rank check: the rank mod p never exceeds the
// rank over Q, so a full modular rank certifies full rank exactly. A
// deficient probe proves nothing and the caller falls back to exact
// elimination.
inline bool modular_full_rank_probe(const DenseMatrix<Rat>& m, std::mt19937_64& rng,
                                    int attempts = 3) {
    for (int i = 0; i < attempts; ++i) {
        std::uint64_t p = random_prime_near_2_62(rng);
        auto r = rank_mod_prime(m, p);
        if (!r) continue;  // prime collided with a denominator; redraw
        return *r == m.rows();
    }
    return false;
}

// ---- fraction-free elimination over Q[t] -------------------------------------

// Nullspace of a matrix with Q(t) entries. Rows are cleared to Q[t] and
// reduced by Bareiss one-step elimination (all divisions exact), which keeps
// the intermediate polynomial degrees near those of the true minors; the
// nullspace is then read off by back-substitution in Q(t).
inline std::vector<std::vector<RatFunc>> nullspace_qt(const DenseMatrix<RatFunc>& m) {
    const std::size_t R = m.rows(), C = m.cols();
    std::vector<std::vector<QPoly>> a(R, std::vector<QPoly>(C));
    for (std::size_t i = 0; i < R; ++i) {
        QPoly lcd(Rat(1));
        for (std::size_t j = 0; j < C; ++j) lcd = poly_lcm(lcd, m.at(i, j).den());
        for (std::size_t j = 0; j < C; ++j) {
            const RatFunc& q = m.at(i, j);
            a[i][j] = q.num() * exact_div(lcd, q.den());
        }
    }
    QPoly prev(Rat(1));
    std::vector<std::size_t> pivot_cols;
    std::size_t r = 0;
    for (std::size_t c = 0; c < C && r < R; ++c) {
        std::size_t sel = r;
        while (sel < R && a[sel][c].is_zero()) ++sel;
        if (sel == R) continue;
        std::swap(a[sel], a[r]);
        for (std::size_t i = r + 1; i < R; ++i) {
            for (std::size_t j = c + 1; j < C; ++j) {
                QPoly num = a[r][c] * a[i][j] - a[i][c] * a[r][j];
                a[i][j] = prev.is_constant() && prev.coeff(0) == Rat(1)
                              ? std::move(num)
                              : exact_div(num, prev);
            }
            a[i][c] = QPoly();
        }
        prev = a[r][c];
        pivot_cols.push_back(c);
        ++r;
    }
    // Back-substitution over Q(t) on the echelon rows.
    std::vector<bool> is_pivot(C, false);
    for (std::size_t c : pivot_cols) is_pivot[c] = true;
    std::vector<std::vector<RatFunc>> basis;
    for (std::size_t free_c = 0; free_c < C; ++free_c) {
        if (is_pivot[free_c]) continue;
        std::vector<RatFunc> v(C, RatFunc(0));
        v[free_c] = RatFunc(1);
        for (std::size_t k = pivot_cols.size(); k-- > 0;) {
            std::size_t pc = pivot_cols[k];
            RatFunc acc(0);
            for (std::size_t j = pc + 1; j < C; ++j) {
                if (v[j].is_zero() || a[k][j].is_zero()) continue;
                acc = acc + RatFunc(a[k][j]) * v[j];
            }
            if (!acc.is_zero()) v[pc] = -(acc / RatFunc(a[k][pc]));
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace skewfree
