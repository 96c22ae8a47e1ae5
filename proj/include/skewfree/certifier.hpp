#pragma once

#include <map>
#include <random>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "skewfree/derivation.hpp"
#include "skewfree/series.hpp"

namespace skewfree {

// Outcome of the exact rank computation on the word matrix. Certification
// is one-sided: the series are exact truncations of the words, so full row
// rank proves the words independent, while a rank deficit only means the
// truncation cannot tell (a genuine relation would also look like this).
struct FreenessReport {
    std::size_t word_count = 0;
    std::size_t rank = 0;
    bool certified = false;
    std::size_t matrix_rows = 0;
    std::size_t matrix_cols = 0;
    int max_word_length = 0;
    int truncation_order = 0;
    // First word whose row reduced to a combination of earlier ones, with
    // that combination; empty when certified.
    std::string dependent_word;
    std::vector<std::pair<std::string, Rat>> dependency;
};

namespace detail {

inline std::string word_label(const std::vector<int>& idx) {
    if (idx.empty()) return "1";
    std::string out;
    for (std::size_t i = 0; i < idx.size(); ++i)
        out += (i ? "*g" : "g") + std::to_string(idx[i] + 1);
    return out;
}

// Rows over Q indexed by (X-degree, Y-degree, t-degree). Denominators are
// cleared per X-degree with clearers shared by all words, an injective
// linear change of coordinates on each block that leaves row rank intact.
inline std::vector<std::map<std::tuple<int, int, int>, Rat>> flatten_words(
    const std::vector<TruncSeries<RatFunc>>& words) {
    std::map<int, QPoly> tlcd;
    for (const auto& w : words)
        for (const auto& [d, c] : w.coeffs()) {
            auto [it, fresh] = tlcd.emplace(d, c.den());
            if (!fresh) it->second = poly_lcm(it->second, c.den());
        }
    std::vector<std::map<std::tuple<int, int, int>, Rat>> rows;
    for (const auto& w : words) {
        std::map<std::tuple<int, int, int>, Rat> row;
        for (const auto& [d, c] : w.coeffs())
            for (auto& [i, v] : coefficient_vector(c, tlcd.at(d))) row[{d, 0, i}] = v;
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::vector<std::map<std::tuple<int, int, int>, Rat>> flatten_words(
    const std::vector<TruncSeries<YFunc>>& words) {
    std::map<int, YPoly> ylcd;
    for (const auto& w : words)
        for (const auto& [d, c] : w.coeffs()) {
            auto [it, fresh] = ylcd.emplace(d, c.den());
            if (!fresh) it->second = poly_lcm(it->second, c.den());
        }
    std::map<int, QPoly> tlcd;
    for (const auto& w : words)
        for (const auto& [d, c] : w.coeffs()) {
            YPoly p = c.num() * exact_div(ylcd.at(d), c.den());
            auto [it, fresh] = tlcd.emplace(d, QPoly(Rat(1)));
            for (const RatFunc& cc : p.coeffs())
                it->second = poly_lcm(it->second, cc.den());
        }
    std::vector<std::map<std::tuple<int, int, int>, Rat>> rows;
    for (const auto& w : words) {
        std::map<std::tuple<int, int, int>, Rat> row;
        for (const auto& [d, c] : w.coeffs())
            for (auto& [jk, v] : coefficient_vector(c, ylcd.at(d), tlcd.at(d)))
                row[{d, jk.first, jk.second}] = v;
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace detail

// Builds all words of length 0..max_len over the generators (each word is
// its prefix times one more generator, so the products are shared), flattens
// their exact coefficient data to a rational matrix, and computes its row
// rank: a fast modular probe first, the exact reduction when the probe does
// not already certify.
template <class D>
FreenessReport certify_freeness(const std::vector<TruncSeries<D>>& gens, int max_len,
                                std::mt19937_64& rng) {
    if (gens.empty()) throw BadParams("no generators to certify");
    const ContextPtr<D>& ctx = gens[0].context();

    std::vector<std::vector<int>> labels{{}};
    std::vector<TruncSeries<D>> words{TruncSeries<D>::one(ctx)};
    std::size_t level_begin = 0;
    for (int len = 1; len <= max_len; ++len) {
        const std::size_t level_end = words.size();
        for (std::size_t w = level_begin; w < level_end; ++w)
            for (std::size_t g = 0; g < gens.size(); ++g) {
                std::vector<int> lab = labels[w];
                lab.push_back(static_cast<int>(g));
                labels.push_back(std::move(lab));
                words.push_back(words[w] * gens[g]);
            }
        level_begin = level_end;
    }

    FreenessReport rep;
    rep.word_count = words.size();
    rep.max_word_length = max_len;
    rep.truncation_order = ctx->order;

    auto sparse = detail::flatten_words(words);
    auto dense = detail::to_dense_rows(sparse);
    rep.matrix_rows = dense.size();
    rep.matrix_cols = dense.empty() ? 0 : dense[0].size();

    if (rep.matrix_cols >= rep.matrix_rows) {
        DenseMatrix<Rat> m(rep.matrix_rows, rep.matrix_cols);
        for (std::size_t i = 0; i < dense.size(); ++i)
            for (std::size_t j = 0; j < dense[i].size(); ++j) m.at(i, j) = dense[i][j];
        if (modular_full_rank_probe(m, rng)) {
            rep.rank = rep.word_count;
            rep.certified = true;
            return rep;
        }
    }

    RowReducer<Rat> red;
    for (std::size_t i = 0; i < dense.size(); ++i) {
        auto fed = red.feed(std::move(dense[i]));
        if (!fed.independent && rep.dependent_word.empty()) {
            rep.dependent_word = detail::word_label(labels[i]);
            for (const auto& [idx, coeff] : fed.combination)
                rep.dependency.emplace_back(detail::word_label(labels[idx]), coeff);
        }
    }
    rep.rank = red.rank();
    rep.certified = rep.rank == rep.word_count;
    return rep;
}

}  // namespace skewfree
