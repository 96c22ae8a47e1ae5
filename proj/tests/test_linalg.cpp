#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "skewfree/linalg.hpp"

using namespace skewfree;

namespace {

template <class F>
bool annihilates(const DenseMatrix<F>& m, const std::vector<F>& v) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        F acc(0);
        for (std::size_t j = 0; j < m.cols(); ++j) acc = acc + m.at(i, j) * v[j];
        if (!kf_is_zero(acc)) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("row reducer reports the exact dependency") {
    RowReducer<Rat> red;
    CHECK(red.feed({Rat(1), Rat(2), Rat(3)}).independent);
    CHECK(red.feed({Rat(0), Rat(1), Rat(1)}).independent);
    auto dep = red.feed({Rat(2), Rat(3), Rat(5)});  // 2*r0 - r1
    REQUIRE(!dep.independent);
    REQUIRE(dep.combination.size() == 2);
    CHECK(dep.combination.at(0) == Rat(2));
    CHECK(dep.combination.at(1) == Rat(-1));
    CHECK(red.rank() == 2);
    CHECK(red.feed({Rat(0), Rat(0), Rat(1)}).independent);
    CHECK(red.rank() == 3);

    // A zero row depends on nothing.
    auto z = red.feed({Rat(0), Rat(0), Rat(0)});
    CHECK(!z.independent);
    CHECK(z.combination.empty());
}

TEST_CASE("dependency combinations reconstruct the fed row") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t C = 5;
        RowReducer<Rat> red;
        std::vector<std::vector<Rat>> fed;
        std::uniform_int_distribution<int> val(-4, 4);
        for (int i = 0; i < 8; ++i) {
            std::vector<Rat> row(C);
            for (auto& x : row) x = Rat(val(rng));
            fed.push_back(row);
            auto res = red.feed(row);
            if (!res.independent) {
                std::vector<Rat> recon(C, Rat(0));
                for (auto& [idx, coeff] : res.combination)
                    for (std::size_t j = 0; j < C; ++j) recon[j] += coeff * fed[idx][j];
                CHECK(recon == row);
            }
        }
        CHECK(red.rank() <= C);
    }
}

TEST_CASE("field nullspace") {
    DenseMatrix<Rat> m(2, 3);
    m.at(0, 0) = 1;
    m.at(0, 1) = 2;
    m.at(0, 2) = 3;
    m.at(1, 2) = 1;
    auto basis = nullspace(m);
    REQUIRE(basis.size() == 1);
    CHECK(basis[0] == std::vector<Rat>{Rat(-2), Rat(1), Rat(0)});
    CHECK(annihilates(m, basis[0]));

    std::mt19937_64 rng(55);
    std::uniform_int_distribution<int> val(-3, 3);
    for (int trial = 0; trial < 15; ++trial) {
        DenseMatrix<Rat> a(4, 7);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 7; ++j) a.at(i, j) = Rat(val(rng));
        auto ns = nullspace(a);
        for (auto& v : ns) CHECK(annihilates(a, v));
        CHECK(rank_exact(a) + ns.size() == 7);
    }
}

TEST_CASE("modular rank probe certifies full rank only") {
    std::mt19937_64 rng(77);
    DenseMatrix<Rat> id(3, 4);
    for (std::size_t i = 0; i < 3; ++i) id.at(i, i) = rat_of(1, 3);
    CHECK(modular_full_rank_probe(id, rng));

    DenseMatrix<Rat> defic(3, 4);
    for (std::size_t j = 0; j < 4; ++j) {
        defic.at(0, j) = Rat(static_cast<long>(j) + 1);
        defic.at(1, j) = Rat(2 * (static_cast<long>(j) + 1));
        defic.at(2, j) = Rat(static_cast<long>(j));
    }
    CHECK(!modular_full_rank_probe(defic, rng));
    CHECK(rank_exact(defic) == 2);

    // A denominator that is exactly the chosen prime poisons the reduction
    // and must be reported, not mis-ranked.
    std::uint64_t p = random_prime_near_2_62(rng);
    DenseMatrix<Rat> poisoned(1, 1);
    poisoned.at(0, 0) = Rat(1) / Rat(Int(p));
    CHECK(!rank_mod_prime(poisoned, p).has_value());
    CHECK(rank_mod_prime(id, p).value() == 3);
}

TEST_CASE("fraction-free nullspace over the rational function field") {
    RatFunc t = t_ratfunc();
    DenseMatrix<RatFunc> m(2, 2);
    m.at(0, 0) = t;
    m.at(0, 1) = t * t;
    m.at(1, 0) = RatFunc(1);
    m.at(1, 1) = t;
    auto ns = nullspace_qt(m);
    REQUIRE(ns.size() == 1);
    CHECK(ns[0][0] == -t);
    CHECK(ns[0][1] == RatFunc(1));

    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 6; ++trial) {
        DenseMatrix<RatFunc> a(4, 6);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 6; ++j)
                a.at(i, j) = random_ratfunc(rng, 2, 3);
        auto basis = nullspace_qt(a);
        for (auto& v : basis) CHECK(annihilates(a, v));

        // Cross-check the dimension against plain field elimination.
        RowReducer<RatFunc> red;
        for (std::size_t i = 0; i < 4; ++i) red.feed(a.row(i));
        CHECK(red.rank() + basis.size() == 6);
    }

    // Rank-deficient rows that need the exact Bareiss division.
    DenseMatrix<RatFunc> b(3, 4);
    for (std::size_t j = 0; j < 4; ++j) {
        RatFunc tj = t.pow(static_cast<long>(j));
        b.at(0, j) = tj;
        b.at(1, j) = (t + RatFunc(1)) * tj;
        b.at(2, j) = tj * tj;
    }
    auto nb = nullspace_qt(b);
    CHECK(nb.size() == 2);
    for (auto& v : nb) CHECK(annihilates(b, v));
}
