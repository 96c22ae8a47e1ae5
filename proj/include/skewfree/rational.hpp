#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <string>

#include "skewfree/error.hpp"

namespace skewfree {

// Exact rational scalar. GMP keeps the canonical form we rely on everywhere:
// gcd(num, den) = 1 and den >= 1, so representation equality is value
// equality.
using Rat = mpq_class;
using Int = mpz_class;

inline Rat rat_of(long n, long d = 1) {
    if (d == 0) throw DivisionByZero("rational with zero denominator");
    Rat r(n, d);
    r.canonicalize();
    return r;
}

inline bool is_zero(const Rat& r) { return sgn(r) == 0; }

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

inline Rat rat_inv(const Rat& r) {
    if (is_zero(r)) throw DivisionByZero("inverse of rational zero");
    return Rat(1) / r;
}

inline Rat rat_pow(Rat base, long e) {
    if (e < 0) {
        base = rat_inv(base);
        e = -e;
    }
    Rat acc(1);
    while (e > 0) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

inline std::string to_string(const Rat& r) { return r.get_str(); }

// Uniform small rational for randomized property tests: numerator in
// [-bound, bound], denominator in [1, bound].
inline Rat random_rat(std::mt19937_64& rng, long bound = 9) {
    std::uniform_int_distribution<long> num(-bound, bound);
    std::uniform_int_distribution<long> den(1, bound);
    return rat_of(num(rng), den(rng));
}

}  // namespace skewfree
