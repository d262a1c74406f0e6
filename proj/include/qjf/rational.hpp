#pragma once
#include <gmpxx.h>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qjf {

using Rat = mpq_class;
using Int = mpz_class;

inline bool is_zero(const Rat& r) { return r.get_num() == 0; }

inline Rat rat_from_string(const std::string& s) {
    Rat r;
    if (r.set_str(s, 10) != 0)
        throw std::invalid_argument("bad rational literal: " + s);
    r.canonicalize();
    return r;
}

inline std::string to_string(const Rat& r) { return r.get_str(); }

// n! as an exact integer, n >= 0
inline Int factorial(long n) {
    Int f = 1;
    for (long i = 2; i <= n; ++i) f *= i;
    return f;
}

inline Int binomial(long n, long k) {
    if (k < 0 || k > n) return 0;
    Int b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n),
                 static_cast<unsigned long>(k));
    return b;
}

// Bernoulli numbers B_0, B_1, ... (B_1 = -1/2) via the standard recurrence
std::vector<Rat> bernoulli_list(int nmax);

// sum of d^k over divisors d of n (n >= 1)
Int sigma_divisor(int k, int n);

}  // namespace qjf
