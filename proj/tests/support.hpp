#pragma once

#include <random>
#include <vector>

#include "lexseq.hpp"

namespace testing_support {

using namespace lexseq;

inline std::mt19937& rng() {
    static std::mt19937 gen(20261014u);
    return gen;
}

inline long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng()); }

inline RationalMatrix random_matrix(std::size_t rows, std::size_t cols, long lo = -3, long hi = 3) {
    RationalMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = Rational(uniform(lo, hi), uniform(1, 3));
    return m;
}

inline Form random_form(int n, int degree, long lo = -3, long hi = 3) {
    Vector v(binomial(n, degree));
    for (auto& x : v) x = uniform(lo, hi);
    return Form::from_coordinates(n, degree, v);
}

/// Independent sign oracle: (-1)^(number of inversions).
inline int inversion_sign(const std::vector<int>& seq) {
    int inv = 0;
    for (std::size_t a = 0; a < seq.size(); ++a)
        for (std::size_t b = a + 1; b < seq.size(); ++b) {
            if (seq[a] == seq[b]) return 0;
            if (seq[a] > seq[b]) ++inv;
        }
    return inv % 2 ? -1 : 1;
}

/// Binomial coefficient by the multiplicative formula, independent of the
/// tuple enumeration used by the library.
inline long choose(long n, long k) {
    if (k < 0 || k > n) return 0;
    long r = 1;
    for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace testing_support
