#pragma once

#include <cstdint>
#include <random>

#include "pdx/linalg.hpp"

namespace pdx {

constexpr std::uint64_t kDefaultSeed = 20260101;

// Seeded generator whose integer draws do not depend on the standard
// library's distribution implementations, so reports stay reproducible.
class Rng {
public:
    explicit Rng(std::uint64_t seed = kDefaultSeed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }
    // Uniform on [lo, hi]; the modulo bias is irrelevant at these ranges.
    long long uniform(long long lo, long long hi) {
        auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<long long>(eng_() % span);
    }
    bool coin() { return (eng_() >> 63) != 0; }
    Rational small_rational(long long max_num = 9, long long max_den = 5) {
        return Rational(uniform(-max_num, max_num), uniform(1, max_den));
    }
    Vector small_vector(std::size_t n, long long max_abs = 3) {
        Vector v(n);
        for (auto& x : v) x = uniform(-max_abs, max_abs);
        return v;
    }
    double uniform_real(double lo, double hi) {
        return lo + (hi - lo) * static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

private:
    std::mt19937_64 eng_;
};

// Random invertible integer matrix; a unit lower times unit upper triangular
// product keeps entries small and the determinant equal to +-1 before scaling.
Matrix random_invertible(Rng& rng, std::size_t n, long long max_abs = 2);
// Block lower triangular [[A, 0], [C, D]] with A of size n_t: maps the span of
// the last dim - n_t coordinates into itself. Always invertible.
Matrix random_flag_preserving(Rng& rng, std::size_t n_t, std::size_t dim, long long max_abs = 2);

}  // namespace pdx
