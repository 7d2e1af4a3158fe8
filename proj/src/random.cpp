#include "pdx/random.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace pdx {

Matrix random_invertible(Rng& rng, std::size_t n, long long max_abs) {
    Matrix lo = Matrix::identity(n), up = Matrix::identity(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) {
            lo(i, j) = rng.uniform(-max_abs, max_abs);
            up(j, i) = rng.uniform(-max_abs, max_abs);
        }
    // a random row permutation so the pivots are not always on the diagonal
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[static_cast<std::size_t>(rng.uniform(0, i - 1))]);
    Matrix p(n, n);
    for (std::size_t i = 0; i < n; ++i) p(i, perm[i]) = 1;
    return p * lo * up;
}

Matrix random_flag_preserving(Rng& rng, std::size_t n_t, std::size_t dim, long long max_abs) {
    if (n_t > dim) throw std::invalid_argument("splitting larger than the space");
    Matrix a = random_invertible(rng, n_t, max_abs), dd = random_invertible(rng, dim - n_t, max_abs);
    Matrix g(dim, dim);
    for (std::size_t i = 0; i < n_t; ++i)
        for (std::size_t j = 0; j < n_t; ++j) g(i, j) = a(i, j);
    for (std::size_t i = n_t; i < dim; ++i) {
        for (std::size_t j = 0; j < n_t; ++j) g(i, j) = rng.uniform(-max_abs, max_abs);
        for (std::size_t j = n_t; j < dim; ++j) g(i, j) = dd(i - n_t, j - n_t);
    }
    return g;
}

}  // namespace pdx
