#include <doctest.h>

#include "pdx/darboux.hpp"
#include "pdx/random.hpp"

using namespace pdx;

TEST_CASE("poly round trip smoke") {
    Rng rng(7);
    for (auto [N, nh, k] : std::vector<std::tuple<int, int, int>>{{2, 2, 1}, {3, 1, 2}, {4, 1, 2}, {3, 2, 2}, {4, 1, 3}}) {
        auto m = canonical_poly_model(N, nh, k);
        Matrix g = random_invertible(rng, m.form.dim());
        VectorValuedForm w = pullback(m.form, inverse(g));
        Subspace L = image(g, m.L);
        CHECK(check_polylagrangian(L, w));
        Detection det = find_polylagrangian(w);
        REQUIRE(det.L);
        CHECK(*det.L == L);
        DarbouxBasis b = darboux_basis_poly(w, *det.L);
        CHECK(pullback(w, b.basis) == canonical_poly_pattern(N, nh, k));
    }
}

TEST_CASE("multi round trip smoke") {
    Rng rng(9);
    for (auto [N, n, k, r] : std::vector<std::tuple<int, int, int, int>>{{1, 2, 2, 2}, {2, 2, 2, 2}, {2, 3, 2, 3}, {2, 2, 3, 2}, {1, 2, 2, 1}}) {
        auto m = canonical_multi_model(N, n, k, r);
        std::size_t d = m.form.dim();
        Matrix g = random_invertible(rng, d);
        for (std::size_t i = 0; i < std::size_t(n); ++i)
            for (std::size_t j = n; j < d; ++j) g(i, j) = 0;
        if (determinant(g).is_zero()) continue;
        AlternatingForm w = pullback(m.form, inverse(g));
        Flag flag(image(g, m.flag.vertical()), g * m.flag.splitting());
        Subspace L = image(g, m.L);
        CHECK(check_multilagrangian(L, w, flag, r));
        DarbouxBasis b = darboux_basis_multi(w, flag);
        std::size_t Np = r == 1 ? 0 : N;
        std::size_t extra = r == 1 ? N : 0;
        AlternatingForm pb = pullback(w, b.basis);
        CHECK(pb == canonical_multi_pattern(Np, n, k, r, extra));
        CHECK(symbol(pb, Flag::standard(n, d - n), r) == canonical_symbol_pattern(Np, n, k, r, extra));
    }
}
