#include <doctest.h>

#include "pdx/exterior.hpp"
#include "support.hpp"

using namespace pdx;
using namespace pdx::testing;

namespace {

Rational sign_of(std::size_t p) { return p % 2 ? Rational(-1) : Rational(1); }

// Determinant of the k x k matrix (v_j[i]) for i in idx, by permutation
// expansion; independent of the library's elimination.
Rational minor_by_permutations(const std::vector<std::size_t>& idx, const std::vector<Vector>& vs) {
    std::vector<std::size_t> perm(idx.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    Rational total;
    do {
        std::size_t inversions = 0;
        for (std::size_t i = 0; i < perm.size(); ++i)
            for (std::size_t j = i + 1; j < perm.size(); ++j) inversions += perm[i] > perm[j];
        Rational prod = sign_of(inversions);
        for (std::size_t i = 0; i < perm.size(); ++i) prod *= vs[perm[i]][idx[i]];
        total += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

}  // namespace

TEST_CASE("index helpers") {
    CHECK(binom(5, 2) == 10);
    CHECK(binom(2, 5) == 0);
    auto c = combinations(4, 2);
    REQUIRE(c.size() == 6);
    CHECK(c.front() == (bit(0) | bit(1)));
    CHECK(c.back() == (bit(2) | bit(3)));
    for (std::size_t n = 0; n <= 7; ++n)
        for (std::size_t k = 0; k <= n; ++k) {
            std::vector<bool> seen(binom(n, k), false);
            for (Mask m : combinations(n, k)) {
                std::size_t r = colex_rank(m);
                REQUIRE(r < seen.size());
                CHECK_FALSE(seen[r]);
                seen[r] = true;
                CHECK(colex_unrank(r, k) == m);
            }
        }
}

TEST_CASE("monomial ordering signs and evaluation") {
    auto a = AlternatingForm::monomial(3, {1, 0});
    CHECK(a == AlternatingForm::monomial(3, {0, 1}) * Rational(-1));
    CHECK(AlternatingForm::monomial(3, {0, 0}).is_zero());
    CHECK(a.str() == "-e1^e2");
    Rng rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t dim = rng.uniform(2, 5), k = rng.uniform(1, dim);
        AlternatingForm w = random_form(rng, dim, k);
        std::vector<Vector> vs;
        for (std::size_t i = 0; i < k; ++i) vs.push_back(rng.small_vector(dim));
        Rational expect;
        for (const auto& [m, c] : w.terms()) expect += c * minor_by_permutations(indices_of(m), vs);
        CHECK(w.evaluate(vs) == expect);
        CHECK(AlternatingForm::from_vector(dim, k, w.to_vector()) == w);
    }
}

TEST_CASE("wedge is graded commutative and associative") {
    for (auto seed : kPropertySeeds) {
        Rng rng(seed);
        for (int trial = 0; trial < 40; ++trial) {
            std::size_t dim = rng.uniform(1, 6);
            std::size_t p = rng.uniform(0, std::min<std::size_t>(3, dim));
            std::size_t q = rng.uniform(0, std::min<std::size_t>(3, dim));
            std::size_t r = rng.uniform(0, std::min<std::size_t>(3, dim));
            auto a = random_form(rng, dim, p), b = random_form(rng, dim, q), c = random_form(rng, dim, r);
            CHECK(wedge(a, b) == sign_of(p * q) * wedge(b, a));
            CHECK(wedge(wedge(a, b), c) == wedge(a, wedge(b, c)));
        }
    }
}

TEST_CASE("contraction is an antiderivation") {
    for (auto seed : kPropertySeeds) {
        Rng rng(seed);
        for (int trial = 0; trial < 40; ++trial) {
            std::size_t dim = rng.uniform(1, 6);
            std::size_t p = rng.uniform(1, std::min<std::size_t>(3, dim));
            std::size_t q = rng.uniform(0, std::min<std::size_t>(3, dim));
            auto a = random_form(rng, dim, p), b = random_form(rng, dim, q);
            Vector v = rng.small_vector(dim);
            AlternatingForm rhs = wedge(contract(v, a), b);
            if (q > 0) rhs += sign_of(p) * wedge(a, contract(v, b));
            CHECK(contract(v, wedge(a, b)) == rhs);
            if (p >= 2) CHECK(contract(v, contract(v, a)).is_zero());
        }
    }
}

TEST_CASE("projection commutes with contraction") {
    for (auto seed : kPropertySeeds) {
        Rng rng(seed);
        for (int trial = 0; trial < 40; ++trial) {
            std::size_t dim = rng.uniform(2, 6), k = rng.uniform(1, std::min<std::size_t>(3, dim));
            std::size_t nv = rng.uniform(1, 3);
            VectorValuedForm w = random_vv_form(rng, dim, k, nv);
            Vector v = rng.small_vector(dim), t = rng.small_vector(nv);
            CHECK(contract(v, project(w, t)) == project(contract(v, w), t));
        }
    }
}

TEST_CASE("pullback is functorial and respects wedge") {
    Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t dim = rng.uniform(2, 5);
        auto a = random_form(rng, dim, 1), b = random_form(rng, dim, 2);
        Matrix m = random_invertible(rng, dim), n = random_invertible(rng, dim);
        CHECK(pullback(pullback(b, m), n) == pullback(b, m * n));
        CHECK(pullback(wedge(a, b), m) == wedge(pullback(a, m), pullback(b, m)));
        CHECK(pullback(b, Matrix::identity(dim)) == b);
    }
}

TEST_CASE("kernel of the flat map is the common kernel of the components") {
    for (auto seed : kPropertySeeds) {
        Rng rng(seed);
        for (int trial = 0; trial < 30; ++trial) {
            std::size_t dim = rng.uniform(2, 6), k = rng.uniform(1, std::min<std::size_t>(3, dim));
            std::size_t nv = rng.uniform(1, 3);
            VectorValuedForm w = random_vv_form(rng, dim, k, nv, 0.3);
            Subspace lhs = kernel(flat_matrix(w, Subspace::full(dim)));
            Subspace rhs = Subspace::full(dim);
            for (const auto& c : w.components()) rhs = intersect(rhs, kernel(flat_matrix(c, Subspace::full(dim))));
            CHECK(lhs == rhs);
            for (const auto& v : lhs.basis_vectors()) CHECK(contract(v, w).is_zero());
        }
    }
}

TEST_CASE("horizontal_dim matches monomial enumeration") {
    for (std::size_t dv = 0; dv <= 5; ++dv)
        for (std::size_t dt = 0; dt <= 5; ++dt)
            for (std::size_t r = 0; r <= 5; ++r)
                for (std::size_t s = 0; s <= 5; ++s)
                    CHECK(horizontal_dim(r, s, dv, dt) == count_horizontal_monomials(r, s, dv, dt));
}

TEST_CASE("horizontal_dim is the dimension of the horizontal subspace for a skew flag") {
    // The space of r-forms killed by any s+1 vertical contractions, computed as
    // the null space of the stacked contraction maps.
    Rng rng(29);
    for (std::size_t dt = 0; dt <= 3; ++dt)
        for (std::size_t dv = 1; dv <= 3; ++dv) {
            std::size_t n = dt + dv;
            Matrix g = random_invertible(rng, n);
            std::vector<Vector> vcols;
            for (std::size_t j = dt; j < n; ++j) vcols.push_back(g.col(j));
            Subspace V = Subspace::span(n, vcols);
            for (std::size_t r = 1; r <= n; ++r)
                for (std::size_t s = 0; s < r; ++s) {
                    std::vector<Mask> basis = combinations(n, r);
                    std::vector<Vector> cols;
                    for (Mask m : basis) {
                        AlternatingForm f = AlternatingForm::monomial(n, indices_of(m));
                        Vector image;
                        for (Mask sel : combinations(dv, s + 1)) {
                            AlternatingForm h = f;
                            for (auto j : indices_of(sel)) h = contract(V.basis_vector(j), h);
                            Vector part = h.to_vector();
                            image.insert(image.end(), part.begin(), part.end());
                        }
                        cols.push_back(image);
                    }
                    std::size_t null = basis.size();
                    if (!cols.front().empty()) null = kernel(Matrix::from_columns(cols, cols.front().size())).dim();
                    CHECK(null == horizontal_dim(r, s, dv, dt));
                }
        }
}

TEST_CASE("horizontality degree of random forms") {
    Rng rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t nt = rng.uniform(1, 3), nv = rng.uniform(1, 3), k = rng.uniform(1, 3);
        Flag flag = Flag::standard(nt, nv);
        std::size_t s = rng.uniform(0, k);
        // monomials with at most s vertical factors, then a flag-preserving change of basis
        std::vector<AlternatingForm::Term> terms;
        Mask vmask = 0;
        for (std::size_t i = nt; i < nt + nv; ++i) vmask |= bit(i);
        for (Mask m : combinations(nt + nv, k))
            if (static_cast<std::size_t>(popcount(m & vmask)) <= s) terms.emplace_back(m, rng.small_rational());
        AlternatingForm w = AlternatingForm::from_terms(nt + nv, k, terms);
        Matrix g = random_flag_preserving(rng, nt, nt + nv);
        AlternatingForm pw = pullback(w, g);
        CHECK(horizontality_degree(pw, flag) == horizontality_degree(w, flag));
        CHECK(horizontality_degree(w, flag) <= s);
    }
}

TEST_CASE("flag bookkeeping") {
    Flag f = Flag::standard(2, 3);
    CHECK(f.dim_t() == 2);
    CHECK(f.dim_v() == 3);
    Vector w{Rational(4), Rational(5), Rational(1), Rational(2), Rational(3)};
    CHECK(f.project(w) == Vector{Rational(4), Rational(5)});
    Matrix bad = Matrix::from_columns({unit_vector(5, 4)}, 5);
    CHECK_THROWS_AS(Flag(f.vertical(), bad), std::invalid_argument);
}

TEST_CASE("wedge powers and symmetric polynomial evaluation") {
    Rng rng(37);
    VectorValuedForm w = random_vv_form(rng, 5, 2, 2);
    CHECK(wedge_power(w, {1, 1}) == wedge(w.component(0), w.component(1)));
    CHECK(wedge_power(w, {2, 0}) == wedge(w.component(0), w.component(0)));
    SymmetricPoly p = SymmetricPoly::monomial({1, 1}, Rational(3));
    CHECK(poly_eval(p, w) == Rational(3) * wedge(w.component(0), w.component(1)));
}

TEST_CASE("projected square in the constant-rank example carries a factor 2") {
    // w1 = dx^dy + du^dv, w2 = dx^du - dy^dv; (t1 w1 + t2 w2)^2 = 2 (t1^2 + t2^2) dx^dy^du^dv.
    auto w1 = AlternatingForm::monomial(4, {0, 1}) + AlternatingForm::monomial(4, {2, 3});
    auto w2 = AlternatingForm::monomial(4, {0, 2}) - AlternatingForm::monomial(4, {1, 3});
    VectorValuedForm w({w1, w2});
    auto vol = AlternatingForm::monomial(4, {0, 1, 2, 3});
    Rng rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        Vector t = rng.small_vector(2);
        AlternatingForm wt = project(w, t);
        CHECK(wedge(wt, wt) == Rational(2) * (t[0] * t[0] + t[1] * t[1]) * vol);
        CHECK(wedge(wedge(wt, wt), wt).is_zero());
    }
    CHECK(wedge(w1, w2).is_zero());
}
