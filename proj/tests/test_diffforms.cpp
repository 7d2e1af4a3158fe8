#include <doctest.h>

#include "pdx/diffforms.hpp"
#include "pdx/random.hpp"
#include "support.hpp"

using namespace pdx;

namespace {

Polynomial var(std::size_t n, std::size_t i) { return Polynomial::variable(n, i); }

PolyForm one_form(std::size_t dim, std::size_t dim_k, std::size_t i, const Polynomial& p) {
    PolyForm f(dim, 1, dim_k);
    f.add_term(bit(i), p);
    return f;
}

}  // namespace

TEST_CASE("polynomial basics") {
    Polynomial x = var(2, 0), y = var(2, 1);
    Polynomial p = x * x * y + Polynomial::constant(2, 3);
    CHECK(p.degree() == 3);
    CHECK(p.derivative(0) == Rational(2) * x * y);
    CHECK(p.evaluate(Vector{Rational(2), Rational(5)}) == Rational(23));
    CHECK(p.compose({y, x}) == y * y * x + Polynomial::constant(2, 3));
    CHECK(p.str() == "3 + x1^2*x2");
}

TEST_CASE("d squares to zero and obeys Leibniz") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t dim = 4;
        PolyForm a(dim, 1, 2), b(dim, 1, 2);
        for (std::size_t i = 0; i < dim; ++i) {
            Polynomial pa(dim), pb(dim);
            for (int t = 0; t < 3; ++t) {
                Polynomial::Exponent e(dim, 0);
                e[rng.uniform(0, 3)] += rng.uniform(0, 2);
                e[rng.uniform(0, 3)] += 1;
                pa.add_term(e, rng.small_rational());
                e[rng.uniform(0, 3)] += 1;
                pb.add_term(e, rng.small_rational());
            }
            a.add_term(bit(i), pa);
            b.add_term(bit(i), pb);
        }
        CHECK(d(d(a)).is_zero());
        CHECK(d(wedge(a, b)) == wedge(d(a), b) - wedge(a, d(b)));
    }
}

TEST_CASE("homotopy of dx^dy is -y dx") {
    PolyForm w(2, 2, 1);
    w.add_term(bit(0) | bit(1), Polynomial::constant(2, 1));
    PolyForm theta = homotopy_primitive(w, 1);
    CHECK(theta == one_form(2, 1, 0, Rational(-1) * var(2, 1)));
    CHECK(d(theta) == w);
    CHECK(theta.vertical_degree() == 0);
}

TEST_CASE("homotopy rejects bad input") {
    PolyForm notclosed = one_form(2, 1, 0, var(2, 1));
    CHECK_THROWS_AS(homotopy_primitive(notclosed, 1), std::invalid_argument);
    PolyForm vertical(2, 1, 1);
    vertical.add_term(bit(1), Polynomial::constant(2, 1));
    CHECK_THROWS_AS(homotopy_primitive(vertical, 0), std::invalid_argument);
}

TEST_CASE("pullback commutes with d") {
    std::size_t n = 3;
    std::vector<Polynomial> phi{var(n, 0) + var(n, 1) * var(n, 1), var(n, 1), var(n, 2) + var(n, 0) * var(n, 1)};
    PolyForm w(n, 1, 1);
    w.add_term(bit(0), var(n, 2) * var(n, 2));
    w.add_term(bit(2), var(n, 1));
    CHECK(pullback(d(w), phi) == d(pullback(w, phi)));
}

TEST_CASE("chart symbol of dx^dy") {
    PolyForm w(2, 2, 1);
    w.add_term(bit(0) | bit(1), Polynomial::constant(2, 1));
    auto sym = chart_symbol(w, 1);
    REQUIRE(sym.size() == 1);
    CHECK(sym[0] == Rational(-1) * one_form(2, 1, 1, Polynomial::constant(2, 1)));
}

TEST_CASE("involutivity of coordinate and Heisenberg distributions") {
    std::size_t n = 3;
    Polynomial zero(n), one = Polynomial::constant(n, 1);
    VectorField dx{one, zero, zero}, dy{zero, one, zero};
    CHECK(involutive({dx, dy}).involutive);
    // x-d/dz twist: [d/dx, d/dy + x d/dz] = d/dz, not in the span
    VectorField twist{zero, one, var(n, 0)};
    auto res = involutive({dx, twist});
    CHECK_FALSE(res.involutive);
    CHECK(res.rank == 2);
}

TEST_CASE("su(2) example") {
    auto g = LieAlgebraData::su2();
    CHECK(g.bracket(unit_vector(3, 0), unit_vector(3, 1)) == unit_vector(3, 2));
    // d alpha^1 = -alpha^2 ^ alpha^3
    auto a1 = AlternatingForm::covector(unit_vector(3, 0));
    CHECK(ce_d(g, a1) == AlternatingForm::monomial(3, {1, 2}) * Rational(-1));
    auto rep = su2_example(su2_default_frame());
    CHECK(rep.betas_closed);
    CHECK(rep.ce_d_squared_zero);
    CHECK(rep.L_isotropic);
    CHECK(rep.polylagrangian);
    CHECK_FALSE(rep.involutive);
    CHECK(rep.L_dim == 2);
    Matrix bad(3, 2);
    bad(0, 0) = 1;
    bad(0, 1) = 2;
    CHECK_THROWS_AS(su2_example(bad), std::invalid_argument);
}

TEST_CASE("Jacobi violation is rejected") {
    std::vector<Rational> c(27);
    c[(0 * 3 + 1) * 3 + 2] = 1;
    c[(0 * 3 + 2) * 3 + 1] = -1;
    c[(1 * 3 + 0) * 3 + 1] = 1;
    c[(1 * 3 + 1) * 3 + 0] = -1;
    CHECK_THROWS_AS(LieAlgebraData(3, c), std::invalid_argument);
}

TEST_CASE("d and d_V square to zero on random forms") {
    using namespace pdx::testing;
    for (auto seed : kPropertySeeds) {
        Rng rng(seed);
        for (std::size_t m = 1; m <= 5; ++m)
            for (std::size_t deg = 0; deg <= std::min<std::size_t>(3, m); ++deg) {
                std::size_t dim_k = rng.uniform(0, m);
                PolyForm w = random_polyform(rng, m, deg, dim_k, deg);
                CHECK(d(d(w)).is_zero());
                PolyForm v = random_polyform(rng, m, std::min(deg, m - dim_k), dim_k, m);
                PolyForm vert(m, v.degree(), dim_k);
                for (const auto& [mask, p] : v.coeffs())
                    if ((mask & ~v.vertical_mask()) == 0) vert.add_term(mask, p);
                CHECK(d_vertical(d_vertical(vert)).is_zero());
            }
    }
}

TEST_CASE("homotopy primitive of random closed forms") {
    using namespace pdx::testing;
    for (auto seed : kPropertySeeds) {
        Rng rng(seed);
        for (std::size_t k = 1; k <= 3; ++k)
            for (std::size_t m = k; m <= 5; ++m)
                for (int trial = 0; trial < 5; ++trial) {
                    std::size_t dim_k = rng.uniform(0, m);
                    std::size_t r = rng.uniform(1, k);
                    PolyForm w = random_closed_polyform(rng, m, k, dim_k, r);
                    REQUIRE(is_closed(w));
                    REQUIRE(w.vertical_degree() <= r);
                    PolyForm theta = homotopy_primitive(w, r);
                    CHECK(d(theta) == w);
                    CHECK(all_vertical_contractions_vanish(theta, r));
                }
    }
}

TEST_CASE("symbol of a form with horizontal differential is vertically closed") {
    using namespace pdx::testing;
    Rng rng(67);
    int open_symbols = 0;
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t m = rng.uniform(3, 5), dim_k = rng.uniform(1, m - 1);
        std::size_t deg = rng.uniform(2, std::min<std::size_t>(3, m));
        std::size_t r = rng.uniform(1, std::min(deg, m - dim_k));
        // closed part plus a term with at most r-1 dy factors keeps d w at most r vertical
        PolyForm w = random_closed_polyform(rng, m, deg, dim_k, r) + random_polyform(rng, m, deg, dim_k, r - 1);
        REQUIRE(d(w).vertical_degree() <= r);
        for (const auto& s : chart_symbol(w, r)) CHECK(d_vertical(s).is_zero());
        // Without the condition on d w the symbol is usually not closed.
        PolyForm bad = random_polyform(rng, m, deg, dim_k, r);
        if (d(bad).vertical_degree() > r)
            for (const auto& s : chart_symbol(bad, r)) open_symbols += !d_vertical(s).is_zero();
    }
    CHECK(open_symbols > 0);
}

TEST_CASE("ce_d squares to zero on conjugated three-dimensional algebras") {
    Rng rng(71);
    // su(2), Heisenberg and a solvable algebra [e1,e2] = e2, [e1,e3] = e3
    std::vector<LieAlgebraData> bases{LieAlgebraData::su2()};
    std::vector<Rational> heis(27), solv(27);
    heis[(2 * 3 + 0) * 3 + 1] = 1;
    heis[(2 * 3 + 1) * 3 + 0] = -1;
    solv[(1 * 3 + 0) * 3 + 1] = 1;
    solv[(1 * 3 + 1) * 3 + 0] = -1;
    solv[(2 * 3 + 0) * 3 + 2] = 1;
    solv[(2 * 3 + 2) * 3 + 0] = -1;
    bases.emplace_back(3, heis);
    bases.emplace_back(3, solv);
    for (const auto& g0 : bases)
        for (int trial = 0; trial < 5; ++trial) {
            Matrix p = random_invertible(rng, 3), pinv = inverse(p);
            std::vector<Rational> c(27);
            for (std::size_t b = 0; b < 3; ++b)
                for (std::size_t cc = 0; cc < 3; ++cc) {
                    Vector br = pinv.apply(g0.bracket(p.col(b), p.col(cc)));
                    for (std::size_t a = 0; a < 3; ++a) c[(a * 3 + b) * 3 + cc] = br[a];
                }
            LieAlgebraData g(3, c);
            for (int i = 0; i < 5; ++i) {
                auto a = AlternatingForm::covector(rng.small_vector(3));
                CHECK(ce_d(g, ce_d(g, a)).is_zero());
            }
            // top forms are closed
            CHECK(ce_d(g, AlternatingForm::monomial(3, {0, 1, 2})).is_zero());
        }
}

TEST_CASE("su(2) example with a second frame") {
    Matrix frame(3, 2);
    frame(0, 0) = 1;
    frame(1, 0) = 2;
    frame(1, 1) = -1;
    frame(2, 1) = 3;
    auto rep = su2_example(frame);
    CHECK(rep.betas_closed);
    CHECK(rep.ce_d_squared_zero);
    CHECK(rep.polylagrangian);
    CHECK_FALSE(rep.involutive);
    CHECK(rep.L == Subspace::column_space(frame));
}

TEST_CASE("moser alpha for a constant form is zero") {
    PolyForm w0 = PolyForm::constant(AlternatingForm::monomial(4, {0, 2}) + AlternatingForm::monomial(4, {1, 3}), 2);
    CHECK(moser_alpha(w0, w0).is_zero());
}
