#include <doctest.h>

#include "pdx/darboux.hpp"
#include "pdx/lagrangian.hpp"
#include "support.hpp"

using namespace pdx;
using namespace pdx::testing;

namespace {

AlternatingForm mono(std::size_t dim, std::vector<std::size_t> idx, const Rational& c = 1) {
    return AlternatingForm::monomial(dim, idx, c);
}

VectorValuedForm cross_product_form() {
    return VectorValuedForm({mono(3, {1, 2}), mono(3, {0, 2}, -1), mono(3, {0, 1})});
}

VectorValuedForm five_dim_form() {
    return VectorValuedForm({mono(5, {0, 3}) + mono(5, {1, 2}), mono(5, {0, 2}) - mono(5, {1, 4})});
}

VectorValuedForm constant_rank_form() {
    return VectorValuedForm({mono(4, {0, 1}) + mono(4, {2, 3}), mono(4, {0, 2}) - mono(4, {1, 3})});
}

Subspace span(std::size_t n, std::vector<std::size_t> idx) {
    std::vector<Vector> vs;
    for (auto i : idx) vs.push_back(unit_vector(n, i));
    return Subspace::span(n, vs);
}

bool has_diagnostic(const Detection& det, const std::string& needle) {
    for (const auto& d : det.diagnostics)
        if (d.find(needle) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST_CASE("constant rank without uniform rank") {
    VectorValuedForm w = constant_rank_form();
    CHECK(wedge(w.component(0), w.component(1)).is_zero());
    CHECK(constant_rank_sampled(w, 100) == std::optional<std::size_t>(2));
    CHECK_FALSE(uniform_rank(w));
    CHECK(kernel_of_form(w).dim() == 0);
    auto rep = analyze_poly(w);
    CHECK(rep.classification == Classification::None);
    CHECK_FALSE(rep.lagrangian_subspace);
}

TEST_CASE("cross product form has no polylagrangian subspace") {
    VectorValuedForm w = cross_product_form();
    CHECK(uniform_rank(w) == std::optional<std::size_t>(1));
    CHECK(kernel_of_form(w).dim() == 0);
    Detection det = find_polylagrangian(w);
    CHECK(det.status == DetectionStatus::ProvedAbsent);
    CHECK_FALSE(det.L);
    CHECK(has_diagnostic(det, "sum of kernels = full space, not isotropic"));
    Subspace k1 = kernel_of_form(w.component(0)), k2 = kernel_of_form(w.component(1));
    CHECK(mutually_orthogonal(k1, k2, w.component(0)));
    CHECK(mutually_orthogonal(k1, k2, w.component(1)));
    CHECK_FALSE(mutually_orthogonal(k1, k2, w.component(2)));
    CHECK(prop_A2_check(w));
}

TEST_CASE("five-dimensional uniform rank 2 form") {
    VectorValuedForm w = five_dim_form();
    CHECK(uniform_rank(w) == std::optional<std::size_t>(2));
    CHECK(kernel_of_form(w).dim() == 0);
    Rng rng(13);
    std::vector<Vector> ts{{1, 0}, {0, 1}, {1, 1}};
    for (int i = 0; i < 10; ++i) {
        Vector t = rng.small_vector(2);
        if (!is_zero(t)) ts.push_back(t);
    }
    for (const auto& t : ts) {
        Vector expect(5);
        expect[2] = t[0] * t[1];
        expect[3] = -t[1] * t[1];
        expect[4] = t[0] * t[0];
        CHECK(kernel_of_form(project(w, t)) == Subspace::span(5, {expect}));
    }
    Detection det = find_polylagrangian(w);
    CHECK(det.status == DetectionStatus::ProvedAbsent);
    KernelCandidates kc = kernel_candidates(w);
    CHECK(kc.required_dim == std::optional<std::uint64_t>(4));
    CHECK(kc.component_kernel_sum.dim() == 2);
    CHECK(kc.projection_kernel_sum.dim() == 3);
    CHECK(has_diagnostic(det, "both too small"));
    Subspace L = greedy_maximal_isotropic(w, span(5, {2}));
    CHECK(L == span(5, {2, 3, 4}));
    CHECK(is_maximal_isotropic(L, w));
    CHECK(prop_A2_check(w));
}

TEST_CASE("canonical models: kernel containment and uniform rank") {
    for (auto seed : kPropertySeeds) {
        Rng rng(seed);
        for (int trial = 0; trial < 25; ++trial) {
            PolyInstance inst = poly_instance(rng, static_cast<int>(trial % 2));
            if (!check_polylagrangian(inst.L, inst.w)) continue;
            Subspace ker = kernel_of_form(inst.w);
            CHECK(inst.L.contains(ker));
            for (std::size_t a = 0; a < inst.w.value_dim(); ++a)
                CHECK(inst.L.contains(kernel_of_form(project(inst.w, unit_vector(inst.w.value_dim(), a)))));
            for (const auto& t : covector_grid(inst.w.value_dim()))
                CHECK(inst.L.contains(kernel_of_form(project(inst.w, t))));
            if (inst.w.degree() == 2 && ker.dim() == 0) {
                CHECK(prop_A1_check(inst.w, inst.L));
                CHECK(prop_A2_check(inst.w));
            }
        }
    }
}

TEST_CASE("dimension criterion agrees with the subspace test") {
    for (auto seed : kPropertySeeds) {
        Rng rng(seed);
        int agree_true = 0, agree_false = 0;
        for (int trial = 0; trial < 40; ++trial) {
            PolyInstance pi = poly_instance(rng, trial % 3);
            bool lhs = check_polylagrangian(pi.L, pi.w);
            CHECK(lhs == dimension_criterion_poly(pi.L, pi.w).value);
            (lhs ? agree_true : agree_false)++;
            MultiInstance mi = multi_instance(rng, trial % 3);
            bool mlhs = check_multilagrangian(mi.L, mi.w, mi.flag, mi.r);
            CHECK(mlhs == dimension_criterion_multi(mi.L, mi.w, mi.flag, mi.r).value);
        }
        CHECK(agree_true > 0);
        CHECK(agree_false > 0);
    }
}

TEST_CASE("polylagrangian property is GL-equivariant") {
    Rng rng(43);
    for (int trial = 0; trial < 30; ++trial) {
        PolyInstance inst = poly_instance(rng, trial % 3);
        Matrix m = random_invertible(rng, inst.w.dim());
        bool before = check_polylagrangian(inst.L, inst.w);
        bool after = check_polylagrangian(image(inverse(m), inst.L), pullback(inst.w, m));
        CHECK(before == after);
    }
}

TEST_CASE("multilagrangian property is equivariant under flag-preserving maps") {
    Rng rng(47);
    for (int trial = 0; trial < 30; ++trial) {
        MultiInstance inst = multi_instance(rng, trial % 3);
        std::size_t n = inst.flag.dim_t(), dim = inst.w.dim();
        // Work in adapted coordinates so that a block-triangular map preserves V.
        Matrix a = inst.flag.adapted_basis();
        AlternatingForm w = pullback(inst.w, a);
        Flag flag = Flag::standard(n, dim - n);
        Subspace L = image(inverse(a), inst.L);
        Matrix m = random_flag_preserving(rng, n, dim);
        bool before = check_multilagrangian(L, w, flag, inst.r);
        bool after = check_multilagrangian(image(inverse(m), L), pullback(w, m), flag, inst.r);
        CHECK(before == after);
    }
}

TEST_CASE("detected subspace does not depend on the basis order") {
    Rng rng(53);
    for (auto [N, nh, k] : std::vector<std::array<std::size_t, 3>>{{2, 2, 1}, {3, 2, 1}, {2, 3, 1}, {3, 2, 2}}) {
        auto model = canonical_poly_model(N, nh, k);
        std::size_t dim = model.form.dim();
        Matrix g = random_invertible(rng, dim);
        VectorValuedForm w = pullback(model.form, inverse(g));
        Detection base = find_polylagrangian(w);
        REQUIRE(base.L);
        for (int rep = 0; rep < 3; ++rep) {
            std::vector<std::size_t> perm(dim);
            for (std::size_t i = 0; i < dim; ++i) perm[i] = i;
            for (std::size_t i = dim - 1; i > 0; --i) std::swap(perm[i], perm[rng.uniform(0, i)]);
            Matrix p(dim, dim);
            for (std::size_t i = 0; i < dim; ++i) p(perm[i], i) = 1;
            Detection other = find_polylagrangian(pullback(w, p));
            REQUIRE(other.L);
            CHECK(image(p, *other.L) == *base.L);
        }
    }
}

TEST_CASE("symbol does not depend on the stored splitting") {
    Rng rng(59);
    for (auto [N, n, k, r] : std::vector<std::array<std::size_t, 4>>{{1, 2, 2, 2}, {2, 2, 2, 3}, {1, 3, 2, 2}}) {
        auto model = canonical_multi_model(N, n, k, r);
        std::size_t dim = model.form.dim();
        Matrix s2 = model.flag.splitting();
        for (std::size_t j = 0; j < s2.cols(); ++j)
            for (std::size_t i = n; i < dim; ++i) s2(i, j) = rng.uniform(-2, 2);
        Flag other(model.flag.vertical(), s2);
        CHECK(symbol(model.form, model.flag, r) == symbol(model.form, other, r));
    }
}

TEST_CASE("greedy maximal isotropic subspaces") {
    auto model = canonical_poly_model(2, 2, 1);
    // A generic vector of L is absorbed into L; a single coordinate vector of L
    // is not, because the lowest-index rule then picks up a vector of E.
    Vector generic(model.form.dim());
    for (const auto& v : model.L.basis_vectors())
        for (std::size_t i = 0; i < v.size(); ++i) generic[i] += v[i];
    Subspace seed = Subspace::span(model.form.dim(), {generic});
    CHECK(greedy_maximal_isotropic(model.form, seed) == model.L);
    Subspace coord = Subspace::span(model.form.dim(), {model.L.basis_vector(0)});
    Subspace other = greedy_maximal_isotropic(model.form, coord);
    CHECK(is_maximal_isotropic(other, model.form));
    CHECK_FALSE(model.L.contains(other));

    VectorValuedForm symp({mono(4, {0, 2}) + mono(4, {1, 3})});
    Subspace lag = greedy_maximal_isotropic(symp, span(4, {0}));
    CHECK(lag.dim() == 2);
    CHECK(is_maximal_isotropic(lag, symp));
    CHECK_THROWS_AS(greedy_maximal_isotropic(symp, span(4, {0, 2})), std::invalid_argument);
}

TEST_CASE("large isotropic subspaces of scalar forms sit inside L") {
    // For scalar forms with N > k > 1, a maximal isotropic subspace containing
    // the kernel and of dimension above dim ker + C(N-1,k) + 1 lies inside L.
    Rng rng(61);
    for (auto [N, k] : std::vector<std::pair<std::size_t, std::size_t>>{{3, 2}, {4, 2}, {4, 3}}) {
        auto model = canonical_poly_model(N, 1, k);
        std::size_t dim = model.form.dim();
        Matrix g = random_invertible(rng, dim);
        VectorValuedForm w = pullback(model.form, inverse(g));
        Subspace L = image(g, model.L);
        Detection det = find_polylagrangian(w);
        REQUIRE(det.L);
        CHECK(*det.L == L);
        int large = 0;
        std::size_t bound = binom(N - 1, k) + 1;
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<Vector> seed_vs;
            std::size_t sdim = rng.uniform(1, bound);
            for (std::size_t i = 0; i < sdim; ++i) {
                Vector v(dim);
                for (std::size_t j = 0; j < L.dim(); ++j) {
                    Rational c = rng.uniform(-2, 2);
                    for (std::size_t x = 0; x < dim; ++x) v[x] += c * L.basis_vector(j)[x];
                }
                seed_vs.push_back(v);
            }
            Subspace seed = Subspace::span(dim, seed_vs);
            if (rng.coin()) {
                Subspace wider = sum(seed, Subspace::span(dim, {rng.small_vector(dim)}));
                if (is_isotropic(wider, 1, w)) seed = wider;
            }
            Subspace m = greedy_maximal_isotropic(w, seed);
            if (m.dim() > bound) {
                ++large;
                CHECK(L.contains(m));
            }
        }
        CHECK(large > 0);
    }
}

TEST_CASE("dimension criterion precondition and degenerate inputs") {
    VectorValuedForm w({mono(4, {0, 1, 2})});
    auto res = dimension_criterion_poly(span(4, {0, 1, 2}), w);
    CHECK_FALSE(res.precondition_ok);
    CHECK_FALSE(res.value);
    CHECK_THROWS_AS(find_polylagrangian(VectorValuedForm(4, 2, 2)), std::invalid_argument);
    auto rep = analyze_poly(VectorValuedForm(4, 2, 2));
    CHECK(rep.classification == Classification::None);
}

TEST_CASE("analysis of canonical models") {
    auto rep = analyze_poly(canonical_poly_model(2, 2, 1).form);
    CHECK(rep.classification == Classification::Polysymplectic);
    CHECK(rep.rank_N == std::optional<std::size_t>(2));
    auto deg = analyze_poly(canonical_poly_pattern(2, 2, 1, 1));
    CHECK(deg.classification == Classification::Polypresymplectic);
    auto lag = analyze_poly(canonical_poly_model(3, 1, 2).form);
    CHECK(lag.classification == Classification::Polylagrangian);
    auto mm = canonical_multi_model(1, 2, 2, 2);
    auto mrep = analyze_multi(mm.form, mm.flag);
    CHECK(mrep.classification == Classification::Multisymplectic);
    CHECK(mrep.horizontality == std::optional<std::pair<std::size_t, std::size_t>>({2, 1}));
}
