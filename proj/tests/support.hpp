#pragma once

// Hand-rolled generators and brute-force oracles shared by the property
// suites and the acceptance binary.

#include <array>
#include <cstdint>
#include <vector>

#include "pdx/darboux.hpp"
#include "pdx/diffforms.hpp"
#include "pdx/exterior.hpp"
#include "pdx/random.hpp"

namespace pdx::testing {

inline constexpr std::array<std::uint64_t, 3> kPropertySeeds{kDefaultSeed, 7919, 104729};

inline AlternatingForm random_form(Rng& rng, std::size_t dim, std::size_t degree, double density = 0.6) {
    std::vector<AlternatingForm::Term> terms;
    for (Mask m : combinations(dim, degree))
        if (rng.uniform_real(0, 1) < density) terms.emplace_back(m, rng.small_rational());
    return AlternatingForm::from_terms(dim, degree, std::move(terms));
}

inline VectorValuedForm random_vv_form(Rng& rng, std::size_t dim, std::size_t degree, std::size_t value_dim,
                                       double density = 0.6) {
    std::vector<AlternatingForm> comps;
    for (std::size_t a = 0; a < value_dim; ++a) comps.push_back(random_form(rng, dim, degree, density));
    return VectorValuedForm(std::move(comps));
}

inline Subspace random_subspace(Rng& rng, std::size_t ambient, std::size_t dim) {
    std::vector<Vector> vs;
    for (std::size_t i = 0; i < dim; ++i) vs.push_back(rng.small_vector(ambient));
    return Subspace::span(ambient, vs);
}

inline Polynomial random_polynomial(Rng& rng, std::size_t nvars, unsigned max_deg, int nterms) {
    Polynomial p(nvars);
    for (int t = 0; t < nterms; ++t) {
        Polynomial::Exponent e(nvars, 0);
        unsigned deg = static_cast<unsigned>(rng.uniform(0, max_deg));
        for (unsigned j = 0; j < deg && nvars > 0; ++j) ++e[rng.uniform(0, static_cast<long long>(nvars) - 1)];
        p.add_term(e, rng.small_rational());
    }
    return p;
}

// Random polynomial form whose terms carry at most max_vertical dy factors.
inline PolyForm random_polyform(Rng& rng, std::size_t dim, std::size_t degree, std::size_t dim_k,
                                std::size_t max_vertical, unsigned max_deg = 3, double density = 0.5) {
    PolyForm f(dim, degree, dim_k);
    Mask ym = f.vertical_mask();
    for (Mask m : combinations(dim, degree)) {
        if (static_cast<std::size_t>(popcount(m & ym)) > max_vertical) continue;
        if (rng.uniform_real(0, 1) < density) f.add_term(m, random_polynomial(rng, dim, max_deg, 3));
    }
    return f;
}

// Closed form with vertical_degree <= r: d of a primitive with at most r-1 dy
// factors, plus a constant part with at most r.
inline PolyForm random_closed_polyform(Rng& rng, std::size_t dim, std::size_t degree, std::size_t dim_k,
                                       std::size_t r) {
    PolyForm w(dim, degree, dim_k);
    if (r >= 1) w = d(random_polyform(rng, dim, degree - 1, dim_k, r - 1));
    if (degree > dim) return w;
    PolyForm c(dim, degree, dim_k);
    Mask ym = c.vertical_mask();
    for (Mask m : combinations(dim, degree))
        if (static_cast<std::size_t>(popcount(m & ym)) <= r && rng.coin())
            c.add_term(m, Polynomial::constant(dim, rng.small_rational()));
    return w + c;
}

// Counts r-subsets of dim_t horizontal and dim_v vertical coordinates that use
// at most s vertical ones.
inline std::uint64_t count_horizontal_monomials(std::size_t r, std::size_t s, std::size_t dim_v, std::size_t dim_t) {
    std::size_t n = dim_v + dim_t;
    if (r > n) return 0;
    Mask vmask = 0;
    for (std::size_t i = dim_t; i < n; ++i) vmask |= bit(i);
    std::uint64_t count = 0;
    for (Mask m = 0; m < (Mask(1) << n); ++m)
        if (static_cast<std::size_t>(popcount(m)) == r && static_cast<std::size_t>(popcount(m & vmask)) <= s) ++count;
    return count;
}

inline bool all_vertical_contractions_vanish(const PolyForm& w, std::size_t count) {
    if (count > w.degree()) return true;
    std::size_t dim = w.dim();
    for (Mask m : combinations(w.dim_l(), count)) {
        PolyForm f = w;
        for (std::size_t j : indices_of(m)) {
            VectorField v(dim, Polynomial(dim));
            v[w.dim_k() + j] = Polynomial::constant(dim, 1);
            f = contract(v, f);
        }
        if (!f.is_zero()) return false;
    }
    return true;
}

struct PolyInstance {
    VectorValuedForm w;
    Subspace L;
    int kind = 0;  // 0 canonical, 1 conjugate, 2 corrupted
};

struct MultiInstance {
    AlternatingForm w;
    Flag flag;
    Subspace L;
    std::size_t r = 2;
    int kind = 0;
};

inline Subspace coordinate_span(std::size_t ambient, std::size_t from, std::size_t to) {
    std::vector<Vector> vs;
    for (std::size_t i = from; i < to; ++i) vs.push_back(unit_vector(ambient, i));
    return Subspace::span(ambient, vs);
}

// Canonical pattern (with up to one kernel coordinate), optionally conjugated,
// optionally corrupted in the form or in L. Corrupted forms stay nonzero.
inline PolyInstance poly_instance(Rng& rng, int kind) {
    static const std::vector<std::array<std::size_t, 3>> shapes{
        {1, 1, 1}, {2, 1, 1}, {2, 2, 1}, {3, 1, 2}, {3, 2, 1}, {3, 1, 3}, {4, 1, 2}, {2, 3, 1}, {3, 2, 2}};
    auto [N, nh, k] = shapes[rng.uniform(0, shapes.size() - 1)];
    std::size_t extra = rng.uniform(0, 1);
    PolyInstance inst;
    inst.kind = kind;
    inst.w = canonical_poly_pattern(N, nh, k, extra);
    std::size_t dim = inst.w.dim();
    inst.L = coordinate_span(dim, N, dim);
    if (kind == 2) {
        switch (rng.uniform(0, 3)) {
            case 0: {
                auto& c = inst.w.component(rng.uniform(0, nh - 1));
                c += random_form(rng, dim, k + 1, 0.15);
                break;
            }
            case 1: inst.L = random_subspace(rng, dim, inst.L.dim()); break;
            case 2: {
                std::vector<Vector> vs = inst.L.basis_vectors();
                vs[rng.uniform(0, vs.size() - 1)] = unit_vector(dim, rng.uniform(0, N - 1));
                inst.L = Subspace::span(dim, vs);
                break;
            }
            default: {
                std::vector<Vector> vs = inst.L.basis_vectors();
                if (rng.coin() && vs.size() > 1) vs.pop_back();
                else vs.push_back(unit_vector(dim, 0));
                inst.L = Subspace::span(dim, vs);
            }
        }
        if (inst.w.is_zero()) inst.w = canonical_poly_pattern(N, nh, k, extra);
    }
    if (kind >= 1) {
        Matrix g = random_invertible(rng, dim);
        inst.w = pullback(inst.w, inverse(g));
        inst.L = image(g, inst.L);
    }
    return inst;
}

inline MultiInstance multi_instance(Rng& rng, int kind) {
    static const std::vector<std::array<std::size_t, 4>> shapes{
        {1, 2, 2, 2}, {2, 2, 2, 2}, {1, 3, 2, 2}, {2, 2, 2, 3}, {1, 2, 3, 2}, {2, 3, 2, 3}, {1, 1, 1, 2}, {2, 1, 2, 2}};
    auto [N, n, k, r] = shapes[rng.uniform(0, shapes.size() - 1)];
    MultiInstance inst;
    inst.kind = kind;
    inst.r = r;
    std::size_t extra = rng.uniform(0, 1);
    inst.w = canonical_multi_pattern(N, n, k, r, extra);
    std::size_t dim = inst.w.dim();
    inst.flag = Flag::standard(n, dim - n);
    inst.L = coordinate_span(dim, n + N, dim);
    if (kind == 2) {
        switch (rng.uniform(0, 2)) {
            case 0: {
                Mask vmask = 0;
                for (std::size_t i = n; i < dim; ++i) vmask |= bit(i);
                std::vector<AlternatingForm::Term> terms;
                for (Mask m : combinations(dim, k + 1))
                    if (static_cast<std::size_t>(popcount(m & vmask)) <= r && rng.uniform_real(0, 1) < 0.15)
                        terms.emplace_back(m, rng.small_rational());
                AlternatingForm bumped = inst.w + AlternatingForm::from_terms(dim, k + 1, terms);
                if (!bumped.is_zero()) inst.w = bumped;
                break;
            }
            case 1: {
                std::vector<Vector> vs;
                for (std::size_t i = 0; i < inst.L.dim(); ++i) {
                    Vector v(dim);
                    for (std::size_t j = n; j < dim; ++j) v[j] = rng.uniform(-2, 2);
                    vs.push_back(v);
                }
                inst.L = Subspace::span(dim, vs);
                break;
            }
            default: {
                std::vector<Vector> vs = inst.L.basis_vectors();
                if (rng.coin() && vs.size() > 1) vs.pop_back();
                else vs.push_back(unit_vector(dim, n));
                inst.L = Subspace::span(dim, vs);
            }
        }
    }
    if (kind >= 1) {
        Matrix g = random_flag_preserving(rng, n, dim);
        inst.w = pullback(inst.w, inverse(g));
        inst.flag = Flag(image(g, inst.flag.vertical()), g * inst.flag.splitting());
        inst.L = image(g, inst.L);
    }
    return inst;
}

}  // namespace pdx::testing
