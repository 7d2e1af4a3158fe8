#include "pdx/darboux.hpp"

#include <stdexcept>
#include <tuple>

namespace pdx {

namespace {

std::string index_list(Mask m, std::size_t offset = 0) {
    std::string s;
    for (auto i : indices_of(m)) {
        if (!s.empty()) s += ',';
        s += std::to_string(i - offset + 1);
    }
    return s;
}

// (s, I, M) labels of the multi L block in canonical order.
struct MultiLabel {
    std::size_t s;
    Mask I, M;
};

std::vector<MultiLabel> multi_labels(std::size_t N, std::size_t n, std::size_t k, std::size_t r) {
    std::vector<MultiLabel> out;
    for (std::size_t s = 0; s + 1 <= r && s <= k; ++s) {
        if (s > N || k - s > n) continue;
        for (Mask I : combinations(N, s))
            for (Mask M : combinations(n, k - s)) out.push_back({s, I, M});
    }
    return out;
}

Subspace coordinate_span(std::size_t dim, std::size_t from, std::size_t to) {
    std::vector<Vector> v;
    for (std::size_t i = from; i < to; ++i) v.push_back(unit_vector(dim, i));
    return Subspace::span(dim, v);
}

// Vectors x in span(basis) with flat(x) = target, one per target. The flat map
// must be injective on span(basis); a target outside its image means the
// subspace is not (poly/multi)lagrangian.
std::vector<Vector> solve_flat(const VectorValuedForm& w, const std::vector<Vector>& basis,
                               const std::vector<Vector>& targets) {
    std::size_t m = basis.size();
    std::vector<Vector> flats;
    for (const auto& b : basis) flats.push_back(contract(b, w).to_vector());
    std::size_t len = w.value_dim() * binom(w.dim(), w.degree() - 1);
    RowReducer red(m);
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < len && !red.full(); ++i) {
        Vector row(m);
        for (std::size_t j = 0; j < m; ++j) row[j] = flats[j][i];
        if (red.add(row)) rows.push_back(i);
    }
    if (rows.size() != m) throw std::invalid_argument("contraction is not injective on the complement of the kernel");
    Matrix s(m, m);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t j = 0; j < m; ++j) s(a, j) = flats[j][rows[a]];
    Matrix sinv = inverse(s);
    std::vector<Vector> out;
    for (const auto& t : targets) {
        Vector sel(m);
        for (std::size_t a = 0; a < m; ++a) sel[a] = t[rows[a]];
        Vector x = sinv.apply(sel);
        Vector image(len);
        for (std::size_t j = 0; j < m; ++j)
            if (!x[j].is_zero())
                for (std::size_t i = 0; i < len; ++i)
                    if (!flats[j][i].is_zero()) image[i] += x[j] * flats[j][i];
        if (image != t) throw std::invalid_argument("subspace is not lagrangian: the dual basis of L' does not exist");
        Vector v(w.dim());
        for (std::size_t j = 0; j < m; ++j)
            if (!x[j].is_zero())
                for (std::size_t c = 0; c < v.size(); ++c)
                    if (!basis[j][c].is_zero()) v[c] += x[j] * basis[j][c];
        out.push_back(std::move(v));
    }
    return out;
}

Matrix columns(const std::vector<std::vector<Vector>>& groups, std::size_t dim) {
    std::vector<Vector> all;
    for (const auto& g : groups) all.insert(all.end(), g.begin(), g.end());
    return Matrix::from_columns(all, dim);
}

std::vector<Vector> map_all(const Matrix& p, const std::vector<Vector>& vs) {
    std::vector<Vector> out;
    for (const auto& v : vs) out.push_back(p.apply(v));
    return out;
}

// L' basis inside P coordinates, where L occupies coordinates [l0, dim).
std::vector<Vector> lprime_in_frame(const Matrix& p, const Subspace& ker, std::size_t l0) {
    std::size_t d = p.rows();
    Matrix pinv = inverse(p);
    Subspace kerp = Subspace::span(d, map_all(pinv, ker.basis_vectors()));
    return complement(kerp, coordinate_span(d, l0, d)).basis_vectors();
}

// Poly: dual basis of L' in the frame P = [E basis | L basis]; returned in P coordinates.
std::vector<Vector> poly_dual_Lprime(const VectorValuedForm& wp, const Matrix& p, const Subspace& ker, std::size_t N) {
    std::size_t d = wp.dim(), k = wp.degree() - 1, nh = wp.value_dim();
    std::size_t block = binom(d, k);
    std::vector<Vector> targets;
    for (std::size_t a = 0; a < nh; ++a)
        for (Mask I : combinations(N, k)) {
            Vector t(nh * block);
            t[a * block + colex_rank(I)] = 1;
            targets.push_back(std::move(t));
        }
    return solve_flat(wp, lprime_in_frame(p, ker, N), targets);
}

std::vector<Vector> poly_extend(const VectorValuedForm& w, const Subspace& L, std::vector<Vector> es, bool single) {
    std::size_t d = w.dim(), k = w.degree() - 1;
    std::size_t N = d - L.dim();
    Subspace ker = kernel_of_form(w);
    std::vector<Vector> lb = L.basis_vectors();
    while (es.size() < N) {
        RowReducer cur(d);
        for (const auto& v : es) cur.add(v);
        for (const auto& v : lb) cur.add(v);
        std::vector<Vector> fresh;
        for (std::size_t i = 0; i < d && !cur.full(); ++i)
            if (cur.add(unit_vector(d, i))) fresh.push_back(unit_vector(d, i));
        Matrix p = columns({es, fresh, lb}, d);
        VectorValuedForm wp = pullback(w, p);
        std::vector<Vector> dual = poly_dual_Lprime(wp, p, ker, N);
        std::size_t j = es.size();
        Vector u = unit_vector(d, j);
        VectorValuedForm ie = contract(u, wp);
        std::size_t idx = 0;
        for (std::size_t a = 0; a < w.value_dim(); ++a)
            for (Mask I : combinations(N, k)) {
                Rational c = ie.component(a).coeff(I);
                if (!c.is_zero())
                    for (std::size_t x = 0; x < d; ++x)
                        if (!dual[idx][x].is_zero()) u[x] -= c * dual[idx][x];
                ++idx;
            }
        es.push_back(p.apply(u));
        if (single) break;
    }
    return es;
}

void check_poly_extension_input(const VectorValuedForm& w, const Subspace& L, const Subspace& E0) {
    if (!check_polylagrangian(L, w)) throw std::invalid_argument("L is not polylagrangian");
    if (intersect(E0, L).dim() != 0) throw std::invalid_argument("E0 meets L");
    if (w.degree() >= 2 && !is_isotropic(E0, w.degree() - 1, w)) throw std::invalid_argument("E0 is not k-isotropic");
}

Subspace to_local(const Subspace& s, const Subspace& v) {
    std::vector<Vector> out;
    for (std::size_t i = 0; i < s.dim(); ++i) out.push_back(v.coordinates(s.basis_vector(i)));
    return Subspace::span(v.dim(), out);
}

// Multi frame P = [E | H | L]; dual basis of L' in P coordinates, in label order.
std::vector<Vector> multi_dual_Lprime(const AlternatingForm& wp, const Matrix& p, const Subspace& ker, std::size_t N,
                                      std::size_t n, std::size_t r) {
    std::size_t d = wp.dim(), k = wp.degree() - 1;
    std::size_t block = binom(d, k);
    std::vector<Vector> targets;
    for (const auto& lab : multi_labels(N, n, k, r)) {
        Vector t(block);
        t[colex_rank(lab.I | (lab.M << N))] = 1;
        targets.push_back(std::move(t));
    }
    return solve_flat(VectorValuedForm({wp}), lprime_in_frame(p, ker, N + n), targets);
}

std::vector<Vector> multi_extend(const AlternatingForm& w, const Flag& flag, std::size_t r, const Subspace& L,
                                 const std::vector<Vector>& eb, std::vector<Vector> hs) {
    std::size_t d = w.dim(), n = flag.dim_t();
    std::size_t N = eb.size(), k = w.degree() - 1;
    Subspace ker = kernel_of_form(w);
    std::vector<Vector> lb = L.basis_vectors();
    std::vector<Vector> vb = flag.vertical().basis_vectors();
    while (hs.size() < n) {
        RowReducer cur(d);
        for (const auto& v : eb) cur.add(v);
        for (const auto& v : hs) cur.add(v);
        for (const auto& v : vb) cur.add(v);
        std::vector<Vector> fresh;
        for (std::size_t i = 0; i < d && !cur.full(); ++i)
            if (cur.add(unit_vector(d, i))) fresh.push_back(unit_vector(d, i));
        Matrix p = columns({eb, hs, fresh, lb}, d);
        AlternatingForm wp = pullback(w, p);
        std::vector<Vector> dual = multi_dual_Lprime(wp, p, ker, N, n, r);
        std::size_t j = N + hs.size();
        Vector u = unit_vector(d, j);
        AlternatingForm ie = contract(u, wp);
        auto labs = multi_labels(N, n, k, r);
        for (std::size_t idx = 0; idx < labs.size(); ++idx) {
            Rational c = ie.coeff(labs[idx].I | (labs[idx].M << N));
            if (!c.is_zero())
                for (std::size_t x = 0; x < d; ++x)
                    if (!dual[idx][x].is_zero()) u[x] -= c * dual[idx][x];
        }
        hs.push_back(p.apply(u));
    }
    return hs;
}

}  // namespace

std::size_t multi_L_dim(std::size_t N, std::size_t n, std::size_t k, std::size_t r) {
    return multi_labels(N, n, k, r).size();
}

VectorValuedForm canonical_poly_pattern(std::size_t N, std::size_t nhat, std::size_t k, std::size_t extra) {
    std::size_t c = binom(N, k);
    std::size_t d = N + nhat * c + extra;
    if (d > kMaxDim) throw std::invalid_argument("canonical model exceeds the supported dimension");
    Rational sign = k % 2 == 0 ? 1 : -1;
    std::vector<Mask> idx = combinations(N, k);
    std::vector<AlternatingForm> comps;
    for (std::size_t a = 0; a < nhat; ++a) {
        std::vector<AlternatingForm::Term> terms;
        for (std::size_t i = 0; i < idx.size(); ++i) terms.emplace_back(idx[i] | bit(N + a * c + i), sign);
        comps.push_back(AlternatingForm::from_terms(d, k + 1, std::move(terms)));
    }
    return VectorValuedForm(std::move(comps));
}

AlternatingForm canonical_multi_pattern(std::size_t N, std::size_t n, std::size_t k, std::size_t r,
                                        std::size_t extra) {
    auto labs = multi_labels(N, n, k, r);
    std::size_t d = n + N + labs.size() + extra;
    if (d > kMaxDim) throw std::invalid_argument("canonical model exceeds the supported dimension");
    std::vector<AlternatingForm::Term> terms;
    for (std::size_t i = 0; i < labs.size(); ++i) {
        std::size_t s = labs[i].s;
        Rational sign = (k + s * (k - s)) % 2 == 0 ? 1 : -1;
        terms.emplace_back(labs[i].M | (labs[i].I << n) | bit(n + N + i), sign);
    }
    return AlternatingForm::from_terms(d, k + 1, std::move(terms));
}

VectorValuedForm canonical_symbol_pattern(std::size_t N, std::size_t n, std::size_t k, std::size_t r,
                                          std::size_t extra) {
    auto labs = multi_labels(N, n, k, r);
    std::size_t dv = N + labs.size() + extra;
    std::vector<Mask> comps = combinations(n, k + 1 - r);
    Rational sign = (r - 1) % 2 == 0 ? 1 : -1;
    std::vector<AlternatingForm> out;
    for (Mask M : comps) {
        std::vector<AlternatingForm::Term> terms;
        for (std::size_t i = 0; i < labs.size(); ++i)
            if (labs[i].s + 1 == r && labs[i].M == M) terms.emplace_back(labs[i].I | bit(N + i), sign);
        out.push_back(AlternatingForm::from_terms(dv, r, std::move(terms)));
    }
    return VectorValuedForm(std::move(out));
}

CanonicalPolyModel canonical_poly_model(std::size_t N, std::size_t nhat, std::size_t k) {
    if (k < 1 || N < k) throw std::invalid_argument("canonical poly model needs N >= k >= 1");
    if (nhat < 1) throw std::invalid_argument("canonical poly model needs a nonzero value space");
    CanonicalPolyModel m;
    m.N = N;
    m.k = k;
    m.nhat = nhat;
    m.form = canonical_poly_pattern(N, nhat, k);
    std::size_t d = m.form.dim();
    m.E = coordinate_span(d, 0, N);
    m.L = coordinate_span(d, N, d);
    for (std::size_t i = 0; i < N; ++i) m.labels.push_back("(" + std::to_string(i + 1) + ")");
    for (std::size_t a = 0; a < nhat; ++a)
        for (Mask I : combinations(N, k)) m.labels.push_back("(" + std::to_string(a + 1) + ";" + index_list(I) + ")");
    return m;
}

CanonicalMultiModel canonical_multi_model(std::size_t N, std::size_t n, std::size_t k, std::size_t r) {
    if (k < 1) throw std::invalid_argument("canonical multi model needs k >= 1");
    if (r < 1 || r > k + 1) throw std::invalid_argument("canonical multi model needs 1 <= r <= k+1");
    if (k + 1 - r > n) throw std::invalid_argument("canonical multi model needs k+1-r <= n");
    if (N < 1) throw std::invalid_argument("canonical multi model needs N >= 1");
    CanonicalMultiModel m;
    m.N = N;
    m.n = n;
    m.k = k;
    m.r = r;
    m.form = canonical_multi_pattern(N, n, k, r);
    if (m.form.is_zero()) throw std::invalid_argument("these parameters give the zero form");
    std::size_t d = m.form.dim();
    m.flag = Flag::standard(n, d - n);
    m.E = coordinate_span(d, n, n + N);
    m.F = coordinate_span(d, 0, n + N);
    m.L = r == 1 ? m.flag.vertical() : coordinate_span(d, n + N, d);
    for (std::size_t mu = 0; mu < n; ++mu) m.labels.push_back("(mu=" + std::to_string(mu + 1) + ")");
    for (std::size_t i = 0; i < N; ++i) m.labels.push_back("(i=" + std::to_string(i + 1) + ")");
    for (const auto& lab : multi_labels(N, n, k, r))
        m.labels.push_back("(" + index_list(lab.I) + ";" + index_list(lab.M) + ")");
    return m;
}

Subspace extension_step_poly(const VectorValuedForm& w, const Subspace& L, const Subspace& E0) {
    check_poly_extension_input(w, L, E0);
    return Subspace::span(w.dim(), poly_extend(w, L, E0.basis_vectors(), true));
}

Subspace extend_isotropic_complement_poly(const VectorValuedForm& w, const Subspace& L, const Subspace& E0) {
    check_poly_extension_input(w, L, E0);
    return Subspace::span(w.dim(), poly_extend(w, L, E0.basis_vectors(), false));
}

Subspace extend_isotropic_complement_multi(const AlternatingForm& w, const Flag& flag, std::size_t r,
                                           const Subspace& L, const Subspace& F0) {
    if (!check_multilagrangian(L, w, flag, r)) throw std::invalid_argument("L is not multilagrangian");
    const Subspace& v = flag.vertical();
    Subspace e = intersect(F0, v);
    if (intersect(e, L).dim() != 0 || e.dim() + L.dim() != v.dim())
        throw std::invalid_argument("F0 meet V must complement L in V");
    if (!is_isotropic(F0, w.degree() - 1, VectorValuedForm({w}))) throw std::invalid_argument("F0 is not k-isotropic");
    std::vector<Vector> hs = complement(e, F0).basis_vectors();
    hs = multi_extend(w, flag, r, L, e.basis_vectors(), hs);
    return sum(e, Subspace::span(w.dim(), hs));
}

DarbouxBasis darboux_basis_poly(const VectorValuedForm& w, const Subspace& L) {
    if (!check_polylagrangian(L, w)) throw std::invalid_argument("L is not polylagrangian");
    std::size_t d = w.dim(), k = w.degree() - 1;
    std::size_t N = d - L.dim();
    Subspace ker = kernel_of_form(w);
    std::vector<Vector> es = poly_extend(w, L, {}, false);
    std::vector<Vector> lb = L.basis_vectors();
    Matrix p = columns({es, lb}, d);
    std::vector<Vector> dual = map_all(p, poly_dual_Lprime(pullback(w, p), p, ker, N));
    DarbouxBasis out;
    out.basis = columns({es, dual, ker.basis_vectors()}, d);
    out.L = L;
    out.E = Subspace::span(d, es);
    out.N = N;
    out.kernel_dim = ker.dim();
    for (std::size_t i = 0; i < N; ++i) out.labels.push_back("(" + std::to_string(i + 1) + ")");
    for (std::size_t a = 0; a < w.value_dim(); ++a)
        for (Mask I : combinations(N, k)) out.labels.push_back("(" + std::to_string(a + 1) + ";" + index_list(I) + ")");
    for (std::size_t i = 0; i < ker.dim(); ++i) out.labels.push_back("(ker " + std::to_string(i + 1) + ")");
    return out;
}

DarbouxBasis darboux_basis_poly(const VectorValuedForm& w, std::uint64_t seed) {
    if (w.is_zero()) throw std::runtime_error("no polylagrangian subspace: the form vanishes");
    Detection det = find_polylagrangian(w, seed);
    if (!det.L) throw std::runtime_error("no polylagrangian subspace");
    return darboux_basis_poly(w, *det.L);
}

DarbouxBasis darboux_basis_multi(const AlternatingForm& w, const Flag& flag, std::size_t r, const Subspace& L) {
    if (!check_multilagrangian(L, w, flag, r)) throw std::invalid_argument("L is not multilagrangian");
    std::size_t d = w.dim(), n = flag.dim_t(), k = w.degree() - 1;
    const Subspace& v = flag.vertical();
    std::size_t N = v.dim() - L.dim();
    Subspace ker = kernel_of_form(w);
    std::vector<Vector> eb;
    if (N > 0) {
        VectorValuedForm sym = symbol(w, flag, r);
        std::vector<Vector> local = poly_extend(sym, to_local(L, v), {}, false);
        eb = map_all(v.basis_columns(), local);
    }
    std::vector<Vector> hs = multi_extend(w, flag, r, L, eb, {});
    std::vector<Vector> lb = L.basis_vectors();
    Matrix p = columns({eb, hs, lb}, d);
    std::vector<Vector> dual = map_all(p, multi_dual_Lprime(pullback(w, p), p, ker, N, n, r));
    DarbouxBasis out;
    out.basis = columns({hs, eb, dual, ker.basis_vectors()}, d);
    out.L = L;
    out.E = Subspace::span(d, eb);
    out.F = sum(out.E, Subspace::span(d, hs));
    out.N = N;
    out.kernel_dim = ker.dim();
    for (std::size_t mu = 0; mu < n; ++mu) out.labels.push_back("(mu=" + std::to_string(mu + 1) + ")");
    for (std::size_t i = 0; i < N; ++i) out.labels.push_back("(i=" + std::to_string(i + 1) + ")");
    for (const auto& lab : multi_labels(N, n, k, r))
        out.labels.push_back("(" + index_list(lab.I) + ";" + index_list(lab.M) + ")");
    for (std::size_t i = 0; i < ker.dim(); ++i) out.labels.push_back("(ker " + std::to_string(i + 1) + ")");
    return out;
}

DarbouxBasis darboux_basis_multi(const AlternatingForm& w, const Flag& flag, std::uint64_t seed) {
    if (w.is_zero()) throw std::runtime_error("no multilagrangian subspace: the form vanishes");
    std::size_t r = std::max<std::size_t>(1, horizontality_r(w, flag));
    Detection det = find_multilagrangian(w, flag, r, seed);
    if (!det.L) throw std::runtime_error("no multilagrangian subspace");
    return darboux_basis_multi(w, flag, r, *det.L);
}

}  // namespace pdx
