#include "pdx/exterior.hpp"

#include <algorithm>
#include <array>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace pdx {

namespace {

using BinomTable = std::array<std::array<std::uint64_t, kMaxDim + 1>, kMaxDim + 1>;

const BinomTable& binom_table() {
    static const BinomTable table = [] {
        BinomTable t{};
        for (std::size_t n = 0; n <= kMaxDim; ++n) {
            t[n][0] = 1;
            for (std::size_t k = 1; k <= n; ++k) t[n][k] = t[n - 1][k - 1] + (k < n ? t[n - 1][k] : 0);
        }
        return t;
    }();
    return table;
}

// Sign of moving the factors of b past those of a into increasing order.
int wedge_sign(Mask a, Mask b) {
    int swaps = 0;
    for (Mask rest = b; rest; rest &= rest - 1) {
        Mask low = lowbit(rest);
        swaps += popcount(a & ~((low << 1) - 1));
    }
    return (swaps & 1) ? -1 : 1;
}

// Sums coefficients keyed by mask. Degrees with a small monomial count use a
// dense colex-indexed buffer, which avoids hashing in the contraction loops.
class Accumulator {
public:
    Accumulator(std::size_t dim, std::size_t degree) {
        if (degree <= dim && binom(dim, degree) <= kDenseLimit) dense_.resize(binom(dim, degree));
    }
    void add(Mask m, const Rational& c) {
        if (c.is_zero()) return;
        if (!dense_.empty()) {
            Rational& slot = dense_[colex_rank(m)];
            if (slot.is_zero()) touched_.push_back(m);
            slot += c;
            return;
        }
        auto [it, inserted] = sparse_.try_emplace(m, c);
        if (!inserted) it->second += c;
    }
    void add_scaled(Mask m, const Rational& c, int sign) {
        if (c.is_zero()) return;
        add(m, sign < 0 ? -c : c);
    }
    std::vector<AlternatingForm::Term> finish() {
        std::vector<AlternatingForm::Term> out;
        if (!dense_.empty()) {
            std::sort(touched_.begin(), touched_.end(), MaskLess{});
            touched_.erase(std::unique(touched_.begin(), touched_.end()), touched_.end());
            out.reserve(touched_.size());
            for (Mask m : touched_) {
                Rational& c = dense_[colex_rank(m)];
                if (!c.is_zero()) out.emplace_back(m, std::move(c));
            }
            return out;
        }
        out.reserve(sparse_.size());
        for (auto& [m, c] : sparse_)
            if (!c.is_zero()) out.emplace_back(m, std::move(c));
        std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return MaskLess{}(x.first, y.first); });
        return out;
    }

private:
    static constexpr std::uint64_t kDenseLimit = 1 << 16;
    std::vector<Rational> dense_;
    std::vector<Mask> touched_;
    std::unordered_map<Mask, Rational> sparse_;
};

void check_dim(std::size_t dim) {
    if (dim > kMaxDim) throw std::invalid_argument("dimension exceeds 64");
}

}  // namespace

std::vector<std::size_t> indices_of(Mask m) {
    std::vector<std::size_t> out;
    for (; m; m &= m - 1) out.push_back(static_cast<std::size_t>(__builtin_ctzll(m)));
    return out;
}

Mask mask_of(const std::vector<std::size_t>& idx) {
    Mask m = 0;
    for (auto i : idx) {
        if (i >= kMaxDim || (m & bit(i))) throw std::invalid_argument("repeated or out-of-range index");
        m |= bit(i);
    }
    return m;
}

std::uint64_t binom(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    if (n > kMaxDim) throw std::invalid_argument("binomial argument too large");
    return binom_table()[n][k];
}

std::vector<Mask> combinations(std::size_t n, std::size_t k) {
    std::vector<Mask> out;
    if (k > n) return out;
    std::vector<std::size_t> c(k);
    for (std::size_t i = 0; i < k; ++i) c[i] = i;
    while (true) {
        out.push_back(mask_of(c));
        std::size_t i = k;
        while (i > 0 && c[i - 1] == n - k + i - 1) --i;
        if (i == 0) break;
        ++c[i - 1];
        for (std::size_t j = i; j < k; ++j) c[j] = c[j - 1] + 1;
    }
    return out;
}

std::size_t colex_rank(Mask m) {
    std::size_t rank = 0, i = 1;
    for (; m; m &= m - 1, ++i) rank += binom(static_cast<std::size_t>(__builtin_ctzll(m)), i);
    return rank;
}

Mask colex_unrank(std::size_t rank, std::size_t k) {
    Mask m = 0;
    for (std::size_t i = k; i >= 1; --i) {
        std::size_t c = i - 1;
        while (binom(c + 1, i) <= rank) ++c;
        rank -= binom(c, i);
        m |= bit(c);
    }
    return m;
}

AlternatingForm::AlternatingForm(std::size_t dim, std::size_t degree) : dim_(dim), degree_(degree) {
    check_dim(dim);
}

AlternatingForm AlternatingForm::from_terms(std::size_t dim, std::size_t degree, std::vector<Term> terms) {
    AlternatingForm f(dim, degree);
    bool canonical = true;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        Mask m = terms[i].first;
        if (static_cast<std::size_t>(popcount(m)) != degree) throw std::invalid_argument("term degree mismatch");
        if (dim < kMaxDim && (m >> dim) != 0) throw std::invalid_argument("term index out of range");
        canonical = canonical && !terms[i].second.is_zero() && (i == 0 || MaskLess{}(terms[i - 1].first, m));
    }
    if (canonical) {
        f.terms_ = std::move(terms);
        return f;
    }
    Accumulator acc(dim, degree);
    for (auto& [m, c] : terms) acc.add(m, c);
    f.terms_ = acc.finish();
    return f;
}

AlternatingForm AlternatingForm::monomial(std::size_t dim, const std::vector<std::size_t>& idx, const Rational& c) {
    AlternatingForm f(dim, idx.size());
    for (auto i : idx)
        if (i >= dim) throw std::invalid_argument("monomial index out of range");
    std::vector<std::size_t> sorted = idx;
    int inversions = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i)
        for (std::size_t j = i + 1; j < sorted.size(); ++j) {
            if (sorted[i] == sorted[j]) return f;
            if (sorted[i] > sorted[j]) ++inversions;
        }
    if (!c.is_zero()) f.terms_.emplace_back(mask_of(idx), (inversions & 1) ? -c : c);
    return f;
}

AlternatingForm AlternatingForm::covector(const Vector& v) {
    AlternatingForm f(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!v[i].is_zero()) f.terms_.emplace_back(bit(i), v[i]);
    return f;
}

AlternatingForm AlternatingForm::scalar(std::size_t dim, const Rational& c) {
    AlternatingForm f(dim, 0);
    if (!c.is_zero()) f.terms_.emplace_back(0, c);
    return f;
}

AlternatingForm AlternatingForm::from_vector(std::size_t dim, std::size_t degree, const Vector& v) {
    if (v.size() != binom(dim, degree)) throw std::invalid_argument("form vector length mismatch");
    std::vector<Term> terms;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!v[i].is_zero()) terms.emplace_back(colex_unrank(i, degree), v[i]);
    return from_terms(dim, degree, std::move(terms));
}

Rational AlternatingForm::coeff(Mask m) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const Term& t, Mask x) { return MaskLess{}(t.first, x); });
    if (it != terms_.end() && it->first == m) return it->second;
    return Rational(0);
}

Vector AlternatingForm::to_vector() const {
    Vector v(binom(dim_, degree_));
    for (const auto& [m, c] : terms_) v[colex_rank(m)] = c;
    return v;
}

Rational AlternatingForm::evaluate(const std::vector<Vector>& args) const {
    if (args.size() != degree_) throw std::invalid_argument("wrong number of arguments");
    AlternatingForm f = *this;
    for (const auto& v : args) {
        if (f.is_zero()) return Rational(0);
        f = contract(v, f);
    }
    return f.is_zero() ? Rational(0) : f.terms_.front().second;
}

AlternatingForm AlternatingForm::operator-() const {
    AlternatingForm f = *this;
    for (auto& t : f.terms_) t.second = -t.second;
    return f;
}

AlternatingForm& AlternatingForm::operator+=(const AlternatingForm& b) {
    if (dim_ != b.dim_ || degree_ != b.degree_) throw std::invalid_argument("adding forms of different shape");
    std::vector<Term> out;
    out.reserve(terms_.size() + b.terms_.size());
    std::size_t i = 0, j = 0;
    MaskLess less;
    while (i < terms_.size() || j < b.terms_.size()) {
        if (j == b.terms_.size() || (i < terms_.size() && less(terms_[i].first, b.terms_[j].first))) {
            out.push_back(std::move(terms_[i++]));
        } else if (i == terms_.size() || less(b.terms_[j].first, terms_[i].first)) {
            out.push_back(b.terms_[j++]);
        } else {
            Rational c = terms_[i].second + b.terms_[j].second;
            if (!c.is_zero()) out.emplace_back(terms_[i].first, std::move(c));
            ++i;
            ++j;
        }
    }
    terms_ = std::move(out);
    return *this;
}

AlternatingForm& AlternatingForm::operator-=(const AlternatingForm& b) { return *this += -b; }

AlternatingForm& AlternatingForm::operator*=(const Rational& c) {
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& t : terms_) t.second *= c;
    return *this;
}

std::string AlternatingForm::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        Rational a = abs(c);
        if (first)
            os << (c.sign() < 0 ? "-" : "");
        else
            os << (c.sign() < 0 ? " - " : " + ");
        first = false;
        if (m == 0) {
            os << a;
            continue;
        }
        if (!a.is_one()) os << a << "*";
        bool first_idx = true;
        for (auto i : indices_of(m)) {
            os << (first_idx ? "" : "^") << "e" << (i + 1);
            first_idx = false;
        }
    }
    return os.str();
}

AlternatingForm wedge(const AlternatingForm& a, const AlternatingForm& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("wedge of forms on different spaces");
    Accumulator acc(a.dim(), a.degree() + b.degree());
    for (const auto& [ma, ca] : a.terms())
        for (const auto& [mb, cb] : b.terms()) {
            if (ma & mb) continue;
            Rational c = ca * cb;
            acc.add_scaled(ma | mb, c, wedge_sign(ma, mb));
        }
    return AlternatingForm::from_terms(a.dim(), a.degree() + b.degree(), acc.finish());
}

AlternatingForm contract(const Vector& v, const AlternatingForm& w) {
    if (v.size() != w.dim()) throw std::invalid_argument("contraction with vector of wrong dimension");
    if (w.degree() == 0) throw std::invalid_argument("contraction of a 0-form");
    Accumulator acc(w.dim(), w.degree() - 1);
    for (const auto& [m, c] : w.terms())
        for (Mask rest = m; rest; rest &= rest - 1) {
            Mask b = lowbit(rest);
            const Rational& vi = v[static_cast<std::size_t>(__builtin_ctzll(b))];
            if (vi.is_zero()) continue;
            int sign = (popcount(m & (b - 1)) & 1) ? -1 : 1;
            acc.add_scaled(m ^ b, c * vi, sign);
        }
    return AlternatingForm::from_terms(w.dim(), w.degree() - 1, acc.finish());
}

namespace {

void pullback_dfs(const AlternatingForm& f, const std::vector<Vector>& cols, std::size_t next, Mask chosen,
                  std::vector<AlternatingForm::Term>& out) {
    if (f.degree() == 0) {
        if (!f.is_zero()) out.emplace_back(chosen, f.terms().front().second);
        return;
    }
    std::size_t remaining = f.degree();
    for (std::size_t j = next; j + remaining <= cols.size(); ++j) {
        AlternatingForm g = contract(cols[j], f);
        if (!g.is_zero()) pullback_dfs(g, cols, j + 1, chosen | bit(j), out);
    }
}

}  // namespace

AlternatingForm pullback(const AlternatingForm& w, const Matrix& m) {
    if (m.rows() != w.dim()) throw std::invalid_argument("pullback matrix has wrong row count");
    std::vector<AlternatingForm::Term> out;
    if (w.degree() == 0) return AlternatingForm::from_terms(m.cols(), 0, {w.terms().begin(), w.terms().end()});
    pullback_dfs(w, m.column_list(), 0, 0, out);
    return AlternatingForm::from_terms(m.cols(), w.degree(), std::move(out));
}

VectorValuedForm::VectorValuedForm(std::vector<AlternatingForm> components) : comps_(std::move(components)) {
    if (comps_.empty()) throw std::invalid_argument("vector-valued form needs at least one component");
    for (const auto& c : comps_)
        if (c.dim() != comps_.front().dim() || c.degree() != comps_.front().degree())
            throw std::invalid_argument("components differ in dimension or degree");
}

VectorValuedForm::VectorValuedForm(std::size_t dim, std::size_t degree, std::size_t value_dim)
    : VectorValuedForm(std::vector<AlternatingForm>(value_dim, AlternatingForm(dim, degree))) {}

bool VectorValuedForm::is_zero() const {
    for (const auto& c : comps_)
        if (!c.is_zero()) return false;
    return true;
}

Vector VectorValuedForm::to_vector() const {
    Vector out;
    out.reserve(comps_.size() * binom(dim(), degree()));
    for (const auto& c : comps_) {
        Vector v = c.to_vector();
        std::move(v.begin(), v.end(), std::back_inserter(out));
    }
    return out;
}

VectorValuedForm VectorValuedForm::from_vector(std::size_t dim, std::size_t degree, std::size_t value_dim,
                                               const Vector& v) {
    std::size_t block = binom(dim, degree);
    if (v.size() != block * value_dim) throw std::invalid_argument("form vector length mismatch");
    std::vector<AlternatingForm> comps;
    for (std::size_t a = 0; a < value_dim; ++a)
        comps.push_back(AlternatingForm::from_vector(
            dim, degree, Vector(v.begin() + static_cast<std::ptrdiff_t>(a * block),
                                v.begin() + static_cast<std::ptrdiff_t>((a + 1) * block))));
    return VectorValuedForm(std::move(comps));
}

VectorValuedForm contract(const Vector& v, const VectorValuedForm& w) {
    std::vector<AlternatingForm> comps;
    for (const auto& c : w.components()) comps.push_back(contract(v, c));
    return VectorValuedForm(std::move(comps));
}

VectorValuedForm pullback(const VectorValuedForm& w, const Matrix& m) {
    std::vector<AlternatingForm> comps;
    for (const auto& c : w.components()) comps.push_back(pullback(c, m));
    return VectorValuedForm(std::move(comps));
}

AlternatingForm project(const VectorValuedForm& w, const Vector& t_star) {
    if (t_star.size() != w.value_dim()) throw std::invalid_argument("covector length differs from value dimension");
    AlternatingForm out(w.dim(), w.degree());
    for (std::size_t a = 0; a < t_star.size(); ++a)
        if (!t_star[a].is_zero()) out += w.component(a) * t_star[a];
    return out;
}

Matrix flat_matrix(const VectorValuedForm& w, const Subspace& domain) {
    if (domain.ambient_dim() != w.dim()) throw std::invalid_argument("domain lives in a different space");
    if (w.degree() == 0) throw std::invalid_argument("flat of a 0-form");
    std::size_t block = binom(w.dim(), w.degree() - 1);
    Matrix m(block * w.value_dim(), domain.dim());
    for (std::size_t j = 0; j < domain.dim(); ++j) {
        Vector v = domain.basis_vector(j);
        for (std::size_t a = 0; a < w.value_dim(); ++a) {
            AlternatingForm f = contract(v, w.component(a));
            for (const auto& [mask, c] : f.terms()) m(a * block + colex_rank(mask), j) = c;
        }
    }
    return m;
}

Matrix flat_matrix(const AlternatingForm& w, const Subspace& domain) {
    return flat_matrix(VectorValuedForm({w}), domain);
}

Flag::Flag(Subspace vertical, Matrix splitting) : vertical_(std::move(vertical)), splitting_(std::move(splitting)) {
    std::size_t n = vertical_.ambient_dim();
    if (splitting_.rows() != n) throw std::invalid_argument("splitting has wrong row count");
    if (splitting_.cols() + vertical_.dim() != n)
        throw std::invalid_argument("splitting width must equal the codimension of V");
    if (rank(adapted_basis()) != n) throw std::invalid_argument("splitting image meets V");
}

Flag Flag::standard(std::size_t n_t, std::size_t n_v) {
    std::size_t n = n_t + n_v;
    std::vector<Vector> vert;
    for (std::size_t i = n_t; i < n; ++i) vert.push_back(unit_vector(n, i));
    Matrix s(n, n_t);
    for (std::size_t i = 0; i < n_t; ++i) s(i, i) = 1;
    return Flag(Subspace::span(n, vert), s);
}

Matrix Flag::adapted_basis() const { return splitting_.hstack(vertical_.basis_columns()); }

Matrix Flag::vertical_first_basis() const { return vertical_.basis_columns().hstack(splitting_); }

Vector Flag::project(const Vector& w) const {
    auto x = solve(adapted_basis(), w);
    if (!x) throw std::logic_error("adapted basis is not invertible");
    return Vector(x->begin(), x->begin() + static_cast<std::ptrdiff_t>(dim_t()));
}

namespace {

std::size_t horizontality_search(const AlternatingForm& w, const Subspace& vertical) {
    std::vector<Vector> vb = vertical.basis_vectors();
    struct Node {
        AlternatingForm f;
        std::size_t next;
    };
    std::vector<Node> level{{w, 0}};
    std::size_t s = 0;
    while (true) {
        std::vector<Node> deeper;
        for (const auto& node : level) {
            if (node.f.degree() == 0) continue;
            for (std::size_t j = node.next; j < vb.size(); ++j) {
                AlternatingForm g = contract(vb[j], node.f);
                if (!g.is_zero()) deeper.push_back({std::move(g), j + 1});
            }
        }
        if (deeper.empty()) return s;
        level = std::move(deeper);
        ++s;
    }
}

}  // namespace

std::size_t horizontality_degree(const AlternatingForm& w, const Flag& flag) {
    if (w.dim() != flag.total_dim()) throw std::invalid_argument("form and flag live on different spaces");
    // The multi routines re-validate the same (form, flag) pair many times;
    // a few recent answers are kept for large forms.
    struct Entry {
        AlternatingForm w;
        Subspace vertical;
        std::size_t degree;
    };
    thread_local std::vector<Entry> recent;
    const bool cacheable = w.terms().size() >= 256;
    if (cacheable)
        for (const auto& e : recent)
            if (e.vertical == flag.vertical() && e.w == w) return e.degree;
    std::size_t s = horizontality_search(w, flag.vertical());
    if (cacheable) {
        if (recent.size() == 4) recent.erase(recent.begin());
        recent.push_back({w, flag.vertical(), s});
    }
    return s;
}

std::uint64_t horizontal_dim(std::size_t r, std::size_t s, std::size_t dim_v, std::size_t dim_t) {
    std::uint64_t total = 0;
    for (std::size_t t = 0; t <= s && t <= r; ++t) total += binom(dim_v, t) * binom(dim_t, r - t);
    return total;
}

SymmetricPoly SymmetricPoly::monomial(std::vector<unsigned> alpha, const Rational& c) {
    SymmetricPoly p;
    p.value_dim = alpha.size();
    for (auto x : alpha) p.degree += x;
    if (!c.is_zero()) p.coeffs.emplace(std::move(alpha), c);
    return p;
}

AlternatingForm wedge_power(const VectorValuedForm& w, const std::vector<unsigned>& alpha) {
    if (alpha.size() != w.value_dim()) throw std::invalid_argument("exponent length differs from value dimension");
    AlternatingForm out = AlternatingForm::scalar(w.dim(), 1);
    for (std::size_t a = 0; a < alpha.size(); ++a)
        for (unsigned e = 0; e < alpha[a]; ++e) {
            out = wedge(out, w.component(a));
            if (out.is_zero()) break;
        }
    std::size_t deg = 0;
    for (auto x : alpha) deg += x * w.degree();
    if (out.is_zero()) return AlternatingForm(w.dim(), deg);
    return out;
}

AlternatingForm poly_eval(const SymmetricPoly& p, const VectorValuedForm& w) {
    if (p.value_dim != w.value_dim()) throw std::invalid_argument("polynomial and form value dimensions differ");
    if (w.degree() != 2) throw std::invalid_argument("poly_eval expects a 2-form");
    AlternatingForm out(w.dim(), 2 * p.degree);
    for (const auto& [alpha, c] : p.coeffs) {
        unsigned total = 0;
        for (auto x : alpha) total += x;
        if (total != p.degree) throw std::invalid_argument("exponent vector has the wrong total degree");
        out += wedge_power(w, alpha) * c;
    }
    return out;
}

}  // namespace pdx
