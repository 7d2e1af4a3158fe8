#include "pdx/diffforms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "pdx/random.hpp"

namespace pdx {

// ---------------------------------------------------------------- Polynomial

Polynomial Polynomial::constant(std::size_t nvars, const Rational& c) {
    Polynomial p(nvars);
    p.add_term(Exponent(nvars, 0), c);
    return p;
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t i) {
    if (i >= nvars) throw std::invalid_argument("variable index out of range");
    Exponent e(nvars, 0);
    e[i] = 1;
    return monomial(std::move(e));
}

Polynomial Polynomial::monomial(Exponent e, const Rational& c) {
    Polynomial p(e.size());
    p.add_term(e, c);
    return p;
}

unsigned Polynomial::degree() const {
    unsigned deg = 0;
    for (const auto& [e, c] : terms_) {
        unsigned s = 0;
        for (auto x : e) s += x;
        deg = std::max(deg, s);
    }
    return deg;
}

void Polynomial::add_term(const Exponent& e, const Rational& c) {
    if (e.size() != nvars_) throw std::invalid_argument("exponent length mismatch");
    if (c.is_zero()) return;
    auto [it, fresh] = terms_.try_emplace(e, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Polynomial Polynomial::derivative(std::size_t i) const {
    Polynomial out(nvars_);
    for (const auto& [e, c] : terms_) {
        if (e[i] == 0) continue;
        Exponent f = e;
        --f[i];
        out.add_term(f, c * Rational(static_cast<long long>(e[i])));
    }
    return out;
}

Rational Polynomial::evaluate(const Vector& x) const {
    if (x.size() != nvars_) throw std::invalid_argument("evaluation point has wrong dimension");
    Rational total;
    for (const auto& [e, c] : terms_) {
        Rational m = c;
        for (std::size_t i = 0; i < nvars_; ++i)
            for (unsigned p = 0; p < e[i]; ++p) m *= x[i];
        total += m;
    }
    return total;
}

double Polynomial::evaluate(const std::vector<double>& x) const {
    if (x.size() != nvars_) throw std::invalid_argument("evaluation point has wrong dimension");
    double total = 0;
    for (const auto& [e, c] : terms_) {
        double m = c.to_double();
        for (std::size_t i = 0; i < nvars_; ++i)
            if (e[i]) m *= std::pow(x[i], static_cast<int>(e[i]));
        total += m;
    }
    return total;
}

Polynomial Polynomial::compose(const std::vector<Polynomial>& subs) const {
    if (subs.size() != nvars_) throw std::invalid_argument("compose needs one polynomial per variable");
    std::size_t m = subs.empty() ? 0 : subs.front().nvars();
    std::vector<std::vector<Polynomial>> powers(nvars_);
    Polynomial out(m);
    for (const auto& [e, c] : terms_) {
        Polynomial term = Polynomial::constant(m, c);
        for (std::size_t i = 0; i < nvars_; ++i) {
            if (e[i] == 0) continue;
            auto& pw = powers[i];
            if (pw.empty()) pw.push_back(Polynomial::constant(m, 1));
            while (pw.size() <= e[i]) pw.push_back(pw.back() * subs[i]);
            term = term * pw[e[i]];
        }
        out += term;
    }
    return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& b) {
    if (b.nvars_ != nvars_) throw std::invalid_argument("polynomial variable count mismatch");
    for (const auto& [e, c] : b.terms_) add_term(e, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& b) {
    if (b.nvars_ != nvars_) throw std::invalid_argument("polynomial variable count mismatch");
    for (const auto& [e, c] : b.terms_) add_term(e, -c);
    return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, x] : terms_) x *= c;
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.nvars_ != b.nvars_) throw std::invalid_argument("polynomial variable count mismatch");
    Polynomial out(a.nvars_);
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) {
            Polynomial::Exponent e = ea;
            for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
            out.add_term(e, ca * cb);
        }
    return out;
}

std::string Polynomial::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        bool constant = std::all_of(e.begin(), e.end(), [](unsigned x) { return x == 0; });
        Rational mag = c.sign() < 0 ? -c : c;
        os << (first ? (c.sign() < 0 ? "-" : "") : (c.sign() < 0 ? " - " : " + "));
        first = false;
        bool wrote = false;
        if (!mag.is_one() || constant) {
            os << mag;
            wrote = true;
        }
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            os << (wrote ? "*" : "") << "x" << i + 1;
            if (e[i] > 1) os << "^" << e[i];
            wrote = true;
        }
    }
    return os.str();
}

// ---------------------------------------------------------------- PolyForm

namespace {

// Sign of dz^a ^ dz^b relative to the sorted product.
int wedge_sign(Mask a, Mask b) {
    int swaps = 0;
    for (Mask r = b; r; r &= r - 1) {
        Mask low = lowbit(r);
        swaps += popcount(a & ~((low << 1) - 1));
    }
    return swaps % 2 ? -1 : 1;
}

// Sign of removing index j from the increasing multi-index m (contraction).
int position_sign(Mask m, std::size_t j) { return popcount(m & (bit(j) - 1)) % 2 ? -1 : 1; }

void check_same_space(const PolyForm& a, const PolyForm& b) {
    if (a.dim() != b.dim() || a.dim_k() != b.dim_k()) throw std::invalid_argument("forms live on different charts");
}

}  // namespace

PolyForm::PolyForm(std::size_t dim, std::size_t degree, std::size_t dim_k) : dim_(dim), degree_(degree), dim_k_(dim_k) {
    if (dim > kMaxDim) throw std::invalid_argument("dimension exceeds 64");
    if (dim_k > dim) throw std::invalid_argument("split exceeds dimension");
}

PolyForm PolyForm::constant(const AlternatingForm& w, std::size_t dim_k) {
    PolyForm f(w.dim(), w.degree(), dim_k);
    for (const auto& [m, c] : w.terms()) f.add_term(m, Polynomial::constant(w.dim(), c));
    return f;
}

Mask PolyForm::vertical_mask() const {
    Mask all = dim_ == kMaxDim ? ~Mask(0) : bit(dim_) - 1;
    return all & ~(bit(dim_k_) - 1);
}

Polynomial PolyForm::coeff(Mask m) const {
    auto it = coeffs_.find(m);
    return it == coeffs_.end() ? Polynomial(dim_) : it->second;
}

std::size_t PolyForm::vertical_degree() const {
    std::size_t v = 0;
    Mask ym = vertical_mask();
    for (const auto& [m, p] : coeffs_) v = std::max<std::size_t>(v, popcount(m & ym));
    return v;
}

void PolyForm::add_term(Mask m, const Polynomial& p) {
    if (static_cast<std::size_t>(popcount(m)) != degree_) throw std::invalid_argument("term degree mismatch");
    if (dim_ < kMaxDim && (m >> dim_) != 0) throw std::invalid_argument("term index out of range");
    if (p.nvars() != dim_) throw std::invalid_argument("coefficient has wrong variable count");
    if (p.is_zero()) return;
    auto [it, fresh] = coeffs_.try_emplace(m, p);
    if (!fresh) {
        it->second += p;
        if (it->second.is_zero()) coeffs_.erase(it);
    }
}

AlternatingForm PolyForm::at(const Vector& point) const {
    std::vector<AlternatingForm::Term> terms;
    for (const auto& [m, p] : coeffs_) terms.emplace_back(m, p.evaluate(point));
    return AlternatingForm::from_terms(dim_, degree_, std::move(terms));
}

std::vector<double> PolyForm::at(const std::vector<double>& point) const {
    std::vector<double> out(binom(dim_, degree_), 0.0);
    for (const auto& [m, p] : coeffs_) out[colex_rank(m)] = p.evaluate(point);
    return out;
}

PolyForm& PolyForm::operator+=(const PolyForm& b) {
    check_same_space(*this, b);
    if (b.degree_ != degree_) throw std::invalid_argument("degree mismatch");
    for (const auto& [m, p] : b.coeffs_) add_term(m, p);
    return *this;
}

PolyForm& PolyForm::operator-=(const PolyForm& b) {
    check_same_space(*this, b);
    if (b.degree_ != degree_) throw std::invalid_argument("degree mismatch");
    for (const auto& [m, p] : b.coeffs_) add_term(m, p * Rational(-1));
    return *this;
}

PolyForm& PolyForm::operator*=(const Rational& c) {
    if (c.is_zero()) {
        coeffs_.clear();
        return *this;
    }
    for (auto& [m, p] : coeffs_) p *= c;
    return *this;
}

std::string PolyForm::str() const {
    if (coeffs_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, p] : coeffs_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << p.str() << ")";
        for (auto i : indices_of(m)) os << (i == indices_of(m).front() ? " " : "^") << "dx" << i + 1;
    }
    return os.str();
}

PolyForm d(const PolyForm& w) {
    PolyForm out(w.dim(), w.degree() + 1, w.dim_k());
    for (const auto& [m, p] : w.coeffs())
        for (std::size_t i = 0; i < w.dim(); ++i) {
            if (m & bit(i)) continue;
            Polynomial dp = p.derivative(i);
            if (dp.is_zero()) continue;
            out.add_term(m | bit(i), dp * Rational(position_sign(m, i)));
        }
    return out;
}

PolyForm d_vertical(const PolyForm& w) {
    Mask ym = w.vertical_mask();
    for (const auto& [m, p] : w.coeffs())
        if (m & ~ym) throw std::invalid_argument("d_vertical expects a form with y-differentials only");
    PolyForm out(w.dim(), w.degree() + 1, w.dim_k());
    for (const auto& [m, p] : w.coeffs())
        for (std::size_t i = w.dim_k(); i < w.dim(); ++i) {
            if (m & bit(i)) continue;
            Polynomial dp = p.derivative(i);
            if (!dp.is_zero()) out.add_term(m | bit(i), dp * Rational(position_sign(m, i)));
        }
    return out;
}

PolyForm wedge(const PolyForm& a, const PolyForm& b) {
    check_same_space(a, b);
    PolyForm out(a.dim(), a.degree() + b.degree(), a.dim_k());
    for (const auto& [ma, pa] : a.coeffs())
        for (const auto& [mb, pb] : b.coeffs()) {
            if (ma & mb) continue;
            out.add_term(ma | mb, (pa * pb) * Rational(wedge_sign(ma, mb)));
        }
    return out;
}

PolyForm contract(const VectorField& v, const PolyForm& w) {
    if (v.size() != w.dim()) throw std::invalid_argument("vector field has wrong dimension");
    if (w.degree() == 0) throw std::invalid_argument("contraction of a 0-form");
    PolyForm out(w.dim(), w.degree() - 1, w.dim_k());
    for (const auto& [m, p] : w.coeffs())
        for (auto j : indices_of(m)) {
            if (v[j].is_zero()) continue;
            out.add_term(m & ~bit(j), (v[j] * p) * Rational(position_sign(m, j)));
        }
    return out;
}

PolyForm pullback(const PolyForm& w, const std::vector<Polynomial>& phi) {
    if (phi.size() != w.dim()) throw std::invalid_argument("map has wrong number of components");
    std::size_t m = w.dim();
    std::vector<PolyForm> dphi;
    for (std::size_t j = 0; j < m; ++j) {
        PolyForm f(m, 1, w.dim_k());
        for (std::size_t i = 0; i < m; ++i) f.add_term(bit(i), phi[j].derivative(i));
        dphi.push_back(std::move(f));
    }
    PolyForm out(m, w.degree(), w.dim_k());
    for (const auto& [mask, p] : w.coeffs()) {
        PolyForm term(m, 0, w.dim_k());
        term.add_term(0, p.compose(phi));
        for (auto j : indices_of(mask)) term = wedge(term, dphi[j]);
        out += term;
    }
    return out;
}

bool is_closed(const PolyForm& w) { return d(w).is_zero(); }

PolyForm homotopy_primitive(const PolyForm& w, std::size_t r) {
    if (w.degree() == 0) throw std::invalid_argument("homotopy operator needs a form of positive degree");
    if (!is_closed(w)) throw std::invalid_argument("form is not closed");
    if (w.vertical_degree() > r) throw std::invalid_argument("form is not (k-r)-horizontal along L");
    std::size_t k = w.degree();
    Mask ym = w.vertical_mask();
    PolyForm theta(w.dim(), k - 1, w.dim_k());
    auto emit = [&](Mask m, Polynomial::Exponent e, std::size_t grow, int sign, const Rational& c, long long tpow) {
        if (tpow < 0) throw std::logic_error("negative power of t in the homotopy integrand");
        ++e[grow];
        theta.add_term(m, Polynomial::monomial(std::move(e), c * Rational(sign) / Rational(tpow + 1)));
    };
    for (const auto& [m, p] : w.coeffs()) {
        std::size_t ny = popcount(m & ym);
        // L-contraction: w at (x, t y) on (0, y) and the pulled back differentials
        for (const auto& [e, c] : p.terms()) {
            long long ydeg = 0, xdeg = 0;
            for (std::size_t i = 0; i < e.size(); ++i) (i < w.dim_k() ? xdeg : ydeg) += e[i];
            for (auto j : indices_of(m & ym))
                emit(m & ~bit(j), e, j, position_sign(m, j), c, ydeg + static_cast<long long>(ny) - 1);
            // K-contraction of w0 = w restricted to y = 0, dy = 0
            if (ny == 0 && ydeg == 0)
                for (auto i : indices_of(m))
                    emit(m & ~bit(i), e, i, position_sign(m, i), c, xdeg + static_cast<long long>(k) - 1);
        }
    }
    return theta;
}

PolyForm moser_alpha(const PolyForm& w, const PolyForm& w0) {
    check_same_space(w, w0);
    for (const auto& [m, p] : w0.coeffs())
        if (p.degree() > 0) throw std::invalid_argument("reference form must have constant coefficients");
    if (!is_closed(w)) throw std::invalid_argument("form is not closed");
    PolyForm diff = w0 - w;
    if (diff.vertical_degree() > 1)
        throw std::invalid_argument("L is not isotropic for both forms: the difference survives two L-contractions");
    return homotopy_primitive(diff, 1);
}

std::vector<PolyForm> chart_symbol(const PolyForm& w, std::size_t r) {
    if (w.degree() < r) throw std::invalid_argument("symbol degree exceeds the form degree");
    if (w.vertical_degree() > r) throw std::invalid_argument("form is not (k+1-r)-horizontal");
    std::size_t q = w.degree() - r;
    Mask ym = w.vertical_mask();
    std::vector<Mask> labels = combinations(w.dim_k(), q);
    std::vector<PolyForm> out(labels.size(), PolyForm(w.dim(), r, w.dim_k()));
    std::map<Mask, std::size_t> slot;
    for (std::size_t i = 0; i < labels.size(); ++i) slot[labels[i]] = i;
    int sign = (q * r) % 2 ? -1 : 1;  // dx^M ^ dy^I = sign * dy^I ^ dx^M
    for (const auto& [m, p] : w.coeffs()) {
        if (static_cast<std::size_t>(popcount(m & ym)) != r) continue;
        out[slot.at(m & ~ym)].add_term(m & ym, p * Rational(sign));
    }
    return out;
}

VectorField lie_bracket(const VectorField& a, const VectorField& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vector fields of different dimension");
    std::size_t m = a.size();
    VectorField out(m, Polynomial(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            out[i] += a[j] * b[i].derivative(j);
            out[i] -= b[j] * a[i].derivative(j);
        }
    return out;
}

InvolutivityResult involutive(const std::vector<VectorField>& fields, std::size_t samples, std::uint64_t seed) {
    InvolutivityResult res;
    if (fields.empty()) {
        res.involutive = true;
        return res;
    }
    std::size_t m = fields.front().size();
    std::vector<VectorField> brackets;
    for (std::size_t a = 0; a < fields.size(); ++a)
        for (std::size_t b = a + 1; b < fields.size(); ++b) brackets.push_back(lie_bracket(fields[a], fields[b]));
    auto eval = [&](const VectorField& f, const Vector& p) {
        Vector v(m);
        for (std::size_t i = 0; i < m; ++i) v[i] = f[i].evaluate(p);
        return v;
    };
    Rng rng(seed);
    std::vector<Vector> points{Vector(m)};
    for (std::size_t s = 0; s < samples; ++s) {
        Vector p(m);
        for (auto& x : p) x = rng.small_rational(5, 3);
        points.push_back(std::move(p));
    }
    std::vector<std::size_t> ranks;
    for (const auto& p : points) {
        RowReducer red(m);
        for (const auto& f : fields) red.add(eval(f, p));
        ranks.push_back(red.rank());
    }
    res.rank = *std::max_element(ranks.begin(), ranks.end());
    res.involutive = true;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (ranks[i] != res.rank) {
            res.rank_constant = false;
            std::ostringstream os;
            os << "rank drops to " << ranks[i] << " at sample " << i;
            res.diagnostics.push_back(os.str());
            continue;
        }
        RowReducer red(m);
        for (const auto& f : fields) red.add(eval(f, points[i]));
        for (std::size_t b = 0; b < brackets.size(); ++b)
            if (!red.in_span(eval(brackets[b], points[i]))) {
                if (res.involutive) {
                    std::ostringstream os;
                    os << "bracket " << b + 1 << " leaves the distribution at sample " << i;
                    res.diagnostics.push_back(os.str());
                }
                res.involutive = false;
            }
    }
    if (res.involutive) res.diagnostics.push_back("all brackets lie in the span at every sample point");
    return res;
}

// ---------------------------------------------------------------- Lie algebras

LieAlgebraData::LieAlgebraData(std::size_t dim, std::vector<Rational> constants) : dim_(dim), c_(std::move(constants)) {
    if (c_.size() != dim * dim * dim) throw std::invalid_argument("structure constants need dim^3 entries");
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = 0; b < dim; ++b)
            for (std::size_t cc = 0; cc < dim; ++cc)
                if (c(a, b, cc) != -c(a, cc, b)) throw std::invalid_argument("structure constants are not antisymmetric");
    for (std::size_t x = 0; x < dim; ++x)
        for (std::size_t y = 0; y < dim; ++y)
            for (std::size_t z = 0; z < dim; ++z) {
                Vector ex = unit_vector(dim, x), ey = unit_vector(dim, y), ez = unit_vector(dim, z);
                Vector j = bracket(bracket(ex, ey), ez);
                Vector j2 = bracket(bracket(ey, ez), ex);
                Vector j3 = bracket(bracket(ez, ex), ey);
                for (std::size_t i = 0; i < dim; ++i)
                    if (!(j[i] + j2[i] + j3[i]).is_zero())
                        throw std::invalid_argument("structure constants violate the Jacobi identity");
            }
}

LieAlgebraData LieAlgebraData::su2() {
    std::vector<Rational> c(27);
    auto set = [&](std::size_t a, std::size_t b, std::size_t cc, int v) { c[(a * 3 + b) * 3 + cc] = v; };
    for (std::size_t a = 0; a < 3; ++a) {
        std::size_t b = (a + 1) % 3, cc = (a + 2) % 3;
        set(a, b, cc, 1);
        set(a, cc, b, -1);
    }
    return LieAlgebraData(3, std::move(c));
}

Vector LieAlgebraData::bracket(const Vector& x, const Vector& y) const {
    Vector out(dim_);
    for (std::size_t b = 0; b < dim_; ++b) {
        if (x[b].is_zero()) continue;
        for (std::size_t cc = 0; cc < dim_; ++cc) {
            if (y[cc].is_zero()) continue;
            Rational f = x[b] * y[cc];
            for (std::size_t a = 0; a < dim_; ++a)
                if (!c(a, b, cc).is_zero()) out[a] += f * c(a, b, cc);
        }
    }
    return out;
}

AlternatingForm ce_d(const LieAlgebraData& g, const AlternatingForm& a) {
    if (a.dim() != g.dim()) throw std::invalid_argument("cochain lives on a different algebra");
    std::size_t p = a.degree();
    if (p >= g.dim()) return AlternatingForm(g.dim(), std::min(p + 1, g.dim()));
    if (p == 0) return AlternatingForm(g.dim(), 1);
    std::vector<AlternatingForm::Term> terms;
    for (Mask m : combinations(g.dim(), p + 1)) {
        std::vector<std::size_t> idx = indices_of(m);
        Rational value;
        for (std::size_t s = 0; s < idx.size(); ++s)
            for (std::size_t t = s + 1; t < idx.size(); ++t) {
                Vector br = g.bracket(unit_vector(g.dim(), idx[s]), unit_vector(g.dim(), idx[t]));
                if (is_zero(br)) continue;
                Rational v = contract(br, a).coeff(m & ~bit(idx[s]) & ~bit(idx[t]));
                value += (s + t) % 2 ? -v : v;
            }
        if (!value.is_zero()) terms.emplace_back(m, value);
    }
    return AlternatingForm::from_terms(g.dim(), p + 1, std::move(terms));
}

VectorValuedForm ce_d(const LieAlgebraData& g, const VectorValuedForm& a) {
    std::vector<AlternatingForm> comps;
    for (const auto& c : a.components()) comps.push_back(ce_d(g, c));
    return VectorValuedForm(std::move(comps));
}

bool is_subalgebra(const LieAlgebraData& g, const Subspace& L) {
    auto b = L.basis_vectors();
    for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t j = i + 1; j < b.size(); ++j)
            if (!L.contains(g.bracket(b[i], b[j]))) return false;
    return true;
}

Matrix su2_default_frame() {
    Matrix e(3, 2);
    e(0, 0) = 1;
    e(1, 1) = 1;
    return e;
}

Su2Report su2_example(const Matrix& frame) {
    if (frame.rows() != 3 || frame.cols() != 2) throw std::invalid_argument("frame must be a 3x2 matrix");
    if (rank(frame) != 2) throw std::invalid_argument("frame is not injective");
    LieAlgebraData g = LieAlgebraData::su2();
    Su2Report rep;
    std::vector<AlternatingForm> alpha, beta;
    for (std::size_t a = 0; a < 3; ++a) alpha.push_back(AlternatingForm::covector(unit_vector(3, a)));
    for (std::size_t a = 0; a < 3; ++a) {
        AlternatingForm b(3, 2);
        for (std::size_t x = 0; x < 3; ++x)
            for (std::size_t y = 0; y < 3; ++y) {
                Rational eps = g.c(a, x, y);
                if (!eps.is_zero()) b += wedge(alpha[x], alpha[y]) * (eps / Rational(2));
            }
        beta.push_back(b);
    }
    rep.betas_closed = true;
    for (const auto& b : beta) rep.betas_closed = rep.betas_closed && ce_d(g, b).is_zero();
    rep.ce_d_squared_zero = true;
    for (std::size_t p = 0; p <= 3; ++p)
        for (Mask m : combinations(3, p)) {
            AlternatingForm x = AlternatingForm::monomial(3, indices_of(m));
            rep.ce_d_squared_zero = rep.ce_d_squared_zero && ce_d(g, ce_d(g, x)).is_zero();
        }
    std::vector<AlternatingForm> comps;
    for (std::size_t mu = 0; mu < 2; ++mu) {
        AlternatingForm w(3, 2);
        for (std::size_t c = 0; c < 3; ++c)
            if (!frame(c, mu).is_zero()) w += beta[c] * frame(c, mu);
        comps.push_back(w);
    }
    rep.form = VectorValuedForm(std::move(comps));
    rep.L = Subspace::column_space(frame);
    rep.L_dim = rep.L.dim();
    rep.L_isotropic = is_isotropic(rep.L, 1, rep.form);
    rep.polylagrangian = check_polylagrangian(rep.L, rep.form);
    rep.involutive = is_subalgebra(g, rep.L);
    rep.classification = analyze_poly(rep.form).classification;
    return rep;
}

}  // namespace pdx
