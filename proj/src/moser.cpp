#include "pdx/moser.hpp"

#include <Eigen/Dense>
#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/float128.hpp>
#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "pdx/darboux.hpp"
#include "pdx/random.hpp"

namespace pdx {

namespace {

using quad = boost::multiprecision::number<boost::multiprecision::float128_backend, boost::multiprecision::et_off>;

template <class T>
using MatrixX = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <class T>
using VectorX = Eigen::Matrix<T, Eigen::Dynamic, 1>;

template <class T>
T convert(const Rational& r) {
    if constexpr (std::is_same_v<T, double>)
        return r.to_double();
    else
        return T(r.numerator().get_str()) / T(r.denominator().get_str());
}

template <class T>
bool finite(const std::vector<T>& v) {
    using std::abs;
    return std::all_of(v.begin(), v.end(),
                       [](const T& x) { return x == x && abs(x) <= std::numeric_limits<T>::max(); });
}

Eigen::Index ix(std::size_t i) { return static_cast<Eigen::Index>(i); }

// Polynomial with float coefficients, evaluated against a table of powers.
template <class T>
struct FPoly {
    std::vector<std::pair<std::vector<unsigned>, T>> terms;

    explicit FPoly(const Polynomial& p) {
        for (const auto& [e, c] : p.terms()) terms.emplace_back(e, convert<T>(c));
    }
    T eval(const std::vector<std::vector<T>>& pw) const {
        T s(0);
        for (const auto& [e, c] : terms) {
            T m = c;
            for (std::size_t i = 0; i < e.size(); ++i)
                if (e[i]) m *= pw[i][e[i]];
            s += m;
        }
        return s;
    }
};

// Dense matrix entry value = sign * poly, with the spatial gradient.
template <class T>
struct Entry {
    std::size_t row, col;
    T sign;
    FPoly<T> value;
    std::vector<FPoly<T>> grad;

    Entry(std::size_t r, std::size_t c, int s, const Polynomial& p) : row(r), col(c), sign(s), value(p) {
        for (std::size_t i = 0; i < p.nvars(); ++i) grad.emplace_back(p.derivative(i));
    }
};

int position_sign(Mask m, std::size_t j) { return popcount(m & (bit(j) - 1)) % 2 ? -1 : 1; }

unsigned max_degree(const PolyForm& w) {
    unsigned d = 0;
    for (const auto& [m, p] : w.coeffs()) d = std::max(d, p.degree());
    return d;
}

template <class T>
struct FieldCore {
    std::size_t dim = 0, rows = 0;
    std::vector<std::size_t> lcoords;
    MatrixX<T> m0;              // contraction of w0 against L0
    std::vector<Entry<T>> mw;   // contraction of w, sparse
    std::vector<Entry<T>> alpha;
    unsigned degree = 0;
    T tol;

    FieldCore(const PolyForm& w, const PolyForm& w0, const PolyForm& a, double tolerance)
        : dim(w.dim()), rows(binom(w.dim(), w.degree() - 1)), tol(tolerance) {
        for (std::size_t j = w.dim_k(); j < dim; ++j) lcoords.push_back(j);
        m0 = MatrixX<T>::Zero(ix(rows), ix(lcoords.size()));
        Vector origin(dim);
        for (std::size_t col = 0; col < lcoords.size(); ++col) {
            std::size_t j = lcoords[col];
            for (const auto& [m, p] : w0.coeffs())
                if (m & bit(j))
                    m0(ix(colex_rank(m & ~bit(j))), ix(col)) += T(position_sign(m, j)) * convert<T>(p.evaluate(origin));
            for (const auto& [m, p] : w.coeffs())
                if (m & bit(j)) mw.emplace_back(colex_rank(m & ~bit(j)), col, position_sign(m, j), p);
        }
        for (const auto& [m, p] : a.coeffs()) alpha.emplace_back(colex_rank(m), 0, 1, p);
        degree = std::max(max_degree(w), max_degree(a));
    }

    std::vector<T> operator()(const std::vector<T>& z, T t, BasicMatrix<T>* dx, T& residual) const {
        if (z.size() != dim) throw std::invalid_argument("point has wrong dimension");
        std::vector<std::vector<T>> pw(dim, std::vector<T>(degree + 1, T(1)));
        for (std::size_t i = 0; i < dim; ++i)
            for (unsigned p = 1; p <= degree; ++p) pw[i][p] = pw[i][p - 1] * z[i];
        auto nl = ix(lcoords.size());
        MatrixX<T> m = (T(1) - t) * m0;
        for (const auto& e : mw) m(ix(e.row), ix(e.col)) += t * e.sign * e.value.eval(pw);
        VectorX<T> a = VectorX<T>::Zero(ix(rows));
        for (const auto& e : alpha) a(ix(e.row)) += e.value.eval(pw);

        Eigen::ColPivHouseholderQR<MatrixX<T>> qr(m);
        qr.setThreshold(T(1e-12));
        if (qr.rank() < nl) throw FlowError("singular Moser system: w_t is not multilagrangian along L0 here");
        VectorX<T> x = qr.solve(a);
        residual = (m * x - a).template lpNorm<Eigen::Infinity>();
        if (!(residual < tol)) throw FlowError("Moser system inconsistent: alpha is not in the image of L0");

        std::vector<T> out(dim, T(0));
        for (Eigen::Index j = 0; j < nl; ++j) out[lcoords[static_cast<std::size_t>(j)]] = x(j);
        if (dx) {
            *dx = BasicMatrix<T>{dim, std::vector<T>(dim * dim, T(0))};
            for (std::size_t i = 0; i < dim; ++i) {
                VectorX<T> rhs = VectorX<T>::Zero(ix(rows));
                for (const auto& e : alpha) rhs(ix(e.row)) += e.grad[i].eval(pw);
                for (const auto& e : mw) rhs(ix(e.row)) -= t * e.sign * e.grad[i].eval(pw) * x(ix(e.col));
                VectorX<T> dxi = qr.solve(rhs);
                for (Eigen::Index j = 0; j < nl; ++j) (*dx)(lcoords[static_cast<std::size_t>(j)], i) = dxi(j);
            }
        }
        return out;
    }
};

template <class T>
T abs_det(const BasicMatrix<T>& j) {
    MatrixX<T> m(ix(j.n), ix(j.n));
    for (std::size_t r = 0; r < j.n; ++r)
        for (std::size_t c = 0; c < j.n; ++c) m(ix(r), ix(c)) = j(r, c);
    using std::abs;
    return abs(T(m.partialPivLu().determinant()));
}

template <class T>
BasicMatrix<T> matmul(const BasicMatrix<T>& a, const BasicMatrix<T>& b) {
    BasicMatrix<T> c{a.n, std::vector<T>(a.n * a.n, T(0))};
    for (std::size_t i = 0; i < a.n; ++i)
        for (std::size_t k = 0; k < a.n; ++k) {
            const T& v = a(i, k);
            if (v == 0) continue;
            for (std::size_t j = 0; j < a.n; ++j) c(i, j) += v * b(k, j);
        }
    return c;
}

template <class T>
void axpy(std::vector<T>& y, const T& s, const std::vector<T>& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += s * x[i];
}

template <class T>
struct State {
    std::vector<T> point;
    BasicMatrix<T> jacobian;
    T min_abs_det;
    std::size_t steps = 0;
};

// One attempt at a fixed step count; false on a non-finite state.
template <class T, class F>
bool rk4(const F& f, const std::vector<T>& p0, std::size_t steps, const FlowOptions& opts, bool with_j, State<T>& st) {
    std::size_t n = p0.size();
    st.point = p0;
    st.jacobian = BasicMatrix<T>::identity(n);
    st.min_abs_det = T(1);
    st.steps = steps;
    T h = T(opts.t_end) / T(static_cast<double>(steps));
    std::vector<T> k[4];
    BasicMatrix<T> dx[4], kj[4];
    const T half = h / 2;
    const T cz[4] = {T(0), half, half, h};
    const T wgt[4] = {h / 6, h / 3, h / 3, h / 6};
    for (std::size_t s = 0; s < steps; ++s) {
        T t = T(static_cast<double>(s)) * h;
        for (int stage = 0; stage < 4; ++stage) {
            std::vector<T> z = st.point;
            BasicMatrix<T> j = st.jacobian;
            if (stage > 0) {
                axpy(z, cz[stage], k[stage - 1]);
                if (with_j) axpy(j.a, cz[stage], kj[stage - 1].a);
            }
            f(z, t + cz[stage], k[stage], with_j ? &dx[stage] : nullptr);
            if (with_j) kj[stage] = matmul(dx[stage], j);
        }
        for (int stage = 0; stage < 4; ++stage) {
            axpy(st.point, wgt[stage], k[stage]);
            if (with_j) axpy(st.jacobian.a, wgt[stage], kj[stage].a);
        }
        if (!finite(st.point) || !finite(st.jacobian.a)) return false;
        if (with_j) {
            T det = abs_det(st.jacobian);
            if (det < st.min_abs_det) st.min_abs_det = det;
            if (det < T(opts.det_floor)) throw FlowError("flow Jacobian degenerated");
        }
    }
    return true;
}

template <class T, class F>
State<T> run(const F& f, const std::vector<T>& p0, std::size_t steps, const FlowOptions& opts, bool with_j) {
    if (steps == 0) throw std::invalid_argument("step count must be positive");
    State<T> st;
    for (unsigned attempt = 0; attempt <= opts.max_halvings; ++attempt, steps *= 2)
        if (rk4(f, p0, steps, opts, with_j, st)) return st;
    throw FlowError("step halving exhausted");
}

template <class T>
std::vector<T> pullback_coeffs(const std::vector<T>& coeffs, std::size_t dim, std::size_t degree,
                               const BasicMatrix<T>& j) {
    if (j.n != dim) throw std::invalid_argument("linear map has wrong size");
    auto masks = combinations(dim, degree);
    std::vector<T> out(coeffs.size(), T(0));
    MatrixX<T> minor(ix(degree), ix(degree));
    for (Mask target : masks) {
        auto cols = indices_of(target);
        T s(0);
        for (Mask src : masks) {
            const T& c = coeffs[colex_rank(src)];
            if (c == 0) continue;
            auto rows = indices_of(src);
            for (std::size_t a = 0; a < degree; ++a)
                for (std::size_t b = 0; b < degree; ++b) minor(ix(a), ix(b)) = j(rows[a], cols[b]);
            s += c * (degree == 0 ? T(1) : T(minor.determinant()));
        }
        out[colex_rank(target)] = s;
    }
    return out;
}

template <class T>
std::vector<T> dense_at(const PolyForm& w, const std::vector<T>& z) {
    std::vector<T> out(binom(w.dim(), w.degree()), T(0));
    for (const auto& [m, p] : w.coeffs()) {
        T s(0);
        for (const auto& [e, c] : p.terms()) {
            T mono = convert<T>(c);
            for (std::size_t i = 0; i < e.size(); ++i)
                for (unsigned k = 0; k < e[i]; ++k) mono *= z[i];
            s += mono;
        }
        out[colex_rank(m)] = s;
    }
    return out;
}

template <class T>
MoserReport verify_impl(const PolyForm& w, const PolyForm& w0, const PolyForm& a,
                        const std::vector<std::vector<double>>& points, std::size_t steps, const FlowOptions& opts,
                        double tol) {
    FieldCore<T> core(w, w0, a, tol);
    T max_field(0);
    auto f = [&](const std::vector<T>& z, T t, std::vector<T>& x, BasicMatrix<T>* dx) {
        T res;
        x = core(z, t, dx, res);
        if (res > max_field) max_field = res;
    };
    std::vector<T> ref = dense_at(w0, std::vector<T>(w.dim(), T(0)));
    T s(opts.t_end);
    MoserReport rep;
    rep.steps = steps;
    rep.extended_precision = !std::is_same_v<T, double>;
    for (const auto& p : points) {
        std::vector<T> z(p.begin(), p.end());
        State<T> st = run(f, z, steps, opts, true);
        std::vector<T> ws = dense_at(w, st.point);
        for (std::size_t i = 0; i < ws.size(); ++i) ws[i] = (T(1) - s) * ref[i] + s * ws[i];
        auto pulled = pullback_coeffs(ws, w.dim(), w.degree(), st.jacobian);
        T res(0);
        using std::abs;
        for (std::size_t i = 0; i < pulled.size(); ++i) {
            T diff = abs(T(pulled[i] - ref[i]));
            if (diff > res) res = diff;
        }
        rep.samples.push_back({p, static_cast<double>(res), static_cast<double>(st.min_abs_det)});
        rep.max_residual = std::max(rep.max_residual, static_cast<double>(res));
        rep.steps = st.steps;
    }
    rep.max_field_residual = static_cast<double>(max_field);
    return rep;
}

}  // namespace

struct MoserField::Compiled : FieldCore<double> {
    using FieldCore<double>::FieldCore;
};

MoserField::MoserField(const PolyForm& w, const PolyForm& w0, const PolyForm& alpha, double tol)
    : w_(w), w0_(w0), alpha_(alpha), dim_(w.dim()), tol_(tol) {
    if (w.degree() == 0) throw std::invalid_argument("Moser field needs a form of positive degree");
    if (w0.dim() != dim_ || alpha.dim() != dim_ || w0.degree() != w.degree() || alpha.degree() + 1 != w.degree())
        throw std::invalid_argument("Moser data have inconsistent shapes");
    c_ = std::make_shared<Compiled>(w, w0, alpha, tol);
}

MoserField MoserField::from_form(const PolyForm& w, double tol) {
    PolyForm w0 = PolyForm::constant(w.at(Vector(w.dim())), w.dim_k());
    return MoserField(w, w0, moser_alpha(w, w0), tol);
}

std::vector<double> MoserField::operator()(const std::vector<double>& z, double t, DMatrix* dx) const {
    double res = 0;
    auto out = (*c_)(z, t, dx, res);
    max_residual_ = std::max(max_residual_, res);
    return out;
}

FieldFn MoserField::fn() const {
    return [this](const std::vector<double>& z, double t, std::vector<double>& x, DMatrix* dx) { x = (*this)(z, t, dx); };
}

std::vector<double> moser_field(const PolyForm& w, const PolyForm& w0, const PolyForm& alpha,
                                const std::vector<double>& p, double t) {
    return MoserField(w, w0, alpha)(p, t);
}

FlowState integrate_flow(const FieldFn& field, const std::vector<double>& p0, std::size_t steps,
                         const FlowOptions& opts) {
    State<double> s = run(field, p0, steps, opts, true);
    FlowState st{s.point, s.jacobian, opts.t_end, s.min_abs_det, s.steps, -1};
    if (opts.fd_cross_check) {
        double gap = 0;
        for (std::size_t i = 0; i < p0.size(); ++i) {
            auto plus = p0, minus = p0;
            plus[i] += opts.fd_h;
            minus[i] -= opts.fd_h;
            auto fp = run(field, plus, st.steps, opts, false).point;
            auto fm = run(field, minus, st.steps, opts, false).point;
            for (std::size_t r = 0; r < p0.size(); ++r)
                gap = std::max(gap, std::abs((fp[r] - fm[r]) / (2 * opts.fd_h) - st.jacobian(r, i)));
        }
        st.fd_gap = gap;
    }
    return st;
}

std::vector<double> pullback_coefficients(const std::vector<double>& coeffs, std::size_t dim, std::size_t degree,
                                          const DMatrix& j) {
    return pullback_coeffs(coeffs, dim, degree, j);
}

MoserReport verify_darboux(const PolyForm& w, const std::vector<std::vector<double>>& points, std::size_t steps,
                           const FlowOptions& opts, double tol) {
    if (!is_closed(w)) throw std::invalid_argument("form is not closed");
    PolyForm w0 = PolyForm::constant(w.at(Vector(w.dim())), w.dim_k());
    PolyForm a = moser_alpha(w, w0);
    if (opts.extended_precision) return verify_impl<quad>(w, w0, a, points, steps, opts, tol);
    return verify_impl<double>(w, w0, a, points, steps, opts, tol);
}

std::vector<std::vector<double>> ball_samples(std::size_t dim, std::size_t count, double radius, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::vector<double>> out;
    while (out.size() < count) {
        std::vector<double> p(dim);
        double n2 = 0;
        for (auto& x : p) {
            x = rng.uniform_real(-radius, radius);
            n2 += x * x;
        }
        if (n2 <= radius * radius) out.push_back(std::move(p));
    }
    return out;
}

PerturbedModel perturbed_multisymplectic(std::uint64_t seed) {
    auto model = canonical_multi_model(1, 2, 2, 2);
    const std::size_t dim = model.form.dim(), dim_k = 3;
    PerturbedModel out;
    out.w0 = PolyForm::constant(model.form, dim_k);
    Rng rng(seed);
    // x = (z0, z1) feeds every component, q = z2 feeds q and p, p = (z3, z4, z5) only p.
    auto allowed = [&](std::size_t comp) -> long long { return comp < 2 ? 2 : comp < 3 ? 3 : static_cast<long long>(dim); };
    for (std::size_t i = 0; i < dim; ++i) {
        Polynomial phi = Polynomial::variable(dim, i);
        std::set<Polynomial::Exponent> used;
        for (int t = 0; t < 3; ++t) {
            Polynomial::Exponent e;
            do {  // distinct monomials, so no coefficient sums past 1/20
                e.assign(dim, 0);
                auto deg = t == 0 ? 2 : rng.uniform(2, 3);
                for (long long d = 0; d < deg; ++d) ++e[static_cast<std::size_t>(rng.uniform(0, allowed(i) - 1))];
            } while (!used.insert(e).second);
            phi.add_term(e, Rational(rng.uniform(1, 5) * (rng.coin() ? 1 : -1), 100));
        }
        out.map.push_back(std::move(phi));
    }
    out.w = pullback(out.w0, out.map);
    return out;
}

}  // namespace pdx
