#include "pdx/linalg.hpp"

#include <cstdint>
#include <stdexcept>

namespace pdx {

Vector unit_vector(std::size_t dim, std::size_t i) {
    Vector v(dim);
    v.at(i) = 1;
    return v;
}

bool is_zero(const Vector& v) {
    for (const auto& x : v)
        if (!x.is_zero()) return false;
    return true;
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

Matrix Matrix::from_rows(const std::vector<Vector>& rows, std::size_t cols) {
    Matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) throw std::invalid_argument("row length mismatch");
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

Matrix Matrix::from_columns(const std::vector<Vector>& cols, std::size_t rows) {
    Matrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j].size() != rows) throw std::invalid_argument("column length mismatch");
        for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
}

Vector Matrix::row(std::size_t i) const {
    return Vector(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_);
}

Vector Matrix::col(std::size_t j) const {
    Vector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
}

std::vector<Vector> Matrix::row_list() const {
    std::vector<Vector> out;
    out.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out.push_back(row(i));
    return out;
}

std::vector<Vector> Matrix::column_list() const {
    std::vector<Vector> out;
    out.reserve(cols_);
    for (std::size_t j = 0; j < cols_; ++j) out.push_back(col(j));
    return out;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Vector Matrix::apply(const Vector& v) const {
    if (v.size() != cols_) throw std::invalid_argument("matrix-vector size mismatch");
    Vector out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            if (!v[j].is_zero() && !(*this)(i, j).is_zero()) out[i] += (*this)(i, j) * v[j];
    return out;
}

Matrix Matrix::hstack(const Matrix& b) const {
    if (rows_ != b.rows_) throw std::invalid_argument("hstack row mismatch");
    Matrix m(rows_, cols_ + b.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j);
        for (std::size_t j = 0; j < b.cols_; ++j) m(i, cols_ + j) = b(i, j);
    }
    return m;
}

Matrix Matrix::vstack(const Matrix& b) const {
    if (cols_ != b.cols_) throw std::invalid_argument("vstack column mismatch");
    Matrix m(rows_ + b.rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j);
    for (std::size_t i = 0; i < b.rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(rows_ + i, j) = b(i, j);
    return m;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product size mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const Rational& x = a(i, k);
            if (x.is_zero()) continue;
            for (std::size_t j = 0; j < b.cols_; ++j)
                if (!b(k, j).is_zero()) c(i, j) += x * b(k, j);
        }
    return c;
}

RrefResult rref(const Matrix& in) {
    RrefResult r{in, 0, {}};
    Matrix& m = r.m;
    std::size_t row = 0;
    for (std::size_t c = 0; c < m.cols() && row < m.rows(); ++c) {
        std::size_t p = row;
        while (p < m.rows() && m(p, c).is_zero()) ++p;
        if (p == m.rows()) continue;
        if (p != row)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(row, j));
        Rational inv = Rational(1) / m(row, c);
        for (std::size_t j = c; j < m.cols(); ++j) m(row, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row || m(i, c).is_zero()) continue;
            Rational f = m(i, c);
            for (std::size_t j = c; j < m.cols(); ++j)
                if (!m(row, j).is_zero()) m(i, j).submul(f, m(row, j));
        }
        r.pivots.push_back(c);
        ++row;
    }
    r.rank = row;
    return r;
}

std::size_t rank(const Matrix& m) { return rref(m).rank; }

namespace {

constexpr std::uint64_t kModPrime = (std::uint64_t(1) << 61) - 1;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % kModPrime);
}

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e) {
    std::uint64_t r = 1;
    for (; e; e >>= 1, a = mul_mod(a, a))
        if (e & 1) r = mul_mod(r, a);
    return r;
}

std::uint64_t reduce_mod(const mpz_class& z) {
    mpz_class m = z % kModPrime;
    if (m < 0) m += kModPrime;
    return m.get_ui();
}

}  // namespace

std::size_t modular_rank(const std::vector<Vector>& rows) {
    if (rows.empty()) return 0;
    std::size_t cols = rows.front().size();
    std::vector<std::vector<std::uint64_t>> basis;  // each row normalized at its pivot
    std::vector<std::size_t> pivots;
    for (const auto& row : rows) {
        std::vector<std::uint64_t> v(cols, 0);
        for (std::size_t j = 0; j < cols; ++j) {
            if (row[j].is_zero()) continue;
            std::uint64_t den = reduce_mod(row[j].denominator());
            if (den == 0) return 0;
            v[j] = mul_mod(reduce_mod(row[j].numerator()), pow_mod(den, kModPrime - 2));
        }
        for (std::size_t i = 0; i < basis.size(); ++i) {
            std::uint64_t f = v[pivots[i]];
            if (f == 0) continue;
            for (std::size_t j = pivots[i]; j < cols; ++j)
                if (basis[i][j]) v[j] = (v[j] + kModPrime - mul_mod(f, basis[i][j])) % kModPrime;
        }
        std::size_t p = 0;
        while (p < cols && v[p] == 0) ++p;
        if (p == cols) continue;
        std::uint64_t inv = pow_mod(v[p], kModPrime - 2);
        for (std::size_t j = p; j < cols; ++j) v[j] = mul_mod(v[j], inv);
        basis.push_back(std::move(v));
        pivots.push_back(p);
    }
    return basis.size();
}

Rational determinant(const Matrix& in) {
    if (in.rows() != in.cols()) throw std::invalid_argument("determinant of non-square matrix");
    Matrix m = in;
    std::size_t n = m.rows();
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m(p, c).is_zero()) ++p;
        if (p == n) return Rational(0);
        if (p != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
            det = -det;
        }
        det *= m(c, c);
        Rational inv = Rational(1) / m(c, c);
        for (std::size_t i = c + 1; i < n; ++i) {
            if (m(i, c).is_zero()) continue;
            Rational f = m(i, c) * inv;
            for (std::size_t j = c; j < n; ++j)
                if (!m(c, j).is_zero()) m(i, j).submul(f, m(c, j));
        }
    }
    return det;
}

Matrix inverse(const Matrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("inverse of non-square matrix");
    std::size_t n = m.rows();
    RrefResult r = rref(m.hstack(Matrix::identity(n)));
    if (r.rank < n || (n > 0 && r.pivots[n - 1] != n - 1))
        throw std::invalid_argument("matrix is singular");
    Matrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = r.m(i, n + j);
    return inv;
}

std::optional<Vector> solve(const Matrix& a, const Vector& b) {
    if (b.size() != a.rows()) throw std::invalid_argument("solve size mismatch");
    Matrix aug = a.hstack(Matrix::from_columns({b}, a.rows()));
    RrefResult r = rref(aug);
    if (r.rank > 0 && r.pivots[r.rank - 1] == a.cols()) return std::nullopt;
    Vector x(a.cols());
    for (std::size_t i = 0; i < r.rank; ++i) x[r.pivots[i]] = r.m(i, a.cols());
    return x;
}

void RowReducer::reduce(Vector& row) const {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        std::size_t p = pivots_[i];
        if (row[p].is_zero()) continue;
        Rational f = row[p];
        const Vector& r = rows_[i];
        for (std::size_t j = p; j < cols_; ++j)
            if (!r[j].is_zero()) row[j].submul(f, r[j]);
    }
}

bool RowReducer::add(Vector row) {
    if (row.size() != cols_) throw std::invalid_argument("RowReducer row length mismatch");
    if (full()) return false;
    reduce(row);
    std::size_t p = 0;
    while (p < cols_ && row[p].is_zero()) ++p;
    if (p == cols_) return false;
    Rational inv = Rational(1) / row[p];
    for (std::size_t j = p; j < cols_; ++j)
        if (!row[j].is_zero()) row[j] *= inv;
    // keep existing rows fully reduced against the new pivot
    for (auto& r : rows_) {
        if (r[p].is_zero()) continue;
        Rational f = r[p];
        for (std::size_t j = p; j < cols_; ++j)
            if (!row[j].is_zero()) r[j].submul(f, row[j]);
    }
    std::size_t pos = 0;
    while (pos < pivots_.size() && pivots_[pos] < p) ++pos;
    rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(pos), std::move(row));
    pivots_.insert(pivots_.begin() + static_cast<std::ptrdiff_t>(pos), p);
    return true;
}

bool RowReducer::in_span(Vector row) const {
    reduce(row);
    return is_zero(row);
}

RrefResult RowReducer::result() const {
    return RrefResult{Matrix::from_rows(rows_, cols_), rows_.size(), pivots_};
}

Subspace Subspace::full(std::size_t n) {
    Subspace s(n);
    s.basis_ = Matrix::identity(n);
    for (std::size_t i = 0; i < n; ++i) s.pivots_.push_back(i);
    return s;
}

Subspace Subspace::span(std::size_t ambient, const std::vector<Vector>& vectors) {
    RowReducer r(ambient);
    for (const auto& v : vectors) r.add(v);
    return from_reducer(r);
}

Subspace Subspace::row_space(const Matrix& m) {
    RowReducer r(m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) r.add(m.row(i));
    return from_reducer(r);
}

Subspace Subspace::column_space(const Matrix& m) { return row_space(m.transpose()); }

Subspace Subspace::from_reducer(const RowReducer& r) {
    Subspace s(r.cols());
    RrefResult res = r.result();
    s.basis_ = std::move(res.m);
    s.pivots_ = std::move(res.pivots);
    return s;
}

bool Subspace::contains(const Vector& v) const {
    if (v.size() != ambient_) throw std::invalid_argument("Subspace::contains dimension mismatch");
    Vector w = v;
    for (std::size_t i = 0; i < dim(); ++i) {
        const Rational& f = w[pivots_[i]];
        if (f.is_zero()) continue;
        Rational c = f;
        for (std::size_t j = 0; j < ambient_; ++j)
            if (!basis_(i, j).is_zero()) w[j].submul(c, basis_(i, j));
    }
    return is_zero(w);
}

bool Subspace::contains(const Subspace& s) const {
    for (std::size_t i = 0; i < s.dim(); ++i)
        if (!contains(s.basis_vector(i))) return false;
    return true;
}

Vector Subspace::coordinates(const Vector& v) const {
    if (!contains(v)) throw std::invalid_argument("vector not in subspace");
    Vector c(dim());
    for (std::size_t i = 0; i < dim(); ++i) c[i] = v[pivots_[i]];
    return c;
}

Subspace kernel(const Matrix& m) {
    RowReducer red(m.cols());
    for (std::size_t i = 0; i < m.rows() && !red.full(); ++i) red.add(m.row(i));
    return kernel_of_reduced(red.result());
}

Subspace kernel_of_reduced(const RrefResult& r) {
    std::size_t n = r.m.cols();
    std::vector<bool> is_pivot(n, false);
    for (auto p : r.pivots) is_pivot[p] = true;
    std::vector<Vector> basis;
    for (std::size_t f = 0; f < n; ++f) {
        if (is_pivot[f]) continue;
        Vector v(n);
        v[f] = 1;
        for (std::size_t i = 0; i < r.rank; ++i) v[r.pivots[i]] = -r.m(i, f);
        basis.push_back(std::move(v));
    }
    return Subspace::span(n, basis);
}

Subspace sum(const Subspace& a, const Subspace& b) {
    if (a.ambient_dim() != b.ambient_dim()) throw std::invalid_argument("sum of subspaces of different spaces");
    RowReducer r(a.ambient_dim());
    for (std::size_t i = 0; i < a.dim(); ++i) r.add(a.basis_vector(i));
    for (std::size_t i = 0; i < b.dim(); ++i) r.add(b.basis_vector(i));
    return Subspace::from_reducer(r);
}

Subspace annihilator(const Subspace& a) { return kernel(a.basis()); }

Subspace intersect(const Subspace& a, const Subspace& b) {
    if (a.ambient_dim() != b.ambient_dim())
        throw std::invalid_argument("intersection of subspaces of different spaces");
    // x in a, y in b with x - y = 0; the a-part of each solution spans the meet
    std::size_t n = a.ambient_dim(), da = a.dim(), db = b.dim();
    RowReducer red(da + db);
    for (std::size_t i = 0; i < n && !red.full(); ++i) {
        Vector row(da + db);
        for (std::size_t j = 0; j < da; ++j) row[j] = a.basis()(j, i);
        for (std::size_t j = 0; j < db; ++j) row[da + j] = -b.basis()(j, i);
        red.add(std::move(row));
    }
    Subspace sol = kernel_of_reduced(red.result());
    std::vector<Vector> out;
    for (std::size_t k = 0; k < sol.dim(); ++k) {
        Vector x(n);
        for (std::size_t j = 0; j < da; ++j) {
            const Rational& c = sol.basis()(k, j);
            if (c.is_zero()) continue;
            for (std::size_t i = 0; i < n; ++i)
                if (!a.basis()(j, i).is_zero()) x[i] += c * a.basis()(j, i);
        }
        out.push_back(std::move(x));
    }
    return Subspace::span(n, out);
}

Subspace complement(const Subspace& a, const Subspace& inside) {
    std::size_t n = a.ambient_dim();
    RowReducer r(n);
    for (std::size_t i = 0; i < a.dim(); ++i) r.add(a.basis_vector(i));
    std::vector<Vector> chosen;
    std::size_t target = inside.dim();
    for (std::size_t i = 0; i < n && r.rank() < target; ++i) {
        Vector e = unit_vector(n, i);
        if (inside.contains(e) && r.add(e)) chosen.push_back(std::move(e));
    }
    for (std::size_t i = 0; i < inside.dim() && r.rank() < target; ++i) {
        Vector v = inside.basis_vector(i);
        if (r.add(v)) chosen.push_back(std::move(v));
    }
    return Subspace::span(n, chosen);
}

Subspace complement(const Subspace& a) { return complement(a, Subspace::full(a.ambient_dim())); }

Subspace image(const Matrix& m, const Subspace& s) {
    RowReducer r(m.rows());
    for (std::size_t i = 0; i < s.dim(); ++i) r.add(m.apply(s.basis_vector(i)));
    return Subspace::from_reducer(r);
}

}  // namespace pdx
