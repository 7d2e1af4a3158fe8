#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "pdx/rational.hpp"

namespace pdx {

using Vector = std::vector<Rational>;

Vector unit_vector(std::size_t dim, std::size_t i);
bool is_zero(const Vector& v);

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

    static Matrix identity(std::size_t n);
    static Matrix from_rows(const std::vector<Vector>& rows, std::size_t cols);
    static Matrix from_columns(const std::vector<Vector>& cols, std::size_t rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    Vector row(std::size_t i) const;
    Vector col(std::size_t j) const;
    std::vector<Vector> row_list() const;
    std::vector<Vector> column_list() const;

    Matrix transpose() const;
    Vector apply(const Vector& v) const;  // M v
    Matrix hstack(const Matrix& b) const;
    Matrix vstack(const Matrix& b) const;

    friend Matrix operator*(const Matrix& a, const Matrix& b);
    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Rational> a_;
};

struct RrefResult {
    Matrix m;
    std::size_t rank = 0;
    std::vector<std::size_t> pivots;
};

RrefResult rref(const Matrix& m);
std::size_t rank(const Matrix& m);
// Rank of the rows reduced modulo the prime 2^61 - 1. Never exceeds the
// rational rank; returns 0 when some denominator is divisible by the prime.
std::size_t modular_rank(const std::vector<Vector>& rows);
Rational determinant(const Matrix& m);
Matrix inverse(const Matrix& m);  // throws std::invalid_argument when singular
std::optional<Vector> solve(const Matrix& a, const Vector& b);

// Streaming Gauss-Jordan: rows are reduced as they arrive, so tall constraint
// systems never need to be materialized.
class RowReducer {
public:
    explicit RowReducer(std::size_t cols) : cols_(cols) {}
    bool add(Vector row);  // true when the row was independent
    std::size_t rank() const { return rows_.size(); }
    std::size_t cols() const { return cols_; }
    bool full() const { return rows_.size() == cols_; }
    bool in_span(Vector row) const;
    RrefResult result() const;

private:
    void reduce(Vector& row) const;
    std::size_t cols_;
    std::vector<Vector> rows_;
    std::vector<std::size_t> pivots_;
};

class Subspace {
public:
    explicit Subspace(std::size_t ambient = 0) : ambient_(ambient), basis_(0, ambient) {}

    static Subspace full(std::size_t n);
    static Subspace span(std::size_t ambient, const std::vector<Vector>& vectors);
    static Subspace row_space(const Matrix& m);
    static Subspace column_space(const Matrix& m);
    static Subspace from_reducer(const RowReducer& r);

    std::size_t ambient_dim() const { return ambient_; }
    std::size_t dim() const { return basis_.rows(); }
    const Matrix& basis() const { return basis_; }  // rows, RREF
    Vector basis_vector(std::size_t i) const { return basis_.row(i); }
    std::vector<Vector> basis_vectors() const { return basis_.row_list(); }
    Matrix basis_columns() const { return basis_.transpose(); }
    const std::vector<std::size_t>& pivots() const { return pivots_; }

    bool contains(const Vector& v) const;
    bool contains(const Subspace& s) const;
    // Coefficients of v in the stored basis; v must lie in the subspace.
    Vector coordinates(const Vector& v) const;

    friend bool operator==(const Subspace& a, const Subspace& b) {
        return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
    }
    friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }

private:
    std::size_t ambient_;
    Matrix basis_;
    std::vector<std::size_t> pivots_;
};

Subspace kernel(const Matrix& m);
// Null space of a matrix already in reduced row-echelon form.
Subspace kernel_of_reduced(const RrefResult& r);
Subspace sum(const Subspace& a, const Subspace& b);
Subspace intersect(const Subspace& a, const Subspace& b);
Subspace annihilator(const Subspace& a);
// Direct complement of a inside `inside`; standard basis vectors are tried in
// index order, then the basis rows of `inside`.
Subspace complement(const Subspace& a, const Subspace& inside);
Subspace complement(const Subspace& a);

// Image of a subspace of the domain of m (columns of m are images of the
// standard basis).
Subspace image(const Matrix& m, const Subspace& s);

}  // namespace pdx
