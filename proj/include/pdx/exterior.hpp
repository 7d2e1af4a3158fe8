#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pdx/linalg.hpp"

namespace pdx {

// A strictly increasing multi-index over 0-based coordinates, stored as a bit set.
using Mask = std::uint64_t;
constexpr std::size_t kMaxDim = 64;

inline int popcount(Mask m) { return __builtin_popcountll(m); }
inline Mask bit(std::size_t i) { return Mask(1) << i; }
inline Mask lowbit(Mask m) { return m & (~m + 1); }
// Lexicographic order on index sets of equal size.
struct MaskLess {
    bool operator()(Mask a, Mask b) const { return a != b && (a & lowbit(a ^ b)) != 0; }
};

std::vector<std::size_t> indices_of(Mask m);
Mask mask_of(const std::vector<std::size_t>& idx);  // indices must be distinct
std::uint64_t binom(std::size_t n, std::size_t k);
// All k-subsets of {0..n-1} in lexicographic order.
std::vector<Mask> combinations(std::size_t n, std::size_t k);
// Position of a k-subset in colexicographic order; used for dense coordinates.
std::size_t colex_rank(Mask m);
Mask colex_unrank(std::size_t rank, std::size_t k);

class AlternatingForm {
public:
    using Term = std::pair<Mask, Rational>;

    AlternatingForm() = default;
    AlternatingForm(std::size_t dim, std::size_t degree);

    // Terms may repeat and be unsorted; zero sums are dropped.
    static AlternatingForm from_terms(std::size_t dim, std::size_t degree, std::vector<Term> terms);
    // The form c * e^{i_1} ^ ... ^ e^{i_k} for indices in any order.
    static AlternatingForm monomial(std::size_t dim, const std::vector<std::size_t>& idx,
                                    const Rational& c = 1);
    static AlternatingForm covector(const Vector& v);
    static AlternatingForm scalar(std::size_t dim, const Rational& c);
    static AlternatingForm from_vector(std::size_t dim, std::size_t degree, const Vector& v);

    std::size_t dim() const { return dim_; }
    std::size_t degree() const { return degree_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    Rational coeff(Mask m) const;
    // Dense coordinates in colex order, length C(dim, degree).
    Vector to_vector() const;
    Rational evaluate(const std::vector<Vector>& args) const;

    AlternatingForm operator-() const;
    AlternatingForm& operator+=(const AlternatingForm& b);
    AlternatingForm& operator-=(const AlternatingForm& b);
    AlternatingForm& operator*=(const Rational& c);
    friend AlternatingForm operator+(AlternatingForm a, const AlternatingForm& b) { return a += b; }
    friend AlternatingForm operator-(AlternatingForm a, const AlternatingForm& b) { return a -= b; }
    friend AlternatingForm operator*(AlternatingForm a, const Rational& c) { return a *= c; }
    friend AlternatingForm operator*(const Rational& c, AlternatingForm a) { return a *= c; }
    friend bool operator==(const AlternatingForm& a, const AlternatingForm& b) {
        return a.dim_ == b.dim_ && a.degree_ == b.degree_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const AlternatingForm& a, const AlternatingForm& b) { return !(a == b); }

    std::string str() const;  // "3*e1^e2 - e2^e4", 1-based

private:
    std::size_t dim_ = 0, degree_ = 0;
    std::vector<Term> terms_;  // sorted by MaskLess, nonzero
};

AlternatingForm wedge(const AlternatingForm& a, const AlternatingForm& b);
AlternatingForm contract(const Vector& v, const AlternatingForm& w);
// Columns of m are the images of the new basis vectors.
AlternatingForm pullback(const AlternatingForm& w, const Matrix& m);

class VectorValuedForm {
public:
    VectorValuedForm() = default;
    explicit VectorValuedForm(std::vector<AlternatingForm> components);
    VectorValuedForm(std::size_t dim, std::size_t degree, std::size_t value_dim);

    std::size_t dim() const { return comps_.front().dim(); }
    std::size_t degree() const { return comps_.front().degree(); }
    std::size_t value_dim() const { return comps_.size(); }
    const AlternatingForm& component(std::size_t a) const { return comps_.at(a); }
    AlternatingForm& component(std::size_t a) { return comps_.at(a); }
    const std::vector<AlternatingForm>& components() const { return comps_; }
    bool is_zero() const;
    // Component-major concatenation of AlternatingForm::to_vector.
    Vector to_vector() const;
    static VectorValuedForm from_vector(std::size_t dim, std::size_t degree, std::size_t value_dim,
                                        const Vector& v);

    friend bool operator==(const VectorValuedForm& a, const VectorValuedForm& b) {
        return a.comps_ == b.comps_;
    }
    friend bool operator!=(const VectorValuedForm& a, const VectorValuedForm& b) { return !(a == b); }

private:
    std::vector<AlternatingForm> comps_;
};

VectorValuedForm contract(const Vector& v, const VectorValuedForm& w);
VectorValuedForm pullback(const VectorValuedForm& w, const Matrix& m);
AlternatingForm project(const VectorValuedForm& w, const Vector& t_star);

// Matrix of v -> i_v w from the domain basis into dense (degree-1)-form
// coordinates, one block per value component.
Matrix flat_matrix(const VectorValuedForm& w, const Subspace& domain);
Matrix flat_matrix(const AlternatingForm& w, const Subspace& domain);

// 0 -> V -> W -> T -> 0 with a splitting s: T -> W. T carries the coordinates
// of the splitting columns.
class Flag {
public:
    Flag() = default;
    Flag(Subspace vertical, Matrix splitting);  // validates

    // Vertical = last n_v coordinates, splitting = first n_t coordinates.
    static Flag standard(std::size_t n_t, std::size_t n_v);

    std::size_t total_dim() const { return vertical_.ambient_dim(); }
    std::size_t dim_v() const { return vertical_.dim(); }
    std::size_t dim_t() const { return splitting_.cols(); }
    const Subspace& vertical() const { return vertical_; }
    const Matrix& splitting() const { return splitting_; }
    // Columns [splitting | V basis].
    Matrix adapted_basis() const;
    // Columns [V basis | splitting].
    Matrix vertical_first_basis() const;
    // Coordinates in T of the projection of w.
    Vector project(const Vector& w) const;

private:
    Subspace vertical_;
    Matrix splitting_;
};

// Minimal s with i_{v_0} ... i_{v_s} w = 0 for all vertical v_j.
std::size_t horizontality_degree(const AlternatingForm& w, const Flag& flag);
std::uint64_t horizontal_dim(std::size_t r, std::size_t s, std::size_t dim_v, std::size_t dim_t);

// Element of the k-th symmetric power of the dual of the value space, keyed by
// exponent vectors alpha with |alpha| = degree.
struct SymmetricPoly {
    std::size_t value_dim = 0;
    std::size_t degree = 0;
    std::map<std::vector<unsigned>, Rational> coeffs;

    static SymmetricPoly monomial(std::vector<unsigned> alpha, const Rational& c = 1);
};

// Sum over alpha of P_alpha * w^alpha, where w^alpha wedges alpha_a copies of
// component a in increasing a.
AlternatingForm poly_eval(const SymmetricPoly& p, const VectorValuedForm& w);
AlternatingForm wedge_power(const VectorValuedForm& w, const std::vector<unsigned>& alpha);

}  // namespace pdx
