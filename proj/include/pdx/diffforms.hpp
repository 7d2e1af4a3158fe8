#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pdx/exterior.hpp"
#include "pdx/lagrangian.hpp"

namespace pdx {

class Polynomial {
public:
    using Exponent = std::vector<unsigned>;

    explicit Polynomial(std::size_t nvars = 0) : nvars_(nvars) {}
    static Polynomial constant(std::size_t nvars, const Rational& c);
    static Polynomial variable(std::size_t nvars, std::size_t i);
    static Polynomial monomial(Exponent e, const Rational& c = 1);

    std::size_t nvars() const { return nvars_; }
    const std::map<Exponent, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    unsigned degree() const;
    void add_term(const Exponent& e, const Rational& c);

    Polynomial derivative(std::size_t i) const;
    Rational evaluate(const Vector& x) const;
    double evaluate(const std::vector<double>& x) const;
    // this(subs[0], ..., subs[n-1])
    Polynomial compose(const std::vector<Polynomial>& subs) const;

    Polynomial& operator+=(const Polynomial& b);
    Polynomial& operator-=(const Polynomial& b);
    Polynomial& operator*=(const Rational& c);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
    friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }
    std::string str() const;  // x1^2*x3 style, 1-based

private:
    std::size_t nvars_;
    std::map<Exponent, Rational> terms_;  // nonzero coefficients only
};

// Polynomial-coefficient form on coordinates (x: K, y: L); x occupies the
// first dim_k coordinates.
class PolyForm {
public:
    PolyForm() = default;
    PolyForm(std::size_t dim, std::size_t degree, std::size_t dim_k);
    static PolyForm constant(const AlternatingForm& w, std::size_t dim_k);

    std::size_t dim() const { return dim_; }
    std::size_t degree() const { return degree_; }
    std::size_t dim_k() const { return dim_k_; }
    std::size_t dim_l() const { return dim_ - dim_k_; }
    Mask vertical_mask() const;
    const std::map<Mask, Polynomial, MaskLess>& coeffs() const { return coeffs_; }
    Polynomial coeff(Mask m) const;
    bool is_zero() const { return coeffs_.empty(); }
    // Largest number of y-differentials in a nonzero term; the form is killed by
    // any vertical_degree()+1 contractions along L.
    std::size_t vertical_degree() const;
    void add_term(Mask m, const Polynomial& p);

    AlternatingForm at(const Vector& point) const;
    // Dense colex coefficients at a float point.
    std::vector<double> at(const std::vector<double>& point) const;

    PolyForm& operator+=(const PolyForm& b);
    PolyForm& operator-=(const PolyForm& b);
    PolyForm& operator*=(const Rational& c);
    friend PolyForm operator+(PolyForm a, const PolyForm& b) { return a += b; }
    friend PolyForm operator-(PolyForm a, const PolyForm& b) { return a -= b; }
    friend PolyForm operator*(const Rational& c, PolyForm a) { return a *= c; }
    friend bool operator==(const PolyForm& a, const PolyForm& b) {
        return a.dim_ == b.dim_ && a.degree_ == b.degree_ && a.coeffs_ == b.coeffs_;
    }
    std::string str() const;

private:
    std::size_t dim_ = 0, degree_ = 0, dim_k_ = 0;
    std::map<Mask, Polynomial, MaskLess> coeffs_;
};

using VectorField = std::vector<Polynomial>;

PolyForm d(const PolyForm& w);
// Exterior derivative along y only; the input may not contain dx.
PolyForm d_vertical(const PolyForm& w);
PolyForm wedge(const PolyForm& a, const PolyForm& b);
PolyForm contract(const VectorField& v, const PolyForm& w);
// phi^* w for a polynomial map phi given by its component polynomials.
PolyForm pullback(const PolyForm& w, const std::vector<Polynomial>& phi);
bool is_closed(const PolyForm& w);

// Closed form with vertical_degree <= r to a primitive with vertical_degree <= r-1,
// through the K- and L-contractions of the chart. Exact in t.
PolyForm homotopy_primitive(const PolyForm& w, std::size_t r);
// alpha with d alpha = w0 - w and i_v alpha = 0 for v in L.
PolyForm moser_alpha(const PolyForm& w, const PolyForm& w0);

// Symbol of a (k+1)-form with vertical_degree <= r, x = base and y = fibre:
// one vertical r-form per (k+1-r)-subset of the x coordinates, lex order.
std::vector<PolyForm> chart_symbol(const PolyForm& w, std::size_t r);

VectorField lie_bracket(const VectorField& a, const VectorField& b);

struct InvolutivityResult {
    bool involutive = false;
    bool rank_constant = true;
    std::size_t rank = 0;
    std::vector<std::string> diagnostics;
};
// Brackets are tested for membership in the pointwise span at the origin and
// at seeded rational sample points; a single failing point decides "false".
InvolutivityResult involutive(const std::vector<VectorField>& fields, std::size_t samples = 12,
                              std::uint64_t seed = kDefaultSeed);

class LieAlgebraData {
public:
    // c[a][b][c] = c^a_{bc}, flattened a-major. Validates antisymmetry and Jacobi.
    LieAlgebraData(std::size_t dim, std::vector<Rational> constants);
    static LieAlgebraData su2();

    std::size_t dim() const { return dim_; }
    const Rational& c(std::size_t a, std::size_t b, std::size_t cc) const { return c_[(a * dim_ + b) * dim_ + cc]; }
    Vector bracket(const Vector& x, const Vector& y) const;

private:
    std::size_t dim_;
    std::vector<Rational> c_;
};

// Chevalley-Eilenberg differential with trivial coefficients.
AlternatingForm ce_d(const LieAlgebraData& g, const AlternatingForm& a);
VectorValuedForm ce_d(const LieAlgebraData& g, const VectorValuedForm& a);
// Frobenius for left-invariant distributions: closed under the bracket.
bool is_subalgebra(const LieAlgebraData& g, const Subspace& L);

struct Su2Report {
    bool betas_closed = false;
    bool ce_d_squared_zero = false;
    bool L_isotropic = false;
    bool polylagrangian = false;
    bool involutive = true;
    std::size_t L_dim = 0;
    Classification classification = Classification::None;
    VectorValuedForm form;
    Subspace L;
};
Matrix su2_default_frame();
// Throws std::invalid_argument when the frame is not injective.
Su2Report su2_example(const Matrix& frame);

}  // namespace pdx
