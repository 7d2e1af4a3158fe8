#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdx/diffforms.hpp"

namespace pdx {

struct FlowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Row-major square matrix.
template <class T>
struct BasicMatrix {
    std::size_t n = 0;
    std::vector<T> a;
    static BasicMatrix identity(std::size_t n) {
        BasicMatrix m{n, std::vector<T>(n * n, T(0))};
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }
    T& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};
using DMatrix = BasicMatrix<double>;

// X(z, t); when dx is non-null it receives the spatial derivative dX_i/dz_j.
using FieldFn = std::function<void(const std::vector<double>& z, double t, std::vector<double>& x, DMatrix* dx)>;

// Time dependent field X_t in L0 with i_X w_t = alpha, w_t = w0 + t (w - w0).
// L0 is the vertical block of the PolyForm split.
class MoserField {
public:
    MoserField(const PolyForm& w, const PolyForm& w0, const PolyForm& alpha, double tol = 1e-10);
    // alpha = moser_alpha(w, w0), w0 = w at the origin.
    static MoserField from_form(const PolyForm& w, double tol = 1e-10);

    std::size_t dim() const { return dim_; }
    // Throws FlowError on a singular or inconsistent solve.
    std::vector<double> operator()(const std::vector<double>& z, double t, DMatrix* dx = nullptr) const;
    FieldFn fn() const;
    // Largest |i_X w_t - alpha|_inf over all solves so far.
    double max_residual() const { return max_residual_; }

    const PolyForm& w() const { return w_; }
    const PolyForm& w0() const { return w0_; }
    const PolyForm& alpha() const { return alpha_; }

private:
    struct Compiled;
    PolyForm w_, w0_, alpha_;
    std::size_t dim_;
    double tol_;
    std::shared_ptr<const Compiled> c_;
    mutable double max_residual_ = 0;
};

std::vector<double> moser_field(const PolyForm& w, const PolyForm& w0, const PolyForm& alpha,
                                const std::vector<double>& p, double t);

struct FlowState {
    std::vector<double> point;
    DMatrix jacobian;
    double t = 0;
    double min_abs_det = 1;  // smallest |det J| seen along the trajectory
    std::size_t steps = 0;   // after any step halving
    double fd_gap = -1;      // max |J - finite difference J| when cross-checked
};

struct FlowOptions {
    double t_end = 1.0;
    bool fd_cross_check = false;
    double fd_h = 1e-5;
    unsigned max_halvings = 3;
    double det_floor = 1e-8;
    // Run the whole pipeline in IEEE quad precision. Used to observe the
    // truncation error where it sits below double roundoff.
    bool extended_precision = false;
};

// Classical RK4 on (z, J) with dJ/dt = DX J. A non-finite state restarts with
// twice the steps, up to max_halvings times.
FlowState integrate_flow(const FieldFn& field, const std::vector<double>& p0, std::size_t steps,
                         const FlowOptions& opts = {});

// Coefficients (colex) of the pullback of a constant form by a linear map.
std::vector<double> pullback_coefficients(const std::vector<double>& coeffs, std::size_t dim, std::size_t degree,
                                          const DMatrix& j);

struct MoserSample {
    std::vector<double> point;
    double residual = 0;
    double min_abs_det = 1;
};

struct MoserReport {
    std::vector<MoserSample> samples;
    double max_residual = 0;
    double max_field_residual = 0;
    std::size_t steps = 0;
    bool extended_precision = false;
};

// (F_s^* w_s)(p) against w0 at each sample; s = opts.t_end.
MoserReport verify_darboux(const PolyForm& w, const std::vector<std::vector<double>>& points, std::size_t steps,
                           const FlowOptions& opts = {}, double tol = 1e-10);

std::vector<std::vector<double>> ball_samples(std::size_t dim, std::size_t count, double radius, std::uint64_t seed);

// Canonical multisymplectic model (N = 1, n = 2, k = 2, r = 2, dim 6) pulled
// back by a triangular near-identity map (a(x), b(x,q), c(x,q,p)) whose
// quadratic and cubic coefficients are seeded rationals of size <= 1/20.
struct PerturbedModel {
    PolyForm w, w0;
    std::vector<Polynomial> map;
};
PerturbedModel perturbed_multisymplectic(std::uint64_t seed = kDefaultSeed);

}  // namespace pdx
