#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pdx/exterior.hpp"
#include "pdx/lagrangian.hpp"

namespace pdx {

// Coordinates: E (N), then L in the order a-major, index sets lex.
struct CanonicalPolyModel {
    std::size_t N = 0, k = 0, nhat = 0;
    VectorValuedForm form;
    Subspace L, E;
    std::vector<std::string> labels;
};

// Coordinates: H (n), E (N), then L ordered by s ascending, I lex, M lex.
// The flag has V = E + L and the splitting on H. For r = 1 the reported L is
// all of V, which contains the kernel E.
struct CanonicalMultiModel {
    std::size_t N = 0, n = 0, k = 0, r = 0;
    AlternatingForm form;
    Flag flag;
    Subspace L, E, F;
    std::vector<std::string> labels;
};

CanonicalPolyModel canonical_poly_model(std::size_t N, std::size_t nhat, std::size_t k);
CanonicalMultiModel canonical_multi_model(std::size_t N, std::size_t n, std::size_t k, std::size_t r);

// Canonical coefficient patterns padded by `extra` trailing kernel coordinates.
// The multi pattern accepts N = 0.
VectorValuedForm canonical_poly_pattern(std::size_t N, std::size_t nhat, std::size_t k, std::size_t extra = 0);
AlternatingForm canonical_multi_pattern(std::size_t N, std::size_t n, std::size_t k, std::size_t r,
                                        std::size_t extra = 0);
// Symbol of the multi pattern on V = E + L (+ kernel), one component per
// (k+1-r)-subset of H in lex order.
VectorValuedForm canonical_symbol_pattern(std::size_t N, std::size_t n, std::size_t k, std::size_t r,
                                          std::size_t extra = 0);

// Number of (s; M) labels of the multi L block, i.e. dim Lambda^k_{r-1} F*.
std::size_t multi_L_dim(std::size_t N, std::size_t n, std::size_t k, std::size_t r);

// Grows a k-isotropic E0 with E0 meet L = 0 until it complements L. Throws
// std::invalid_argument when L is not polylagrangian.
Subspace extend_isotropic_complement_poly(const VectorValuedForm& w, const Subspace& L, const Subspace& E0);
// One induction step; returns E0 unchanged when it already complements L.
Subspace extension_step_poly(const VectorValuedForm& w, const Subspace& L, const Subspace& E0);

// Grows a k-isotropic F0 with F0 meet V = E (E complementing L in V) until it
// complements L in W.
Subspace extend_isotropic_complement_multi(const AlternatingForm& w, const Flag& flag, std::size_t r,
                                           const Subspace& L, const Subspace& F0);

struct DarbouxBasis {
    Matrix basis;  // columns
    std::vector<std::string> labels;
    Subspace L, E;
    std::optional<Subspace> F;
    std::size_t N = 0, kernel_dim = 0;
};

DarbouxBasis darboux_basis_poly(const VectorValuedForm& w, const Subspace& L);
// Detects L first; throws std::runtime_error when there is none.
DarbouxBasis darboux_basis_poly(const VectorValuedForm& w, std::uint64_t seed = kDefaultSeed);

DarbouxBasis darboux_basis_multi(const AlternatingForm& w, const Flag& flag, std::size_t r, const Subspace& L);
DarbouxBasis darboux_basis_multi(const AlternatingForm& w, const Flag& flag, std::uint64_t seed = kDefaultSeed);

}  // namespace pdx
