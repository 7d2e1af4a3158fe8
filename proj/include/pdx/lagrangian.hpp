#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pdx/exterior.hpp"
#include "pdx/random.hpp"

namespace pdx {

enum class Classification {
    Polylagrangian,
    Polysymplectic,
    Polypresymplectic,
    Multilagrangian,
    Multisymplectic,
    Multipresymplectic,
    None
};
std::string to_string(Classification c);

enum class DetectionStatus { Found, ProvedAbsent, NotFound };
std::string to_string(DetectionStatus s);

struct Detection {
    DetectionStatus status = DetectionStatus::NotFound;
    std::optional<Subspace> L;
    std::vector<std::string> diagnostics;
};

Subspace kernel_of_form(const VectorValuedForm& w);
Subspace kernel_of_form(const AlternatingForm& w);

// {v : i_v i_{v_1} ... i_{v_l} w = 0 for all v_j in L}
Subspace ell_orthogonal(const Subspace& L, std::size_t ell, const VectorValuedForm& w);
bool is_isotropic(const Subspace& L, std::size_t ell, const VectorValuedForm& w);
bool is_maximal_isotropic(const Subspace& L, const VectorValuedForm& w);

// w^flat(L) inside the dense coordinates of (k-forms) x T.
Subspace flat_image(const VectorValuedForm& w, const Subspace& L);
// (Lambda^k L^perp) x T in the same coordinates.
Subspace annihilator_power(const Subspace& L, std::size_t k, std::size_t value_dim);
// Lambda^k_{r-1} L^perp = Lambda^k L^perp meet Lambda^k_{r-1} W*, built from
// wedges with at most r-1 factors off the annihilator of V.
Subspace horizontal_annihilator_power(const Subspace& L, std::size_t k, const Flag& flag, std::size_t r);

// Throws std::logic_error when the subspace test passes but the dimension
// identity fails, which would contradict the dimension criterion.
bool check_polylagrangian(const Subspace& L, const VectorValuedForm& w);
bool check_multilagrangian(const Subspace& L, const AlternatingForm& w, const Flag& flag, std::size_t r);

struct CriterionResult {
    bool value = false;
    bool precondition_ok = true;
    std::string note;
};
CriterionResult dimension_criterion_poly(const Subspace& L, const VectorValuedForm& w);
CriterionResult dimension_criterion_multi(const Subspace& L, const AlternatingForm& w, const Flag& flag,
                                          std::size_t r);
std::uint64_t multi_dimension(std::size_t N, std::size_t n, std::size_t k, std::size_t r);

Subspace greedy_maximal_isotropic(const VectorValuedForm& w, const Subspace& seed,
                                  const std::optional<Subspace>& within = std::nullopt);

Detection find_polylagrangian(const VectorValuedForm& w, std::uint64_t seed = kDefaultSeed);
Detection find_scalar_polylagrangian(const AlternatingForm& w, std::uint64_t seed = kDefaultSeed);
Detection find_multilagrangian(const AlternatingForm& w, const Flag& flag, std::size_t r,
                               std::uint64_t seed = kDefaultSeed);

// Lambda^{k+1-r} T*-valued r-form on V, in the coordinates of the RREF basis of V.
VectorValuedForm symbol(const AlternatingForm& w, const Flag& flag, std::size_t r);
// Horizontality index r of a form, i.e. the form is (k+1-r)-horizontal.
std::size_t horizontality_r(const AlternatingForm& w, const Flag& flag);

struct SymbolTheoremReport {
    bool symbol_polylagrangian = false;
    bool kernel_contained = false;
    std::size_t kernel_gap = 0;
    bool passed = false;
    std::vector<std::string> diagnostics;
};
SymbolTheoremReport symbol_theorem_check(const AlternatingForm& w, const Flag& flag, std::size_t r,
                                         const Subspace& L);

std::size_t rank_2form(const AlternatingForm& w);
std::optional<std::size_t> uniform_rank(const VectorValuedForm& w);
std::optional<std::size_t> constant_rank_sampled(const VectorValuedForm& w, std::size_t samples,
                                                 std::uint64_t seed = kDefaultSeed);
bool prop_A1_check(const VectorValuedForm& w, const Subspace& L);
bool prop_A2_check(const VectorValuedForm& w);
// Standard basis covectors of the value space and their pairwise sums.
std::vector<Vector> covector_grid(std::size_t value_dim);
// w(u, v) = 0 for all u in a, v in b (degree-2 forms).
bool mutually_orthogonal(const Subspace& a, const Subspace& b, const AlternatingForm& w);

// The kernel sums that any polylagrangian subspace must contain, and the
// dimension it would need when the form has a uniform rank.
struct KernelCandidates {
    Subspace component_kernel_sum;
    Subspace projection_kernel_sum;  // over covector_grid
    std::optional<std::uint64_t> required_dim;
};
KernelCandidates kernel_candidates(const VectorValuedForm& w);

struct StructureReport {
    Subspace kernel;
    bool is_degenerate = false;
    std::optional<std::size_t> rank_N;
    std::optional<Subspace> lagrangian_subspace;
    DetectionStatus detection = DetectionStatus::NotFound;
    Classification classification = Classification::None;
    std::optional<std::pair<std::size_t, std::size_t>> horizontality;  // (r, k+1-r)
    std::vector<std::string> diagnostics;
};
StructureReport analyze_poly(const VectorValuedForm& w, std::uint64_t seed = kDefaultSeed);
StructureReport analyze_multi(const AlternatingForm& w, const Flag& flag, std::uint64_t seed = kDefaultSeed);

}  // namespace pdx
