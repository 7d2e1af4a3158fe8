#pragma once

#include <cstdint>
#include <functional>
#include <json.hpp>
#include <optional>
#include <string>

#include "document.hpp"
#include "pdx/random.hpp"

namespace pdx::cli {

inline constexpr const char* kToolName = "polydarboux";
inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode { kOk = 0, kFailure = 1, kParseError = 2, kInconsistent = 3 };

struct Options {
    std::uint64_t seed = kDefaultSeed;
    bool json = false;
    std::optional<std::size_t> samples;  // analyze: 100 covectors, moser: 10 points
    std::size_t steps = 1000;
    double tol = 1e-6;
    bool timing = false;
    std::string fixtures_dir;
};

struct CanonicalParams {
    std::string type = "poly";  // poly | multi
    std::size_t N = 2, n = 2, nhat = 2, k = 1, r = 2;
    std::optional<std::uint64_t> shuffle;
};

// A finished command: the report plus the process exit code.
struct Outcome {
    int exit_code = kOk;
    nlohmann::json report;
};

Outcome cmd_analyze(const std::string& path, const Options& opts);
Outcome cmd_darboux(const std::string& path, const Options& opts);
Outcome cmd_symbol(const std::string& path, const Options& opts);
Outcome cmd_canonical(const CanonicalParams& params, const Options& opts);
Outcome cmd_homotopy(const std::string& path, std::optional<std::size_t> r, const Options& opts);
Outcome cmd_moser(const std::string& path, bool convergence, const Options& opts);
Outcome cmd_counterexamples(const Options& opts);

// Checks the "expect" block of a corpus document; one entry per claim with
// fields check, pass, detail.
nlohmann::json check_expectations(const FormDocument& doc, const Options& opts);

std::string render(const Outcome& out, bool json);

}  // namespace pdx::cli
