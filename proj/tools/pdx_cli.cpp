#include <CLI11.hpp>
#include <iostream>

#include "commands.hpp"

using namespace pdx::cli;

int main(int argc, char** argv) {
    CLI::App app{"Exact analysis and Darboux normalization of polysymplectic and multisymplectic forms"};
    app.require_subcommand(1);
    Options opts;
    std::size_t samples = 0;
    app.add_option("--seed", opts.seed, "seed for every random choice");
    app.add_flag("--json", opts.json, "machine-readable report");
    auto* samples_opt = app.add_option("--samples", samples, "sampled covectors (analyze) or points (moser)");
    app.add_option("--steps", opts.steps, "RK4 steps for moser")->check(CLI::PositiveNumber);
    app.add_option("--tol", opts.tol, "acceptance residual for moser");
    app.add_flag("--timing", opts.timing, "add wall time to the report");
    app.add_option("--fixtures", opts.fixtures_dir, "corpus directory for counterexamples");

    std::string file;
    auto add_file_cmd = [&](const char* name, const char* help) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("file", file, "FormSpecDocument JSON")->required();
        return sub;
    };
    auto* analyze = add_file_cmd("analyze", "kernel, rank, detection and classification");
    auto* darboux = add_file_cmd("darboux", "canonical basis and its pullback");
    auto* symbol = add_file_cmd("symbol", "symbol of a flagged form");
    auto* homotopy = add_file_cmd("homotopy", "primitive of a closed polynomial form");
    std::size_t r = 0;
    auto* r_opt = homotopy->add_option("--r", r, "horizontality index (default: vertical degree, at least 1)");
    auto* moser = add_file_cmd("moser", "Moser flow residual table");
    bool convergence = false;
    moser->add_flag("--convergence", convergence, "also measure the step-halving ratio in quad precision");
    auto* counter = app.add_subcommand("counterexamples", "check the bundled corpus claims");

    CanonicalParams cp;
    std::uint64_t shuffle = 0;
    auto* canonical = app.add_subcommand("canonical", "emit a canonical model document");
    canonical->add_option("--type", cp.type, "poly, multi or perturbed")->check(CLI::IsMember({"poly", "multi", "perturbed"}));
    canonical->add_option("--N", cp.N);
    canonical->add_option("--n", cp.n);
    canonical->add_option("--nhat", cp.nhat);
    canonical->add_option("--k", cp.k);
    canonical->add_option("--r", cp.r);
    auto* shuffle_opt = canonical->add_option("--shuffle", shuffle, "conjugate by a seeded change of basis");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kParseError;
    }
    if (*samples_opt) opts.samples = samples;

    Outcome out;
    if (*analyze) out = cmd_analyze(file, opts);
    else if (*darboux) out = cmd_darboux(file, opts);
    else if (*symbol) out = cmd_symbol(file, opts);
    else if (*homotopy) out = cmd_homotopy(file, *r_opt ? std::optional<std::size_t>(r) : std::nullopt, opts);
    else if (*moser) out = cmd_moser(file, convergence, opts);
    else if (*counter) out = cmd_counterexamples(opts);
    else {
        if (*shuffle_opt) cp.shuffle = shuffle;
        out = cmd_canonical(cp, opts);
    }
    std::cout << render(out, opts.json);
    return out.exit_code;
}
