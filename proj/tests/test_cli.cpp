#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "document.hpp"
#include "pdx/darboux.hpp"
#include "support.hpp"

using namespace pdx;
using namespace pdx::cli;
namespace fs = std::filesystem;

namespace {

std::string fixture(const std::string& name) { return std::string(PDX_FIXTURE_DIR) + "/" + name; }

std::string write_temp(const std::string& name, const std::string& text) {
    fs::path p = fs::temp_directory_path() / ("pdx_test_" + name);
    std::ofstream(p) << text;
    return p.string();
}

Options defaults() {
    Options o;
    o.fixtures_dir = PDX_FIXTURE_DIR;
    return o;
}

int run_cli(const std::string& args) {
    std::string cmd = std::string(PDX_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("documents round trip through JSON") {
    Rng rng(73);
    for (int trial = 0; trial < 10; ++trial) {
        VectorValuedForm w = pdx::testing::random_vv_form(rng, 5, 2, 2);
        FormDocument doc = parse_document(to_json(make_document(w)).dump());
        CHECK(doc.kind == DocKind::VectorValuedForm);
        CHECK(doc.form == w);
    }
    auto model = canonical_multi_model(1, 2, 2, 2);
    FormDocument flagged = parse_document(to_json(make_document(model.form, model.flag)).dump());
    REQUIRE(flagged.flag);
    CHECK(flagged.scalar() == model.form);
    CHECK(flagged.flag->vertical() == model.flag.vertical());

    PolyForm p(3, 2, 1);
    p.add_term(bit(0) | bit(2), Polynomial::variable(3, 1) * Polynomial::variable(3, 2) + Polynomial::constant(3, Rational(1, 3)));
    FormDocument pd = parse_document(to_json(make_document(p)).dump());
    CHECK(pd.kind == DocKind::PolyForm);
    CHECK(pd.poly == p);
}

TEST_CASE("malformed documents are parse errors") {
    const char* bad[] = {
        "{}",
        "not json",
        R"({"schema_version":"1","kind":"scalar_form","dim":3,"degree":2,"terms":[{"indices":[2,1],"coefficient":"1"}]})",
        R"({"schema_version":"1","kind":"scalar_form","dim":3,"degree":2,"terms":[{"indices":[1,4],"coefficient":"1"}]})",
        R"({"schema_version":"1","kind":"scalar_form","dim":3,"degree":2,"terms":[{"indices":[1,2],"coefficient":"1/0"}]})",
        R"({"schema_version":"1","kind":"scalar_form","dim":3,"degree":2,"terms":[{"indices":[1,2],"coefficient":"x"}]})",
        R"({"schema_version":"2","kind":"scalar_form","dim":3,"degree":2,"terms":[]})",
        R"({"schema_version":"1","kind":"tensor","dim":3,"degree":2,"terms":[]})",
        R"({"schema_version":"1","kind":"scalar_form","dim":3,"degree":4,"terms":[]})",
    };
    for (const char* text : bad) CHECK_THROWS_AS(parse_document(text), ParseError);
    CHECK_THROWS_AS(load_document("/nonexistent/file.json"), ParseError);
}

TEST_CASE("bundled corpus claims hold") {
    for (const auto& entry : fs::directory_iterator(PDX_FIXTURE_DIR)) {
        if (entry.path().extension() != ".json") continue;
        FormDocument doc = load_document(entry.path().string());
        CHECK_FALSE(doc.claim.empty());
        for (const auto& c : check_expectations(doc, defaults())) {
            INFO(entry.path().filename().string() << ": " << c.dump());
            CHECK(c["pass"].get<bool>());
        }
    }
    Outcome all = cmd_counterexamples(defaults());
    CHECK(all.exit_code == 0);
    CHECK(all.report["result"]["pass"].get<bool>());
}

TEST_CASE("analyze on the corpus") {
    Outcome a1 = cmd_analyze(fixture("appendix_a1.json"), defaults());
    CHECK(a1.exit_code == 0);
    const auto& r1 = a1.report["result"];
    CHECK(r1["classification"] == "none");
    CHECK(r1["constant_rank_sampled"] == 2);
    CHECK(r1["uniform_rank"].is_null());

    Outcome c = cmd_analyze(fixture("canonical_poly_2_2_1.json"), defaults());
    CHECK(c.exit_code == 0);
    CHECK(c.report["result"]["classification"] == "polysymplectic");
    CHECK(c.report["result"]["lagrangian_subspace"].size() == 4);

    Outcome empty = cmd_analyze(write_temp("empty.json", "{}"), defaults());
    CHECK(empty.exit_code == kParseError);
    CHECK(empty.report["result"]["error_kind"] == "parse");
}

TEST_CASE("reports are byte-identical for identical inputs") {
    Options o = defaults();
    for (const char* name : {"appendix_a2.json", "appendix_a3.json", "su2.json"}) {
        std::string a = render(cmd_analyze(fixture(name), o), true);
        std::string b = render(cmd_analyze(fixture(name), o), true);
        CHECK(a == b);
        CHECK(a.find("timing_ms") == std::string::npos);
    }
    o.seed = 99;
    std::string s1 = render(cmd_analyze(fixture("appendix_a1.json"), o), true);
    CHECK(s1 == render(cmd_analyze(fixture("appendix_a1.json"), o), true));
    CHECK(s1.find("\"seed\": 99") != std::string::npos);
    Options timed = defaults();
    timed.timing = true;
    CHECK(render(cmd_analyze(fixture("appendix_a1.json"), timed), true).find("timing_ms") != std::string::npos);
}

TEST_CASE("canonical document survives a shuffled darboux round trip") {
    for (std::uint64_t shuffle : {1, 2, 3}) {
        CanonicalParams p;
        p.type = "poly";
        p.N = 2;
        p.nhat = 2;
        p.k = 1;
        p.shuffle = shuffle;
        Outcome gen = cmd_canonical(p, defaults());
        REQUIRE(gen.exit_code == 0);
        std::string path = write_temp("shuffled.json", gen.report["result"]["document"].dump());
        Outcome dx = cmd_darboux(path, defaults());
        CHECK(dx.exit_code == 0);
        CHECK(dx.report["result"]["matches_canonical"].get<bool>());
    }
    CanonicalParams m;
    m.type = "multi";
    m.N = 1;
    m.n = 2;
    m.k = 2;
    m.r = 2;
    m.shuffle = 4;
    Outcome gen = cmd_canonical(m, defaults());
    REQUIRE(gen.exit_code == 0);
    Outcome dx = cmd_darboux(write_temp("shuffled_multi.json", gen.report["result"]["document"].dump()), defaults());
    CHECK(dx.exit_code == 0);
    CHECK(dx.report["result"]["matches_canonical"].get<bool>());
}

TEST_CASE("symbol of the canonical multisymplectic form has the canonical pattern") {
    CanonicalParams m;
    m.type = "multi";
    m.N = 2;
    m.n = 2;
    m.k = 2;
    m.r = 2;
    Outcome gen = cmd_canonical(m, defaults());
    REQUIRE(gen.exit_code == 0);
    Outcome sym = cmd_symbol(write_temp("multi.json", gen.report["result"]["document"].dump()), defaults());
    REQUIRE(sym.exit_code == 0);
    FormDocument doc = parse_document(sym.report["result"]["symbol"].dump());
    CHECK(doc.form == canonical_symbol_pattern(2, 2, 2, 2));
}

TEST_CASE("homotopy command reproduces -y dx") {
    const char* text = R"({"schema_version":"1","kind":"poly_form","dim":2,"degree":2,"split":{"dim_K":1,"dim_L":1},
        "terms":[{"indices":[1,2],"coefficient":"1"}]})";
    Outcome h = cmd_homotopy(write_temp("dxdy.json", text), 1, defaults());
    REQUIRE(h.exit_code == 0);
    CHECK(h.report["result"]["d_theta_equals_omega"].get<bool>());
    FormDocument theta = parse_document(h.report["result"]["theta"].dump());
    PolyForm want(2, 1, 1);
    want.add_term(bit(0), Rational(-1) * Polynomial::variable(2, 1));
    CHECK(theta.poly == want);
}

TEST_CASE("moser command on the bundled perturbation") {
    Outcome m = cmd_moser(fixture("perturbed_multisymplectic.json"), false, defaults());
    CHECK(m.exit_code == 0);
    CHECK(m.report["result"]["max_residual"].get<double>() < 1e-6);
    CHECK(m.report["result"]["samples"].size() == 10);
}

TEST_CASE("executable exit codes") {
    CHECK(run_cli("counterexamples") == 0);
    CHECK(run_cli("--json analyze " + fixture("appendix_a2.json")) == 0);
    CHECK(run_cli("analyze " + write_temp("empty_cli.json", "{}")) == 2);
    CHECK(run_cli("analyze /nonexistent/file.json") == 2);
    CHECK(run_cli("") == 2);
    CHECK(run_cli("frobnicate") == 2);
    CHECK(run_cli("--steps notanumber moser " + fixture("perturbed_multisymplectic.json")) == 2);
}
