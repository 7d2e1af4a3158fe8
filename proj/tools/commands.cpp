#include "commands.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pdx/darboux.hpp"
#include "pdx/diffforms.hpp"
#include "pdx/lagrangian.hpp"
#include "pdx/moser.hpp"

namespace pdx::cli {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json opt_json(const std::optional<std::size_t>& v) { return v ? json(*v) : json(nullptr); }

// Runs body and maps exceptions to exit codes. The body may lower the exit code
// to kFailure when a verification inside the report fails.
Outcome guarded(const std::string& command, const Options& opts, const std::function<json(Outcome&)>& body) {
    Outcome out;
    auto start = std::chrono::steady_clock::now();
    json result;
    try {
        result = body(out);
    } catch (const ParseError& e) {
        out.exit_code = kParseError;
        result = {{"error", e.what()}, {"error_kind", "parse"}};
    } catch (const FlowError& e) {
        out.exit_code = kFailure;
        result = {{"error", e.what()}, {"error_kind", "flow"}};
    } catch (const std::invalid_argument& e) {
        out.exit_code = kFailure;
        result = {{"error", e.what()}, {"error_kind", "precondition"}};
    } catch (const std::logic_error& e) {
        out.exit_code = kInconsistent;
        result = {{"error", e.what()}, {"error_kind", "internal inconsistency"}};
    } catch (const std::exception& e) {
        out.exit_code = kFailure;
        result = {{"error", e.what()}, {"error_kind", "runtime"}};
    }
    json rep = out.report.is_null() ? json::object() : out.report;
    rep["tool"] = kToolName;
    rep["version"] = kToolVersion;
    rep["command"] = command;
    rep["seed"] = opts.seed;
    rep["result"] = result;
    rep["exit_code"] = out.exit_code;
    if (opts.timing)
        rep["timing_ms"] =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    out.report = std::move(rep);
    return out;
}

FormDocument load(const std::string& path, Outcome& out) {
    std::string bytes = read_file(path);
    out.report["input_digest"] = digest(bytes);
    return parse_document(bytes);
}

json structure_json(const StructureReport& rep) {
    json j;
    j["kernel"] = subspace_json(rep.kernel);
    j["kernel_dim"] = rep.kernel.dim();
    j["degenerate"] = rep.is_degenerate;
    j["rank_N"] = opt_json(rep.rank_N);
    j["detection"] = to_string(rep.detection);
    j["lagrangian_subspace"] = rep.lagrangian_subspace ? subspace_json(*rep.lagrangian_subspace) : json(nullptr);
    j["classification"] = to_string(rep.classification);
    if (rep.horizontality) j["horizontality"] = {{"r", rep.horizontality->first}, {"k+1-r", rep.horizontality->second}};
    j["diagnostics"] = rep.diagnostics;
    return j;
}

json analyze_vv(const VectorValuedForm& w, const Options& opts) {
    StructureReport rep = analyze_poly(w, opts.seed);
    json j = structure_json(rep);
    if (rep.lagrangian_subspace) {
        // check_polylagrangian throws logic_error if the two criteria disagree
        bool ok = check_polylagrangian(*rep.lagrangian_subspace, w);
        CriterionResult dim = dimension_criterion_poly(*rep.lagrangian_subspace, w);
        if (!ok || (dim.precondition_ok && !dim.value))
            throw std::logic_error("detected subspace fails the polylagrangian test");
    }
    if (w.degree() == 2) {
        j["uniform_rank"] = opt_json(uniform_rank(w));
        j["constant_rank_sampled"] = opt_json(constant_rank_sampled(w, opts.samples.value_or(100), opts.seed));
        j["samples"] = opts.samples.value_or(100);
        KernelCandidates kc = kernel_candidates(w);
        j["component_kernel_sum_dim"] = kc.component_kernel_sum.dim();
        j["projection_kernel_sum_dim"] = kc.projection_kernel_sum.dim();
        j["required_dim"] = kc.required_dim ? json(*kc.required_dim) : json(nullptr);
        if (j["uniform_rank"].is_number()) j["kernels_mutually_isotropic"] = prop_A2_check(w);
    }
    return j;
}

json analyze_flagged(const AlternatingForm& w, const Flag& flag, const Options& opts) {
    StructureReport rep = analyze_multi(w, flag, opts.seed);
    json j = structure_json(rep);
    if (rep.lagrangian_subspace && rep.horizontality) {
        std::size_t r = rep.horizontality->first;
        if (!check_multilagrangian(*rep.lagrangian_subspace, w, flag, r))
            throw std::logic_error("detected subspace fails the multilagrangian test");
        SymbolTheoremReport st = symbol_theorem_check(w, flag, r, *rep.lagrangian_subspace);
        j["symbol_theorem"] = {{"symbol_polylagrangian", st.symbol_polylagrangian},
                               {"kernel_contained", st.kernel_contained},
                               {"kernel_gap", st.kernel_gap},
                               {"passed", st.passed},
                               {"diagnostics", st.diagnostics}};
    }
    return j;
}

bool is_su2(const LieAlgebraData& g) {
    if (g.dim() != 3) return false;
    LieAlgebraData s = LieAlgebraData::su2();
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b)
            for (std::size_t c = 0; c < 3; ++c)
                if (g.c(a, b, c) != s.c(a, b, c)) return false;
    return true;
}

json su2_json(const Su2Report& rep) {
    return {{"betas_closed", rep.betas_closed},       {"ce_d_squared_zero", rep.ce_d_squared_zero},
            {"L_isotropic", rep.L_isotropic},         {"polylagrangian", rep.polylagrangian},
            {"involutive", rep.involutive},           {"L_dim", rep.L_dim},
            {"classification", to_string(rep.classification)}, {"L", subspace_json(rep.L)},
            {"form", to_json(make_document(rep.form))}};
}

json analyze_algebra(const FormDocument& doc) {
    const LieAlgebraData& g = *doc.algebra;
    json j;
    bool d2 = true;
    for (std::size_t p = 0; p < g.dim(); ++p)
        for (Mask m : combinations(g.dim(), p)) d2 = d2 && ce_d(g, ce_d(g, AlternatingForm::monomial(g.dim(), indices_of(m)))).is_zero();
    j["ce_d_squared_zero"] = d2;
    if (doc.frame) {
        j["frame_subalgebra"] = is_subalgebra(g, Subspace::column_space(*doc.frame));
        if (is_su2(g)) j["su2"] = su2_json(su2_example(*doc.frame));
    }
    return j;
}

VectorValuedForm require_vv(const FormDocument& doc) {
    if (doc.kind != DocKind::ScalarForm && doc.kind != DocKind::VectorValuedForm)
        throw std::invalid_argument("this command needs a scalar_form or vector_valued_form document");
    return doc.form;
}

}  // namespace

Outcome cmd_analyze(const std::string& path, const Options& opts) {
    return guarded("analyze", opts, [&](Outcome& out) {
        FormDocument doc = load(path, out);
        json j;
        j["kind"] = to_string(doc.kind);
        j["dim"] = doc.dim;
        switch (doc.kind) {
            case DocKind::LieAlgebra: j.update(analyze_algebra(doc)); break;
            case DocKind::PolyForm: {
                j["degree"] = doc.degree;
                j["closed"] = is_closed(doc.poly);
                j["vertical_degree"] = doc.poly.vertical_degree();
                j["at_origin"] = analyze_vv(VectorValuedForm({doc.poly.at(Vector(doc.dim))}), opts);
                break;
            }
            default:
                j["degree"] = doc.degree;
                j["value_dim"] = doc.value_dim;
                if (doc.flag)
                    j.update(analyze_flagged(doc.scalar(), *doc.flag, opts));
                else
                    j.update(analyze_vv(doc.form, opts));
        }
        return j;
    });
}

Outcome cmd_darboux(const std::string& path, const Options& opts) {
    return guarded("darboux", opts, [&](Outcome& out) {
        FormDocument doc = load(path, out);
        VectorValuedForm w = require_vv(doc);
        json j;
        DarbouxBasis b;
        bool match = false;
        if (doc.flag) {
            AlternatingForm s = doc.scalar();
            std::size_t r = horizontality_r(s, *doc.flag);
            b = darboux_basis_multi(s, *doc.flag, opts.seed);
            AlternatingForm pb = pullback(s, b.basis);
            match = pb == canonical_multi_pattern(b.N, doc.flag->dim_t(), doc.degree - 1, r, b.kernel_dim);
            j["r"] = r;
            j["pullback"] = to_json(make_document(pb));
        } else {
            b = darboux_basis_poly(w, opts.seed);
            VectorValuedForm pb = pullback(w, b.basis);
            match = pb == canonical_poly_pattern(b.N, w.value_dim(), doc.degree - 1, b.kernel_dim);
            j["pullback"] = to_json(make_document(pb));
        }
        j["basis"] = matrix_columns_json(b.basis);
        j["labels"] = b.labels;
        j["N"] = b.N;
        j["kernel_dim"] = b.kernel_dim;
        j["L"] = subspace_json(b.L);
        j["E"] = subspace_json(b.E);
        if (b.F) j["F"] = subspace_json(*b.F);
        j["matches_canonical"] = match;
        if (!match) out.exit_code = kInconsistent;
        return j;
    });
}

Outcome cmd_symbol(const std::string& path, const Options& opts) {
    return guarded("symbol", opts, [&](Outcome& out) {
        FormDocument doc = load(path, out);
        if (doc.kind != DocKind::ScalarForm || !doc.flag)
            throw std::invalid_argument("symbol needs a scalar_form document with a flag");
        AlternatingForm w = doc.scalar();
        std::size_t r = horizontality_r(w, *doc.flag);
        VectorValuedForm sym = symbol(w, *doc.flag, r);
        return json{{"r", r}, {"symbol", to_json(make_document(sym))}};
    });
}

Outcome cmd_canonical(const CanonicalParams& p, const Options& opts) {
    return guarded("canonical", opts, [&](Outcome&) {
        FormDocument doc;
        Subspace L;
        if (p.type == "poly") {
            auto m = canonical_poly_model(p.N, p.nhat, p.k);
            VectorValuedForm w = m.form;
            L = m.L;
            if (p.shuffle) {
                Rng rng(*p.shuffle);
                Matrix g = random_invertible(rng, w.dim());
                w = pullback(w, inverse(g));
                L = image(g, L);
            }
            doc = make_document(w);
            std::ostringstream claim;
            claim << "canonical polylagrangian model with N=" << p.N << ", nhat=" << p.nhat << ", k=" << p.k;
            doc.claim = claim.str();
        } else if (p.type == "multi") {
            auto m = canonical_multi_model(p.N, p.n, p.k, p.r);
            AlternatingForm w = m.form;
            Flag flag = m.flag;
            L = m.L;
            if (p.shuffle) {
                Rng rng(*p.shuffle);
                Matrix g = random_flag_preserving(rng, p.n, w.dim());
                w = pullback(w, inverse(g));
                flag = Flag(image(g, flag.vertical()), g * flag.splitting());
                L = image(g, L);
            }
            doc = make_document(w, flag);
            std::ostringstream claim;
            claim << "canonical multilagrangian model with N=" << p.N << ", n=" << p.n << ", k=" << p.k
                  << ", r=" << p.r;
            doc.claim = claim.str();
        } else if (p.type == "perturbed") {
            auto pm = perturbed_multisymplectic(p.shuffle.value_or(opts.seed));
            doc = make_document(pm.w);
            doc.claim = "canonical multisymplectic form with N=1, n=2 pulled back by a triangular near-identity "
                        "polynomial map; the Moser flow should carry it back to its value at the origin";
            json map = json::array();
            for (const auto& c : pm.map) map.push_back(polynomial_json(c));
            doc.expect = {{"map", map}, {"closed", true}, {"vertical_degree", pm.w.vertical_degree()}};
            return json{{"document", to_json(doc)}};
        } else {
            throw std::invalid_argument("canonical --type must be poly, multi or perturbed");
        }
        doc.expect = {{"L", subspace_json(L)}};
        if (p.shuffle) doc.expect["shuffle_seed"] = *p.shuffle;
        return json{{"document", to_json(doc)}};
    });
}

Outcome cmd_homotopy(const std::string& path, std::optional<std::size_t> r_opt, const Options& opts) {
    return guarded("homotopy", opts, [&](Outcome& out) {
        FormDocument doc = load(path, out);
        if (doc.kind != DocKind::PolyForm) throw std::invalid_argument("homotopy needs a poly_form document");
        std::size_t r = r_opt.value_or(std::max<std::size_t>(1, doc.poly.vertical_degree()));
        PolyForm theta = homotopy_primitive(doc.poly, r);
        bool exact = d(theta) == doc.poly;
        bool horizontal = theta.vertical_degree() + 1 <= r;
        if (!exact || !horizontal) out.exit_code = kInconsistent;
        return json{{"r", r},
                    {"theta", to_json(make_document(theta))},
                    {"d_theta_equals_omega", exact},
                    {"theta_vertical_degree", theta.vertical_degree()},
                    {"horizontal", horizontal}};
    });
}

Outcome cmd_moser(const std::string& path, bool convergence, const Options& opts) {
    return guarded("moser", opts, [&](Outcome& out) {
        FormDocument doc = load(path, out);
        if (doc.kind != DocKind::PolyForm) throw std::invalid_argument("moser needs a poly_form document");
        auto points = ball_samples(doc.dim, opts.samples.value_or(10), 0.1, opts.seed);
        MoserReport rep = verify_darboux(doc.poly, points, opts.steps);
        json table = json::array();
        for (const auto& s : rep.samples)
            table.push_back({{"point", s.point}, {"residual", s.residual}, {"min_abs_det", s.min_abs_det}});
        bool pass = rep.max_residual < opts.tol;
        json j{{"steps", rep.steps},
               {"radius", 0.1},
               {"samples", table},
               {"max_residual", rep.max_residual},
               {"max_solve_residual", rep.max_field_residual},
               {"tolerance", opts.tol},
               {"pass", pass}};
        if (convergence) {
            FlowOptions q;
            q.extended_precision = true;
            std::size_t half = std::max<std::size_t>(1, opts.steps / 2);
            double coarse = verify_darboux(doc.poly, points, half, q).max_residual;
            double fine = verify_darboux(doc.poly, points, 2 * half, q).max_residual;
            j["convergence"] = {{"precision", "quad"},
                                {"coarse_steps", half},
                                {"fine_steps", 2 * half},
                                {"coarse_residual", coarse},
                                {"fine_residual", fine},
                                {"ratio", coarse / fine}};
        }
        if (!pass) out.exit_code = kFailure;
        return j;
    });
}

namespace {

json entry(const std::string& check, bool pass, const json& detail = nullptr) {
    return {{"check", check}, {"pass", pass}, {"detail", detail}};
}

std::vector<Vector> parse_basis(const json& j, std::size_t dim, const std::string& where) {
    std::vector<Vector> out;
    for (const auto& v : j) out.push_back(parse_vector(v, dim, where));
    return out;
}

}  // namespace

json check_expectations(const FormDocument& doc, const Options& opts) {
    json out = json::array();
    const json& ex = doc.expect;
    if (!ex.is_object()) return out;

    if (doc.kind == DocKind::LieAlgebra) {
        if (!doc.frame || !is_su2(*doc.algebra)) throw std::invalid_argument("only su(2) corpus entries are supported");
        json rep = su2_json(su2_example(*doc.frame));
        for (auto it = ex.begin(); it != ex.end(); ++it) {
            if (!rep.contains(it.key())) throw ParseError("unknown expectation '" + it.key() + "'");
            out.push_back(entry(it.key() + " = " + it.value().dump(), rep[it.key()] == it.value(), rep[it.key()]));
        }
        return out;
    }

    if (doc.kind == DocKind::PolyForm) {
        for (auto it = ex.begin(); it != ex.end(); ++it) {
            const std::string& key = it.key();
            if (key == "map") continue;
            if (key == "closed")
                out.push_back(entry("closed = " + it.value().dump(), is_closed(doc.poly) == it.value().get<bool>()));
            else if (key == "vertical_degree")
                out.push_back(entry("vertical degree = " + it.value().dump(),
                                    doc.poly.vertical_degree() == it.value().get<std::size_t>(),
                                    doc.poly.vertical_degree()));
            else
                throw ParseError("unknown expectation '" + key + "'");
        }
        return out;
    }

    VectorValuedForm w = require_vv(doc);
    std::size_t dim = doc.dim;
    std::optional<StructureReport> rep;
    auto analysis = [&]() -> const StructureReport& {
        if (!rep) rep = doc.flag ? analyze_multi(doc.scalar(), *doc.flag, opts.seed) : analyze_poly(w, opts.seed);
        return *rep;
    };
    for (auto it = ex.begin(); it != ex.end(); ++it) {
        const std::string& key = it.key();
        const json& v = it.value();
        if (key == "classification") {
            std::string got = to_string(analysis().classification);
            out.push_back(entry("classification = " + v.get<std::string>(), got == v, got));
        } else if (key == "uniform_rank") {
            json got = opt_json(uniform_rank(w));
            out.push_back(entry("uniform rank = " + v.dump(), got == v, got));
        } else if (key == "constant_rank") {
            std::size_t n = opts.samples.value_or(100);
            json got = opt_json(constant_rank_sampled(w, n, opts.seed));
            out.push_back(entry("sampled rank over " + std::to_string(n) + " covectors = " + v.dump(), got == v, got));
        } else if (key == "kernel_dim") {
            std::size_t got = kernel_of_form(w).dim();
            out.push_back(entry("dim ker = " + v.dump(), got == v.get<std::size_t>(), got));
        } else if (key == "wedge_zero") {
            for (const auto& pair : v) {
                std::size_t a = pair[0].get<std::size_t>() - 1, b = pair[1].get<std::size_t>() - 1;
                bool zero = wedge(w.component(a), w.component(b)).is_zero();
                out.push_back(entry("w" + std::to_string(a + 1) + " ^ w" + std::to_string(b + 1) + " = 0", zero));
            }
        } else if (key == "lagrangian") {
            const StructureReport& s = analysis();
            std::string got = s.lagrangian_subspace ? "present" : "absent";
            out.push_back(entry("lagrangian subspace " + v.get<std::string>(), got == v, to_string(s.detection)));
        } else if (key == "L") {
            Subspace want = Subspace::span(dim, parse_basis(v, dim, "expect.L"));
            const StructureReport& s = analysis();
            bool ok = s.lagrangian_subspace && *s.lagrangian_subspace == want;
            out.push_back(entry("detected subspace equals the expected L", ok));
        } else if (key == "diagnostic") {
            const auto& diags = analysis().diagnostics;
            bool ok = std::any_of(diags.begin(), diags.end(),
                                  [&](const std::string& d) { return d.find(v.get<std::string>()) != std::string::npos; });
            out.push_back(entry("diagnostic contains \"" + v.get<std::string>() + "\"", ok, diags));
        } else if (key == "orthogonality") {
            for (const auto& o : v) {
                std::size_t a = o["kernels"][0].get<std::size_t>() - 1, b = o["kernels"][1].get<std::size_t>() - 1;
                std::size_t c = o["under"].get<std::size_t>() - 1;
                bool got = mutually_orthogonal(kernel_of_form(w.component(a)), kernel_of_form(w.component(b)),
                                               w.component(c));
                std::ostringstream name;
                name << "ker w" << a + 1 << " and ker w" << b + 1 << (o["orthogonal"].get<bool>() ? "" : " not")
                     << " orthogonal under w" << c + 1;
                out.push_back(entry(name.str(), got == o["orthogonal"].get<bool>()));
            }
        } else if (key == "projected_kernels") {
            for (const auto& pk : v) {
                Vector t = parse_vector(pk["covector"], w.value_dim(), "expect.projected_kernels");
                Subspace want = Subspace::span(dim, parse_basis(pk["kernel"], dim, "expect.projected_kernels"));
                Subspace got = kernel_of_form(project(w, t));
                out.push_back(entry("kernel of the projection along " + pk["covector"].dump(), got == want,
                                    subspace_json(got)));
            }
        } else if (key == "maximal_isotropic") {
            Subspace L = Subspace::span(dim, parse_basis(v, dim, "expect.maximal_isotropic"));
            out.push_back(entry("given subspace is maximal isotropic", is_maximal_isotropic(L, w)));
            out.push_back(entry("given subspace is not polylagrangian", !check_polylagrangian(L, w)));
        } else if (key == "required_dim") {
            auto kc = kernel_candidates(w);
            out.push_back(entry("required polylagrangian dim = " + v.dump(),
                                kc.required_dim && *kc.required_dim == v.get<std::uint64_t>(),
                                kc.required_dim ? json(*kc.required_dim) : json(nullptr)));
        } else if (key == "candidate_dims") {
            auto kc = kernel_candidates(w);
            json got = {kc.component_kernel_sum.dim(), kc.projection_kernel_sum.dim()};
            out.push_back(entry("candidate dims = " + v.dump(), got == v, got));
        } else if (key == "kernels_mutually_isotropic") {
            bool got = prop_A2_check(w);
            out.push_back(entry("projected kernels isotropic for every other projection", got == v.get<bool>()));
        } else if (key == "shuffle_seed" || key == "map") {
            continue;
        } else {
            throw ParseError("unknown expectation '" + key + "'");
        }
    }
    return out;
}

Outcome cmd_counterexamples(const Options& opts) {
    return guarded("counterexamples", opts, [&](Outcome& out) {
        namespace fs = std::filesystem;
        fs::path dir = opts.fixtures_dir.empty() ? fs::path(PDX_FIXTURE_DIR) : fs::path(opts.fixtures_dir);
        json files = json::array();
        bool all = true;
        for (const char* name : {"appendix_a1.json", "appendix_a2.json", "appendix_a3.json", "su2.json"}) {
            std::string bytes = read_file((dir / name).string());
            FormDocument doc = parse_document(bytes);
            json checks = check_expectations(doc, opts);
            bool ok = !checks.empty();
            for (const auto& c : checks) ok = ok && c["pass"].get<bool>();
            all = all && ok;
            files.push_back({{"file", name}, {"digest", digest(bytes)}, {"claim", doc.claim}, {"pass", ok}, {"checks", checks}});
        }
        if (!all) out.exit_code = kFailure;
        return json{{"files", files}, {"pass", all}};
    });
}

namespace {

void render_text(std::ostringstream& os, const json& j, const std::string& indent) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        const json& v = it.value();
        bool nested = v.is_object() || (v.is_array() && !v.empty() && (v[0].is_object()));
        os << indent << it.key() << ":";
        if (!nested) {
            os << " " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
            continue;
        }
        os << "\n";
        if (v.is_object()) {
            render_text(os, v, indent + "  ");
        } else {
            for (const auto& item : v) {
                os << indent << "  -\n";
                render_text(os, item, indent + "    ");
            }
        }
    }
}

}  // namespace

std::string render(const Outcome& out, bool as_json) {
    if (as_json) return out.report.dump(2) + "\n";
    std::ostringstream os;
    const json& res = out.report["result"];
    if (out.report["command"] == "counterexamples" && res.contains("files")) {
        for (const auto& f : res["files"]) {
            os << f["file"].get<std::string>() << ": " << f["claim"].get<std::string>() << "\n";
            for (const auto& c : f["checks"])
                os << "  [" << (c["pass"].get<bool>() ? "PASS" : "FAIL") << "] " << c["check"].get<std::string>() << "\n";
        }
        os << (res["pass"].get<bool>() ? "all corpus claims hold" : "some corpus claims FAILED") << "\n";
        return os.str();
    }
    render_text(os, out.report, "");
    return os.str();
}

}  // namespace pdx::cli
