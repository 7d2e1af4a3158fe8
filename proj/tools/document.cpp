#include "document.hpp"

#include <cstdio>
#include <algorithm>
#include <fstream>
#include <sstream>

namespace pdx::cli {

using nlohmann::json;

std::string to_string(DocKind k) {
    switch (k) {
        case DocKind::ScalarForm: return "scalar_form";
        case DocKind::VectorValuedForm: return "vector_valued_form";
        case DocKind::PolyForm: return "poly_form";
        case DocKind::LieAlgebra: return "lie_algebra";
    }
    return "?";
}

namespace {

DocKind parse_kind(const std::string& s) {
    if (s == "scalar_form") return DocKind::ScalarForm;
    if (s == "vector_valued_form") return DocKind::VectorValuedForm;
    if (s == "poly_form") return DocKind::PolyForm;
    if (s == "lie_algebra") return DocKind::LieAlgebra;
    throw ParseError("unknown kind '" + s + "'");
}

const json& field(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(where + ": missing field '" + key + "'");
    return j.at(key);
}

std::size_t count(const json& j, const std::string& where) {
    if (!j.is_number_integer() || j.get<long long>() < 0) throw ParseError(where + ": expected a nonnegative integer");
    return j.get<std::size_t>();
}

// 1-based index in [1, bound] to 0-based.
std::size_t index1(const json& j, std::size_t bound, const std::string& where) {
    if (!j.is_number_integer()) throw ParseError(where + ": index is not an integer");
    long long v = j.get<long long>();
    if (v < 1 || static_cast<std::size_t>(v) > bound)
        throw ParseError(where + ": index " + std::to_string(v) + " outside 1.." + std::to_string(bound));
    return static_cast<std::size_t>(v - 1);
}

Mask parse_indices(const json& j, std::size_t dim, std::size_t degree, const std::string& where) {
    if (!j.is_array()) throw ParseError(where + ": indices must be a list");
    if (j.size() != degree) throw ParseError(where + ": expected " + std::to_string(degree) + " indices");
    Mask m = 0;
    long long prev = 0;
    for (const auto& x : j) {
        std::size_t i = index1(x, dim, where);
        if (static_cast<long long>(i) + 1 <= prev) throw ParseError(where + ": indices must be strictly increasing");
        prev = static_cast<long long>(i) + 1;
        m |= bit(i);
    }
    return m;
}

json indices_json(Mask m) {
    json out = json::array();
    for (auto i : indices_of(m)) out.push_back(i + 1);
    return out;
}

Polynomial parse_polynomial(const json& j, std::size_t nvars, const std::string& where) {
    if (!j.is_array()) throw ParseError(where + ": polynomial must be a list of monomials");
    Polynomial p(nvars);
    for (std::size_t t = 0; t < j.size(); ++t) {
        std::string w = where + ".polynomial[" + std::to_string(t) + "]";
        const json& e = field(j[t], "exponents", w);
        if (!e.is_array() || e.size() != nvars) throw ParseError(w + ": exponents need " + std::to_string(nvars) + " entries");
        Polynomial::Exponent ex;
        for (const auto& x : e) ex.push_back(static_cast<unsigned>(count(x, w)));
        p.add_term(ex, parse_rational(field(j[t], "coefficient", w), w));
    }
    return p;
}

Flag parse_flag(const json& j, std::size_t dim) {
    const json& vi = field(j, "vertical_indices", "flag");
    if (!vi.is_array()) throw ParseError("flag: vertical_indices must be a list");
    std::vector<Vector> vert;
    Mask seen = 0;
    for (const auto& x : vi) {
        std::size_t i = index1(x, dim, "flag.vertical_indices");
        if (seen & bit(i)) throw ParseError("flag: repeated vertical index");
        seen |= bit(i);
        vert.push_back(unit_vector(dim, i));
    }
    std::vector<Vector> split;
    if (j.contains("splitting")) {
        const json& s = j.at("splitting");
        if (!s.is_array()) throw ParseError("flag: splitting must be a list of columns");
        for (std::size_t c = 0; c < s.size(); ++c) split.push_back(parse_vector(s[c], dim, "flag.splitting"));
    } else {
        for (std::size_t i = 0; i < dim; ++i)
            if (!(seen & bit(i))) split.push_back(unit_vector(dim, i));
    }
    try {
        return Flag(Subspace::span(dim, vert), Matrix::from_columns(split, dim));
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("flag: ") + e.what());
    }
}

}  // namespace

json rational_json(const Rational& r) { return r.str(); }

Rational parse_rational(const json& j, const std::string& where) {
    try {
        if (j.is_string()) return Rational::parse(j.get<std::string>());
        if (j.is_number_integer()) return Rational(j.get<long long>());
    } catch (const std::invalid_argument&) {
    }
    throw ParseError(where + ": expected an exact rational string such as \"-3/4\"");
}

json vector_json(const Vector& v) {
    json out = json::array();
    for (const auto& x : v) out.push_back(rational_json(x));
    return out;
}

Vector parse_vector(const json& j, std::size_t dim, const std::string& where) {
    if (!j.is_array() || j.size() != dim) throw ParseError(where + ": expected a vector of length " + std::to_string(dim));
    Vector v(dim);
    for (std::size_t i = 0; i < dim; ++i) v[i] = parse_rational(j[i], where);
    return v;
}

json subspace_json(const Subspace& s) {
    json out = json::array();
    for (const auto& v : s.basis_vectors()) out.push_back(vector_json(v));
    return out;
}

json matrix_columns_json(const Matrix& m) {
    json out = json::array();
    for (const auto& c : m.column_list()) out.push_back(vector_json(c));
    return out;
}

json polynomial_json(const Polynomial& p) {
    json out = json::array();
    for (const auto& [e, c] : p.terms()) out.push_back({{"exponents", e}, {"coefficient", rational_json(c)}});
    return out;
}

FormDocument parse_document(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("document must be a JSON object");
    const json& ver = field(j, "schema_version", "document");
    if (ver != "1") throw ParseError("unsupported schema_version");
    const json& kind = field(j, "kind", "document");
    if (!kind.is_string()) throw ParseError("kind must be a string");
    FormDocument doc;
    doc.kind = parse_kind(kind.get<std::string>());
    doc.dim = count(field(j, "dim", "document"), "dim");
    if (doc.dim == 0 || doc.dim > kMaxDim) throw ParseError("dim must lie in 1..64");
    if (j.contains("claim")) {
        if (!j["claim"].is_string()) throw ParseError("claim must be a string");
        doc.claim = j["claim"].get<std::string>();
    }
    if (j.contains("expect")) doc.expect = j["expect"];

    if (doc.kind == DocKind::LieAlgebra) {
        std::size_t n = doc.dim;
        std::vector<Rational> c(n * n * n);
        const json& sc = field(j, "structure_constants", "document");
        if (!sc.is_array()) throw ParseError("structure_constants must be a list");
        for (std::size_t t = 0; t < sc.size(); ++t) {
            std::string w = "structure_constants[" + std::to_string(t) + "]";
            std::size_t a = index1(field(sc[t], "upper", w), n, w);
            const json& lo = field(sc[t], "lower", w);
            if (!lo.is_array() || lo.size() != 2) throw ParseError(w + ": lower must hold two indices");
            std::size_t b = index1(lo[0], n, w), cc = index1(lo[1], n, w);
            if (b >= cc) throw ParseError(w + ": lower indices must be increasing; the antisymmetric entry is implied");
            Rational v = parse_rational(field(sc[t], "value", w), w);
            c[(a * n + b) * n + cc] += v;
            c[(a * n + cc) * n + b] -= v;
        }
        try {
            doc.algebra.emplace(n, std::move(c));
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what());
        }
        if (j.contains("frame")) {
            const json& fr = j["frame"];
            if (!fr.is_array() || fr.empty()) throw ParseError("frame must be a nonempty list of columns");
            std::vector<Vector> cols;
            for (const auto& col : fr) cols.push_back(parse_vector(col, n, "frame"));
            doc.frame = Matrix::from_columns(cols, n);
        }
        return doc;
    }

    doc.degree = count(field(j, "degree", "document"), "degree");
    if (doc.degree > doc.dim) throw ParseError("degree exceeds dim");
    const json& terms = field(j, "terms", "document");
    if (!terms.is_array()) throw ParseError("terms must be a list");

    if (doc.kind == DocKind::PolyForm) {
        const json& sp = field(j, "split", "document");
        std::size_t dk = count(field(sp, "dim_K", "split"), "split.dim_K");
        std::size_t dl = count(field(sp, "dim_L", "split"), "split.dim_L");
        if (dk + dl != doc.dim) throw ParseError("split: dim_K + dim_L must equal dim");
        doc.poly = PolyForm(doc.dim, doc.degree, dk);
        for (std::size_t t = 0; t < terms.size(); ++t) {
            std::string w = "terms[" + std::to_string(t) + "]";
            Mask m = parse_indices(field(terms[t], "indices", w), doc.dim, doc.degree, w);
            if (terms[t].contains("polynomial"))
                doc.poly.add_term(m, parse_polynomial(terms[t]["polynomial"], doc.dim, w));
            else
                doc.poly.add_term(m, Polynomial::constant(doc.dim, parse_rational(field(terms[t], "coefficient", w), w)));
        }
        return doc;
    }

    doc.value_dim = 1;
    if (doc.kind == DocKind::VectorValuedForm) {
        doc.value_dim = count(field(j, "value_dim", "document"), "value_dim");
        if (doc.value_dim == 0) throw ParseError("value_dim must be positive");
    } else if (j.contains("value_dim") && count(j["value_dim"], "value_dim") != 1) {
        throw ParseError("scalar_form has value_dim 1");
    }
    std::vector<std::vector<AlternatingForm::Term>> comps(doc.value_dim);
    for (std::size_t t = 0; t < terms.size(); ++t) {
        std::string w = "terms[" + std::to_string(t) + "]";
        Mask m = parse_indices(field(terms[t], "indices", w), doc.dim, doc.degree, w);
        std::size_t a = terms[t].contains("component") ? index1(terms[t]["component"], doc.value_dim, w) : 0;
        if (terms[t].contains("polynomial")) throw ParseError(w + ": polynomial coefficients need kind poly_form");
        comps[a].emplace_back(m, parse_rational(field(terms[t], "coefficient", w), w));
    }
    std::vector<AlternatingForm> forms;
    for (auto& c : comps) forms.push_back(AlternatingForm::from_terms(doc.dim, doc.degree, std::move(c)));
    doc.form = VectorValuedForm(std::move(forms));
    if (j.contains("flag")) {
        if (doc.kind != DocKind::ScalarForm) throw ParseError("flags are only meaningful for scalar forms");
        doc.flag = parse_flag(j["flag"], doc.dim);
    }
    return doc;
}

FormDocument load_document(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_document(ss.str());
}

json to_json(const FormDocument& doc) {
    json j;
    j["schema_version"] = "1";
    j["kind"] = to_string(doc.kind);
    j["dim"] = doc.dim;
    if (!doc.claim.empty()) j["claim"] = doc.claim;
    if (!doc.expect.is_null()) j["expect"] = doc.expect;
    json terms = json::array();
    switch (doc.kind) {
        case DocKind::LieAlgebra: {
            json sc = json::array();
            const auto& g = *doc.algebra;
            for (std::size_t a = 0; a < g.dim(); ++a)
                for (std::size_t b = 0; b < g.dim(); ++b)
                    for (std::size_t c = b + 1; c < g.dim(); ++c)
                        if (!g.c(a, b, c).is_zero())
                            sc.push_back({{"upper", a + 1}, {"lower", {b + 1, c + 1}}, {"value", rational_json(g.c(a, b, c))}});
            j["structure_constants"] = sc;
            if (doc.frame) j["frame"] = matrix_columns_json(*doc.frame);
            return j;
        }
        case DocKind::PolyForm:
            j["degree"] = doc.degree;
            j["split"] = {{"dim_K", doc.poly.dim_k()}, {"dim_L", doc.poly.dim_l()}};
            for (const auto& [m, p] : doc.poly.coeffs())
                terms.push_back({{"indices", indices_json(m)}, {"polynomial", polynomial_json(p)}});
            j["terms"] = terms;
            return j;
        case DocKind::ScalarForm:
        case DocKind::VectorValuedForm:
            break;
    }
    j["degree"] = doc.degree;
    if (doc.kind == DocKind::VectorValuedForm) j["value_dim"] = doc.value_dim;
    for (std::size_t a = 0; a < doc.form.value_dim(); ++a)
        for (const auto& [m, c] : doc.form.component(a).terms()) {
            json t = {{"indices", indices_json(m)}, {"coefficient", rational_json(c)}};
            if (doc.kind == DocKind::VectorValuedForm) t["component"] = a + 1;
            terms.push_back(t);
        }
    j["terms"] = terms;
    if (doc.flag) {
        json vi = json::array();
        for (const auto& v : doc.flag->vertical().basis_vectors()) {
            auto nz = std::find_if(v.begin(), v.end(), [](const Rational& x) { return !x.is_zero(); });
            std::size_t i = static_cast<std::size_t>(nz - v.begin());
            if (v != unit_vector(v.size(), i))
                throw std::invalid_argument("only coordinate vertical subspaces can be serialized");
            vi.push_back(i + 1);
        }
        j["flag"] = {{"vertical_indices", vi}, {"splitting", matrix_columns_json(doc.flag->splitting())}};
    }
    return j;
}

FormDocument make_document(const VectorValuedForm& w) {
    FormDocument d;
    d.kind = DocKind::VectorValuedForm;
    d.dim = w.dim();
    d.degree = w.degree();
    d.value_dim = w.value_dim();
    d.form = w;
    return d;
}

FormDocument make_document(const AlternatingForm& w, const std::optional<Flag>& flag) {
    FormDocument d;
    d.kind = DocKind::ScalarForm;
    d.dim = w.dim();
    d.degree = w.degree();
    d.form = VectorValuedForm({w});
    d.flag = flag;
    return d;
}

FormDocument make_document(const PolyForm& w) {
    FormDocument d;
    d.kind = DocKind::PolyForm;
    d.dim = w.dim();
    d.degree = w.degree();
    d.poly = w;
    return d;
}

std::string digest(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace pdx::cli
