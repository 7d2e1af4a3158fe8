#pragma once

#include <json.hpp>
#include <optional>
#include <stdexcept>
#include <string>

#include "pdx/diffforms.hpp"
#include "pdx/exterior.hpp"

namespace pdx::cli {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class DocKind { ScalarForm, VectorValuedForm, PolyForm, LieAlgebra };
std::string to_string(DocKind k);

// In-memory FormSpecDocument. Indices are 0-based here and 1-based on disk.
struct FormDocument {
    DocKind kind = DocKind::ScalarForm;
    std::size_t dim = 0, degree = 0, value_dim = 1;
    VectorValuedForm form;  // scalar_form has value_dim 1
    std::optional<Flag> flag;
    PolyForm poly;
    std::optional<LieAlgebraData> algebra;
    std::optional<Matrix> frame;
    std::string claim;
    nlohmann::json expect;  // null when absent

    AlternatingForm scalar() const { return form.component(0); }
};

FormDocument parse_document(const std::string& text);
FormDocument load_document(const std::string& path);
nlohmann::json to_json(const FormDocument& doc);

FormDocument make_document(const VectorValuedForm& w);
FormDocument make_document(const AlternatingForm& w, const std::optional<Flag>& flag = std::nullopt);
FormDocument make_document(const PolyForm& w);

nlohmann::json rational_json(const Rational& r);
Rational parse_rational(const nlohmann::json& j, const std::string& where);
nlohmann::json vector_json(const Vector& v);
Vector parse_vector(const nlohmann::json& j, std::size_t dim, const std::string& where);
// Basis vectors of the row-reduced basis.
nlohmann::json subspace_json(const Subspace& s);
nlohmann::json matrix_columns_json(const Matrix& m);
nlohmann::json polynomial_json(const Polynomial& p);

// 64-bit FNV-1a of the raw bytes, as 16 hex digits.
std::string digest(const std::string& bytes);

}  // namespace pdx::cli
