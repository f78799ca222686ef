#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "hypercal/quaternionic_double.hpp"

namespace hypercal {

using Json = nlohmann::ordered_json;

inline constexpr const char* kFormatVersion = "hypercal/1";

// One parsed model file (or builtin). Exactly one of the payloads is set;
// `canonical` is the canonical serialization used for content hashing.
struct ModelDocument {
    std::string kind; // lie_model | affine_model | double_model
    std::optional<LieModel> lie;
    std::optional<AffineComplexModel> affine;
    std::optional<DoubleModel> dbl;
    std::string canonical;

    const LieModel& as_lie() const; // lie payload, or the double's model
};

// Scalar grammar: integer, "p/q" string, or {"re": .., "im": ..}.
GaussianRational parse_scalar(const Json& j);
Json scalar_to_json(const GaussianRational& s);

Matrix parse_matrix(const Json& j, int rows, int cols, const std::string& what);
Json matrix_to_json(const Matrix& m);

// Strict parsers: unknown keys are ParseErrors, semantic failures are
// DomainErrors.
ModelDocument parse_model(const Json& j);
ModelDocument parse_model_file(const std::string& path);

Json serialize(const LieModel& m);
Json serialize(const AffineComplexModel& a);
Json serialize(const DoubleModel& d);

Json form_to_json(const Form& f);
Form form_from_json(const Json& j, const FramePtr& frame);

// Builtin catalog: flat:1..flat:4, kodaira, iwasawa (affine bases; *_base
// aliases accepted) and kodaira_double, iwasawa_double, flat_double:n.
bool is_builtin_name(const std::string& name);
ModelDocument builtin_document(const std::string& name);

// Loads a builtin by name or a model file by path.
ModelDocument load_model(const std::string& path_or_name);

std::string content_hash(const std::string& bytes);

} // namespace hypercal
