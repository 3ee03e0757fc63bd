#pragma once

#include "quadmod/integer_matrix.hpp"
#include "quadmod/quad_module.hpp"

#include <json.hpp>

#include <string>

namespace quadmod {

inline constexpr const char* kSpecSchema = "quadmod-spec-v1";

/// [reNum, reDen, imNum, imDen]; entries beyond 64 bits are decimal strings.
nlohmann::json to_json(const GaussianRational& z);
GaussianRational rational_from_json(const nlohmann::json& j, const std::string& where);

nlohmann::json spec_to_json(const QuadModuleSpec& spec);
/// Throws ParseError (with the offending field) or SchemaVersionMismatch.
QuadModuleSpec spec_from_json(const nlohmann::json& j);
/// Text with line/column context on syntax errors.
QuadModuleSpec parse_spec_text(const std::string& text, const std::string& origin);
QuadModuleSpec load_spec_file(const std::string& path);

nlohmann::json to_json(const IntegerMatrix& m);
/// {freeRank, factors}
nlohmann::json to_json(const FGAbelianGroup& g);
nlohmann::json to_json(const CheckResult& c);
nlohmann::json to_json(const Report& r);

}  // namespace quadmod
