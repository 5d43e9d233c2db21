#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "qdlab/qcore.hpp"

namespace qdlab {

/// Matrix interchange: {"dim": n, "re": [...], "im": [...]}, row-major,
/// written with 17 significant digits.
std::string matrix_to_json(const ComplexMatrix& m);
void write_matrix_json(std::ostream& os, const ComplexMatrix& m);

/// Throws std::invalid_argument on malformed input.
ComplexMatrix matrix_from_json(const nlohmann::json& j);
ComplexMatrix read_matrix_json(std::istream& is);
ComplexMatrix read_matrix_json_file(const std::string& path);

/// printf-style "%.{digits}g" without locale surprises.
std::string format_double(double value, int significant_digits);

}  // namespace qdlab
