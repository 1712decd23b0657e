#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "eigenfit/bounds.hpp"
#include "eigenfit/perturbation.hpp"

namespace eigenfit {

// Key order is part of the report format, so serialization uses ordered JSON.
using Json = nlohmann::ordered_json;

// Parses complex literals of the form "a", "bi", "a+bi", "a-bi" with
// scientific notation allowed in both parts and 'i' or 'j' as the unit.
Complex parse_complex(const std::string& text);

// Canonical "a+bi" rendering with round-trip-exact doubles.
std::string format_complex(const Complex& z);

// Comma-separated complex literals.
std::vector<Complex> parse_complex_list(const std::string& text);

Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

// CSV: one row per line, entries are complex literals separated by commas.
ComplexMatrix parse_matrix_csv(std::istream& in);

// Reads a matrix from a JSON document (first non-space byte '{') or CSV.
ComplexMatrix read_matrix_file(const std::string& path);

// Writes the JSON matrix document.
void write_matrix_file(const std::string& path, const ComplexMatrix& m);

// FNV-1a hash over the dimensions and raw entry bytes, as a hex string.
std::string input_digest(const ComplexMatrix& m);

Json complex_to_json(const Complex& z);
Json complex_list_to_json(const std::vector<Complex>& zs);

// Non-finite doubles become JSON null (they have no JSON number form).
Json finite_or_null(double value);

Json verification_to_json(const VerificationReport& rep);
Json bound_report_to_json(const BoundReport& rep);
Json point_to_json(const StationaryPoint& p);

const char* status_name(OptimalityStatus status);

}  // namespace eigenfit
