#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "kroner/pathintegral.hpp"
#include "kroner/poly.hpp"
#include "kroner/tensor_field.hpp"

namespace kroner {

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

/// Parses "3", "-2/5", "0.25" (decimal strings are converted exactly).
Rat parse_rat(const std::string& s);

/// Parses a polynomial string such as "x2^2 - 3/2*x1*x3 + 4" in variables x1..x{dim}.
Poly parse_poly(int dim, const std::string& s);

/// {"terms": [{"exp": [a, b, c], "coef": "p/q"}, ...]}
nlohmann::json poly_to_json(const Poly& p);
/// Accepts the object form above or a polynomial string.
Poly poly_from_json(int dim, const nlohmann::json& j);

/// {"dim": n, "shape": "matrix", "entries": {"i,j": poly, ...}} with 1-based
/// indices; omitted entries are zero. Vectors use "i" keys, scalars "value".
nlohmann::json field_to_json(const TensorField& f);
TensorField field_from_json(const nlohmann::json& j);
/// Matrix field that must be symmetric; the error names the first offending entry.
TensorField symmetric_field_from_json(const nlohmann::json& j);

/// {"vertices": [[x, y, z], ...]}
nlohmann::json path_to_json(const PathSpec& p);
PathSpec path_from_json(const nlohmann::json& j);

/// Reads and parses a JSON file; ParseError on I/O or syntax failure.
nlohmann::json read_json_file(const std::string& path);

}  // namespace kroner
