#pragma once

#include "arrlie/arrangement.hpp"
#include "arrlie/decomposability.hpp"
#include "arrlie/holonomy.hpp"
#include "arrlie/matrix.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace arrlie::io {

using Json = nlohmann::ordered_json;

/// Numbers within the 53-bit safe range stay numbers; anything larger becomes a decimal string.
Json to_json(const mpz_class& x);
/// Integers as for mpz, other values as "p/q".
Json to_json(const mpq_class& x);
Json to_json(const std::vector<mpz_class>& v);
Json to_json(const IntMatrix& m);
Json to_json(const GradedAbelian& g);

/// Accepts a number, a decimal string, or "p/q"; `where` names the JSON location for errors.
mpq_class rational_from_json(const Json& j, const std::string& where);
mpz_class integer_from_json(const Json& j, const std::string& where);

Json arrangement_to_json(const Arrangement& arr);
Arrangement arrangement_from_json(const Json& j);
/// Canonical text: one key per line, inner arrays compact.
std::string emit_arrangement(const Arrangement& arr);

bool is_presentation(const Json& j);
Presentation presentation_from_json(const Json& j);

/// An object {"atom of A": "atom of B", ...} or an array whose i-th entry is the image of
/// atom i (index or name).
LatticeIso iso_from_json(const Json& j, const Arrangement& a, const Arrangement& b);

/// Reads and parses a file; errors carry the path and the parser position.
Json parse_json_text(const std::string& text, const std::string& origin);
std::string read_file(const std::string& path);

std::string sha256_hex(const std::string& bytes);

}  // namespace arrlie::io
