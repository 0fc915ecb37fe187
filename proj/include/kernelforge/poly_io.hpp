#pragma once

#include <kernelforge/poly.hpp>

#include <json.hpp>

#include <string>
#include <string_view>

namespace kernelforge {

/// Parses text such as "3 + z1^2 - 2.5*z1*z2 + (1,-2)*z2^3" or "2i*z1".
/// Coefficients are real literals, imaginary literals with an `i` suffix, or
/// parenthesized "(re,im)" pairs. Throws std::invalid_argument on bad input.
BiPoly parse_bipoly(std::string_view text);

/// Canonical text form, accepted back by parse_bipoly.
std::string to_string(const BiPoly& p);
std::string to_string(const UniPoly& p);

/// JSON form: array of [m, n, re, im].
nlohmann::json to_json(const BiPoly& p);
BiPoly bipoly_from_json(const nlohmann::json& j);

/// Parses "re,im" (or a single real) into a complex number.
cplx parse_complex(std::string_view text);

}  // namespace kernelforge
