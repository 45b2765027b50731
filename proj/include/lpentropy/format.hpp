#pragma once

#include <string>
#include <string_view>

namespace lpe {

//! Locale-independent rendering with 17 significant digits, which
//! round-trips every double exactly.
std::string
format_double(double value);

//! Strict parse of a full token; throws std::invalid_argument on junk.
double
parse_double(std::string_view text);

std::string_view
trim(std::string_view text);

} // namespace lpe
