#pragma once

#include <string>

#include <json.hpp>

namespace quadham {

/// Serializes `j` with sorted keys, two-space indentation and every floating
/// point number rendered as %.12e (negative zero printed as zero), so equal
/// inputs give byte-identical text.
std::string canonical_dump(const nlohmann::json& j);

/// %.<digits>e with negative zero folded to zero.
std::string format_scientific(double v, int digits);

}  // namespace quadham
