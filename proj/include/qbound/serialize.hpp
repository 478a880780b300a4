#pragma once

// Byte-stable number and record formatting shared by the CLI and the golden
// files: 12 significant digits, "inf" for infinities, no negative zero.

#include <string>
#include <utility>
#include <vector>

namespace qbound {

std::string fmt12(double v);

// Flat single-level JSON object; values are pre-formatted tokens
// (fmt12 output, "true", quoted strings).
std::string json_object(const std::vector<std::pair<std::string, std::string>>& fields);

std::string json_quote(const std::string& s);

}  // namespace qbound
