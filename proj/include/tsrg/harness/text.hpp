#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace tsrg::harness {

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
/// Shortest text that parses back to exactly `v`.
std::string format_double(double v);
/// Strict full-field parse; throws IngestError mentioning `where`.
double parse_double(std::string_view s, const std::string& where);

}  // namespace tsrg::harness
