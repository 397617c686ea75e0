#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bgpcomm::csv {

/// Splits one RFC 4180 record. Quoted fields may contain commas and
/// doubled quotes; embedded newlines are not supported. Returns nullopt
/// for an unterminated quote or stray characters after a closing quote.
std::optional<std::vector<std::string>> split_line(std::string_view line);

/// Quotes a field for output, doubling embedded quotes.
std::string quote(std::string_view field);

}  // namespace bgpcomm::csv
