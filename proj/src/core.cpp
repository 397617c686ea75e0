#include "bgpcomm/core.hpp"

#include <arpa/inet.h>

#include <algorithm>
#include <charconv>

namespace bgpcomm {

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::uint16_t parse_half(std::string_view digits, std::string_view text) {
  if (!all_digits(digits)) {
    throw ParseError("malformed community '" + std::string(text) + "'");
  }
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
  if (ec == std::errc::result_out_of_range || v > 0xFFFF) {
    throw ParseError("community half out of 16-bit range in '" + std::string(text) + "'");
  }
  if (ec != std::errc() || ptr != digits.data() + digits.size()) {
    throw ParseError("malformed community '" + std::string(text) + "'");
  }
  return static_cast<std::uint16_t>(v);
}

}  // namespace

Community parse_community(std::string_view text) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw ParseError("malformed community '" + std::string(text) + "': expected asn:value");
  }
  if (text.find(':', colon + 1) != std::string_view::npos) {
    throw UnsupportedCommunityForm("unsupported community form '" + std::string(text) +
                                   "': only two-octet asn:value communities are accepted");
  }
  return Community{parse_half(text.substr(0, colon), text),
                   parse_half(text.substr(colon + 1), text)};
}

std::string format_community(Community c) {
  return std::to_string(c.asn) + ":" + std::to_string(c.value);
}

Prefix::Prefix(Family family, std::array<std::uint8_t, 16> network, unsigned length)
    : family_(family), network_(network) {
  unsigned max = family == Family::v4 ? 32 : 128;
  if (length > max) {
    throw std::invalid_argument("prefix length " + std::to_string(length) + " exceeds " +
                                std::to_string(max));
  }
  length_ = static_cast<std::uint8_t>(length);
  for (unsigned i = length; i < 128; ++i) {
    if (bit(i)) {
      throw std::invalid_argument("prefix has nonzero host bits");
    }
  }
}

std::string Prefix::to_string() const {
  char buf[INET6_ADDRSTRLEN] = {};
  int af = family_ == Family::v4 ? AF_INET : AF_INET6;
  inet_ntop(af, network_.data(), buf, sizeof(buf));
  return std::string(buf) + "/" + std::to_string(length_);
}

Prefix parse_prefix(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    throw ParseError("malformed prefix '" + std::string(text) + "': missing /length");
  }
  std::string addr(text.substr(0, slash));
  std::string_view len_text = text.substr(slash + 1);

  std::array<std::uint8_t, 16> bytes{};
  Family family;
  if (addr.find(':') != std::string::npos) {
    family = Family::v6;
    if (inet_pton(AF_INET6, addr.c_str(), bytes.data()) != 1) {
      throw ParseError("malformed IPv6 address in '" + std::string(text) + "'");
    }
  } else {
    family = Family::v4;
    if (inet_pton(AF_INET, addr.c_str(), bytes.data()) != 1) {
      throw ParseError("malformed IPv4 address in '" + std::string(text) + "'");
    }
  }

  if (!all_digits(len_text) || len_text.size() > 3 || (len_text.size() > 1 && len_text[0] == '0')) {
    throw ParseError("malformed prefix length in '" + std::string(text) + "'");
  }
  unsigned length = 0;
  std::from_chars(len_text.data(), len_text.data() + len_text.size(), length);
  unsigned max = family == Family::v4 ? 32 : 128;
  if (length > max) {
    throw ParseError("prefix length out of range in '" + std::string(text) + "'");
  }
  try {
    return Prefix(family, bytes, length);
  } catch (const std::invalid_argument&) {
    throw ParseError("non-canonical prefix '" + std::string(text) + "': host bits set");
  }
}

bool prefix_covers(const Prefix& covering, const Prefix& covered) {
  if (covering.family() != covered.family() || covering.length() > covered.length()) {
    return false;
  }
  unsigned full = covering.length() / 8;
  const auto& a = covering.network();
  const auto& b = covered.network();
  if (!std::equal(a.begin(), a.begin() + full, b.begin())) {
    return false;
  }
  unsigned rem = covering.length() % 8;
  if (rem == 0) {
    return true;
  }
  auto mask = static_cast<std::uint8_t>(0xFF << (8 - rem));
  return (a[full] & mask) == (b[full] & mask);
}

AsPath collapse_prepending(const AsPath& path) {
  AsPath out;
  out.hops.reserve(path.hops.size());
  std::unique_copy(path.hops.begin(), path.hops.end(), std::back_inserter(out.hops));
  return out;
}

BinIndex bin_index(Timestamp timestamp, std::int64_t bin_width) {
  if (bin_width <= 0) {
    throw std::invalid_argument("bin width must be positive");
  }
  BinIndex q = timestamp / bin_width;
  if (timestamp % bin_width != 0 && timestamp < 0) {
    --q;
  }
  return q;
}

}  // namespace bgpcomm
