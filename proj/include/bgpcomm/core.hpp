#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bgpcomm {

using Asn = std::uint32_t;
using Timestamp = std::int64_t;
using BinIndex = std::int64_t;

/// Raised for malformed textual input (communities, prefixes, records).
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Raised for extended (RFC 4360) and large community notations, which
/// carry more than one colon and are not representable as a Community.
class UnsupportedCommunityForm : public ParseError {
public:
  using ParseError::ParseError;
};

/// A two-octet community: tagging operator ASN in the high half, an
/// operator-defined payload in the low half.
struct Community {
  std::uint16_t asn = 0;
  std::uint16_t value = 0;

  friend auto operator<=>(const Community&, const Community&) = default;
};

using CommunitySet = std::set<Community>;

/// Parses "asn:value" where both halves are decimal and fit in 16 bits.
Community parse_community(std::string_view text);
std::string format_community(Community c);

enum class Family : std::uint8_t { v4, v6 };

/// A canonical CIDR prefix. Bits past `length` are always zero.
class Prefix {
public:
  Prefix() = default;
  /// Throws std::invalid_argument when the length exceeds the family
  /// width or any host bit is set.
  Prefix(Family family, std::array<std::uint8_t, 16> network, unsigned length);

  Family family() const { return family_; }
  unsigned length() const { return length_; }
  unsigned max_length() const { return family_ == Family::v4 ? 32 : 128; }
  const std::array<std::uint8_t, 16>& network() const { return network_; }

  /// Bit `i` of the network address, most significant first.
  bool bit(unsigned i) const {
    return (network_[i / 8] >> (7 - i % 8)) & 1u;
  }

  std::string to_string() const;

  friend auto operator<=>(const Prefix&, const Prefix&) = default;

private:
  Family family_ = Family::v4;
  std::uint8_t length_ = 0;
  std::array<std::uint8_t, 16> network_{};
};

/// Strict CIDR parser: rejects non-canonical input instead of masking it.
Prefix parse_prefix(std::string_view text);

bool prefix_covers(const Prefix& covering, const Prefix& covered);

/// Collector-peer end first, origin last.
struct AsPath {
  std::vector<Asn> hops;

  bool empty() const { return hops.empty(); }
  std::size_t size() const { return hops.size(); }

  friend auto operator<=>(const AsPath&, const AsPath&) = default;
};

AsPath collapse_prepending(const AsPath& path);

struct PeerId {
  Asn asn = 0;
  std::string addr;

  friend auto operator<=>(const PeerId&, const PeerId&) = default;
};

enum class UpdateKind : std::uint8_t { announcement, withdrawal };

struct BgpUpdate {
  Timestamp timestamp = 0;
  PeerId peer;
  UpdateKind kind = UpdateKind::announcement;
  Prefix prefix;
  AsPath path;
  CommunitySet communities;

  bool is_announcement() const { return kind == UpdateKind::announcement; }
};

struct RouteKey {
  PeerId peer;
  Prefix prefix;

  friend auto operator<=>(const RouteKey&, const RouteKey&) = default;
};

inline RouteKey route_key(const BgpUpdate& u) { return {u.peer, u.prefix}; }

/// floor(timestamp / bin_width). Throws std::invalid_argument for
/// non-positive widths.
BinIndex bin_index(Timestamp timestamp, std::int64_t bin_width);

}  // namespace bgpcomm
