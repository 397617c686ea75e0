#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "bgpcomm/baseline.hpp"
#include "bgpcomm/core.hpp"
#include "bgpcomm/dictionary.hpp"

namespace bgpcomm {

struct BlackholeEvent {
  Timestamp timestamp = 0;
  Prefix prefix;
  std::uint16_t requester_asn = 0;
  PeerId peer;
  bool covered_by_baseline = false;
  unsigned prefix_length = 0;
  /// Every community on the update that resolved to Blackhole, ascending.
  std::vector<Community> blackhole_communities;
};

/// Returns an event iff the update is an announcement whose communities
/// resolve to Blackhole. The requester is the ASN half of the lowest such
/// community.
std::optional<BlackholeEvent> classify_blackhole(const BgpUpdate& u, const Dictionary& dictionary,
                                                 const Baseline& baseline);

/// True when some baseline route of `peer` covers `prefix`.
bool covered_by_peer_route(const Baseline& baseline, const PeerId& peer, const Prefix& prefix);

inline constexpr std::int64_t kDailyPeriod = 86400;

struct BlackholeSeriesPoint {
  std::int64_t period = 0;
  Timestamp period_start = 0;
  std::size_t distinct_prefixes = 0;
  std::size_t events = 0;
  /// Distinct prefixes seen in this or any earlier period.
  std::size_t cumulative_distinct_prefixes = 0;

  friend bool operator==(const BlackholeSeriesPoint&, const BlackholeSeriesPoint&) = default;
};

struct BlackholeSeries {
  std::int64_t period_length = kDailyPeriod;
  std::vector<BlackholeSeriesPoint> points;
};

/// Dense per-period aggregation: idle periods between the first and last
/// event appear with zero counts.
BlackholeSeries blackhole_series(std::span<const BlackholeEvent> events,
                                 std::int64_t period = kDailyPeriod);

std::map<unsigned, std::size_t> blackhole_prefix_length_histogram(
    std::span<const BlackholeEvent> events);

}  // namespace bgpcomm
