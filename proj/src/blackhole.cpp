#include "bgpcomm/blackhole.hpp"

#include <set>

namespace bgpcomm {

bool covered_by_peer_route(const Baseline& baseline, const PeerId& peer, const Prefix& prefix) {
  // Keys order by peer first, so one peer's routes are contiguous.
  auto it = baseline.entries.lower_bound(RouteKey{peer, Prefix{}});
  for (; it != baseline.entries.end() && it->first.peer == peer; ++it) {
    if (prefix_covers(it->first.prefix, prefix)) {
      return true;
    }
  }
  return false;
}

std::optional<BlackholeEvent> classify_blackhole(const BgpUpdate& u, const Dictionary& dictionary,
                                                 const Baseline& baseline) {
  if (!u.is_announcement()) {
    return std::nullopt;
  }
  std::vector<Community> hits;
  for (const auto& c : u.communities) {
    if (dictionary.lookup(c).contains(Meaning{Blackhole{}})) {
      hits.push_back(c);
    }
  }
  if (hits.empty()) {
    return std::nullopt;
  }
  BlackholeEvent e;
  e.timestamp = u.timestamp;
  e.prefix = u.prefix;
  e.requester_asn = hits.front().asn;
  e.peer = u.peer;
  e.prefix_length = u.prefix.length();
  e.covered_by_baseline = covered_by_peer_route(baseline, u.peer, u.prefix);
  e.blackhole_communities = std::move(hits);
  return e;
}

BlackholeSeries blackhole_series(std::span<const BlackholeEvent> events, std::int64_t period) {
  if (period <= 0) {
    throw std::invalid_argument("period must be positive");
  }
  BlackholeSeries series;
  series.period_length = period;
  if (events.empty()) {
    return series;
  }

  struct Acc {
    std::set<Prefix> prefixes;
    std::size_t events = 0;
  };
  std::map<std::int64_t, Acc> by_period;
  for (const auto& e : events) {
    Acc& a = by_period[bin_index(e.timestamp, period)];
    a.prefixes.insert(e.prefix);
    ++a.events;
  }

  std::set<Prefix> seen;
  const std::int64_t first = by_period.begin()->first;
  const std::int64_t last = by_period.rbegin()->first;
  for (std::int64_t p = first; p <= last; ++p) {
    BlackholeSeriesPoint pt;
    pt.period = p;
    pt.period_start = p * period;
    if (auto it = by_period.find(p); it != by_period.end()) {
      pt.distinct_prefixes = it->second.prefixes.size();
      pt.events = it->second.events;
      seen.insert(it->second.prefixes.begin(), it->second.prefixes.end());
    }
    pt.cumulative_distinct_prefixes = seen.size();
    series.points.push_back(pt);
  }
  return series;
}

std::map<unsigned, std::size_t> blackhole_prefix_length_histogram(
    std::span<const BlackholeEvent> events) {
  std::map<unsigned, std::size_t> hist;
  for (const auto& e : events) {
    ++hist[e.prefix_length];
  }
  return hist;
}

}  // namespace bgpcomm
