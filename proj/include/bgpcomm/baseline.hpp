#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>

#include "bgpcomm/core.hpp"

namespace bgpcomm {

inline constexpr std::int64_t kDefaultInitWindow = 3600;
inline constexpr std::uint32_t kDefaultMinObservations = 2;

struct BaselineEntry {
  RouteKey key;
  AsPath path;
  CommunitySet communities;
  std::uint32_t observations = 0;
  Timestamp first_seen = 0;
  Timestamp last_seen = 0;
};

/// Routes that carried exactly one community set throughout the
/// initialization window. `window_end` is exclusive.
struct Baseline {
  std::map<RouteKey, BaselineEntry> entries;
  Timestamp window_start = 0;
  Timestamp window_end = 0;

  std::size_t size() const { return entries.size(); }
  bool contains(const RouteKey& k) const { return entries.contains(k); }
  const BaselineEntry* find(const RouteKey& k) const {
    auto it = entries.find(k);
    return it == entries.end() ? nullptr : &it->second;
  }
};

class WindowError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Accumulates observations over [window_start, window_end).
class BaselineBuilder {
public:
  BaselineBuilder(Timestamp window_start, Timestamp window_end,
                  std::uint32_t min_observations = kDefaultMinObservations);

  /// Throws WindowError when `u` falls outside the window.
  void observe(const BgpUpdate& u);

  /// Keys that stayed stable, ended announced, and were seen often enough.
  Baseline finalize() const;

  Timestamp window_start() const { return start_; }
  Timestamp window_end() const { return end_; }
  bool in_window(Timestamp t) const { return start_ <= t && t < end_; }
  std::size_t keys_observed() const { return routes_.size(); }

private:
  struct Track {
    BaselineEntry entry;
    bool unstable = false;
    bool announced = false;
    Timestamp last_announce = 0;
    bool withdrawn_seen = false;
    Timestamp last_withdraw = 0;
  };

  Timestamp start_;
  Timestamp end_;
  std::uint32_t min_observations_;
  std::map<RouteKey, Track> routes_;
};

/// One JSON object per entry, ordered by key.
void write_baseline(std::ostream& out, const Baseline& b);

/// Inverse of write_baseline. Throws ParseError with the line number on
/// malformed input.
Baseline read_baseline(std::istream& in);

}  // namespace bgpcomm
