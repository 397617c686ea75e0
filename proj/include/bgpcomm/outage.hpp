#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "bgpcomm/baseline.hpp"
#include "bgpcomm/detector.hpp"
#include "bgpcomm/dictionary.hpp"

namespace bgpcomm {

enum class OutageVerdict : std::uint8_t { outage, inconclusive };

std::string_view to_string(OutageVerdict v);

struct OutageConfig {
  double concentration_min = 0.5;
  std::size_t attributed_min = 10;
};

struct OutageReport {
  BinIndex bin = 0;
  Geolocation location;
  std::size_t attributed = 0;
  std::size_t total = 0;
  double concentration = 0.0;
  OutageVerdict verdict = OutageVerdict::inconclusive;
};

/// One report per geolocation that any deviation lost, ordered by
/// concentration (descending) then location.
std::vector<OutageReport> investigate_outage(const Signal& signal, const OutageConfig& config = {});

struct ActivityPoint {
  BinIndex bin = 0;
  Timestamp bin_start = 0;
  std::size_t announcements = 0;
  std::size_t withdrawals = 0;

  friend bool operator==(const ActivityPoint&, const ActivityPoint&) = default;
};

/// Per-bin routing activity, optionally restricted to updates whose
/// communities resolve to one location. Withdrawals carry no communities,
/// so they are attributed through the last community set seen for the key.
class LocationSeries {
public:
  LocationSeries(const Dictionary& dictionary, std::optional<Geolocation> filter,
                 std::int64_t bin_width = kDefaultBinWidth);

  /// Seeds the last-known community sets, e.g. from a baseline.
  void seed(const Baseline& baseline);

  void add(const BgpUpdate& u);

  /// Dense series from the first to the last bin that saw any update.
  std::vector<ActivityPoint> points() const;

private:
  bool matches(const CommunitySet& cs) const;

  const Dictionary* dictionary_;
  std::optional<Geolocation> filter_;
  std::int64_t bin_width_;
  std::map<RouteKey, CommunitySet> last_known_;
  std::map<BinIndex, ActivityPoint> bins_;
};

std::vector<ActivityPoint> location_timeseries(std::span<const BgpUpdate> updates,
                                               const Dictionary& dictionary,
                                               const std::optional<Geolocation>& filter,
                                               std::int64_t bin_width = kDefaultBinWidth);

}  // namespace bgpcomm
