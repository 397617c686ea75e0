#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "bgpcomm/baseline.hpp"
#include "bgpcomm/core.hpp"
#include "bgpcomm/dictionary.hpp"

namespace bgpcomm {

enum class DeviationKind : std::uint8_t { withdrawal, community_change, path_change };

std::string_view to_string(DeviationKind k);

struct Deviation {
  RouteKey key;
  BinIndex bin = 0;
  Timestamp timestamp = 0;
  DeviationKind kind = DeviationKind::withdrawal;
  CommunitySet old_communities;
  CommunitySet new_communities;
  MeaningSet removed_meanings;
  MeaningSet added_meanings;
  std::optional<AsPath> old_path;
  std::optional<AsPath> new_path;
};

struct Signal {
  BinIndex bin = 0;
  Timestamp bin_start = 0;
  Timestamp bin_end = 0;
  /// One per distinct key, ordered by key.
  std::vector<Deviation> deviations;
  std::size_t count = 0;
  std::size_t threshold = 0;
};

inline constexpr std::int64_t kDefaultBinWidth = 60;
inline constexpr std::size_t kDefaultThreshold = 10;

struct DetectorConfig {
  std::int64_t bin_width = kDefaultBinWidth;
  std::size_t threshold = kDefaultThreshold;
  /// When set, the effective threshold is max(1, ceil(fraction * baseline size)).
  std::optional<double> relative_threshold;
  bool detect_path_changes = false;
  std::int64_t reorder_slack = 30;
};

class BinClosedError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Diffs live updates against the monitored baseline and raises a Signal
/// for every bin whose distinct deviating keys reach the threshold.
///
/// The monitored state only changes at bin close, when every key that
/// deviated in the bin is re-admitted with its latest observed state
/// (a final withdrawal removes the key).
class Detector {
public:
  Detector(Baseline baseline, const Dictionary& dictionary, DetectorConfig config = {});

  /// Returns the (coalesced) deviation recorded for the update's key in
  /// its bin, or nullopt when the update does not deviate.
  std::optional<Deviation> process_update(const BgpUpdate& u);

  /// Closes one bin. Throws BinClosedError if `bin` is at or before the
  /// last closed bin.
  std::optional<Signal> close_bin(BinIndex bin);

  /// Closes every open bin whose end plus the reorder slack is <= now.
  std::vector<Signal> advance_to(Timestamp now);

  /// Closes every open bin; used at end of stream.
  std::vector<Signal> flush();

  const Baseline& monitored() const { return monitored_; }
  std::size_t effective_threshold() const { return threshold_; }
  const DetectorConfig& config() const { return config_; }
  std::optional<BinIndex> last_closed() const { return last_closed_; }
  std::uint64_t late_updates() const { return late_updates_; }
  std::uint64_t bins_closed() const { return bins_closed_; }

private:
  struct LatestState {
    bool withdrawn = false;
    CommunitySet communities;
    AsPath path;
  };
  struct KeyRecord {
    Deviation deviation;
    LatestState latest;
  };
  using BinState = std::map<RouteKey, KeyRecord>;

  Baseline monitored_;
  const Dictionary* dictionary_;
  DetectorConfig config_;
  std::size_t threshold_;
  std::map<BinIndex, BinState> open_bins_;
  std::optional<BinIndex> last_closed_;
  std::uint64_t late_updates_ = 0;
  std::uint64_t bins_closed_ = 0;
};

/// Meanings present in `before` but not in `after`.
MeaningSet meaning_difference(const MeaningSet& before, const MeaningSet& after);

}  // namespace bgpcomm
