#include "bgpcomm/detector.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

namespace bgpcomm {

std::string_view to_string(DeviationKind k) {
  switch (k) {
    case DeviationKind::withdrawal:
      return "withdrawal";
    case DeviationKind::community_change:
      return "community-change";
    case DeviationKind::path_change:
      return "path-change";
  }
  return "unknown";
}

MeaningSet meaning_difference(const MeaningSet& before, const MeaningSet& after) {
  MeaningSet out;
  std::set_difference(before.begin(), before.end(), after.begin(), after.end(),
                      std::inserter(out, out.end()));
  return out;
}

Detector::Detector(Baseline baseline, const Dictionary& dictionary, DetectorConfig config)
    : monitored_(std::move(baseline)), dictionary_(&dictionary), config_(config) {
  if (config_.bin_width <= 0) {
    throw std::invalid_argument("bin width must be positive");
  }
  if (config_.reorder_slack < 0) {
    throw std::invalid_argument("reorder slack must be non-negative");
  }
  if (config_.relative_threshold) {
    double f = *config_.relative_threshold;
    if (!(f > 0.0 && f <= 1.0)) {
      throw std::invalid_argument("relative threshold must be in (0, 1]");
    }
    auto scaled = static_cast<std::size_t>(std::ceil(f * static_cast<double>(monitored_.size())));
    threshold_ = std::max<std::size_t>(1, scaled);
  } else {
    if (config_.threshold < 1) {
      throw std::invalid_argument("threshold must be at least 1");
    }
    threshold_ = config_.threshold;
  }
}

std::optional<Deviation> Detector::process_update(const BgpUpdate& u) {
  const BinIndex bin = bin_index(u.timestamp, config_.bin_width);
  if (last_closed_ && bin <= *last_closed_) {
    ++late_updates_;
    return std::nullopt;
  }
  const RouteKey key = route_key(u);

  // Reference state: the latest state from an earlier still-open bin if
  // the key deviated there, otherwise the monitored baseline.
  const CommunitySet* ref_communities = nullptr;
  const AsPath* ref_path = nullptr;
  bool found = false;
  for (auto it = std::make_reverse_iterator(open_bins_.lower_bound(bin));
       it != open_bins_.rend(); ++it) {
    auto rec = it->second.find(key);
    if (rec == it->second.end()) {
      continue;
    }
    if (rec->second.latest.withdrawn) {
      return std::nullopt;
    }
    ref_communities = &rec->second.latest.communities;
    ref_path = &rec->second.latest.path;
    found = true;
    break;
  }
  if (!found) {
    const BaselineEntry* entry = monitored_.find(key);
    if (!entry) {
      return std::nullopt;
    }
    ref_communities = &entry->communities;
    ref_path = &entry->path;
  }

  LatestState latest;
  if (u.kind == UpdateKind::withdrawal) {
    latest.withdrawn = true;
  } else {
    latest.communities = u.communities;
    latest.path = u.path;
  }

  std::optional<Deviation> dev;
  if (u.kind == UpdateKind::withdrawal) {
    dev.emplace();
    dev->kind = DeviationKind::withdrawal;
    dev->old_communities = *ref_communities;
    dev->removed_meanings = dictionary_->annotate(*ref_communities);
    dev->old_path = *ref_path;
  } else if (u.communities != *ref_communities) {
    dev.emplace();
    dev->kind = DeviationKind::community_change;
    dev->old_communities = *ref_communities;
    dev->new_communities = u.communities;
    auto before = dictionary_->annotate(*ref_communities);
    auto after = dictionary_->annotate(u.communities);
    dev->removed_meanings = meaning_difference(before, after);
    dev->added_meanings = meaning_difference(after, before);
    dev->old_path = *ref_path;
    dev->new_path = u.path;
  } else if (config_.detect_path_changes &&
             collapse_prepending(u.path) != collapse_prepending(*ref_path)) {
    dev.emplace();
    dev->kind = DeviationKind::path_change;
    dev->old_communities = *ref_communities;
    dev->new_communities = u.communities;
    dev->old_path = *ref_path;
    dev->new_path = u.path;
  }

  auto bin_it = open_bins_.find(bin);
  if (!dev) {
    // A return to the reference state still updates the latest state of a
    // key that already deviated in this bin.
    if (bin_it != open_bins_.end()) {
      if (auto rec = bin_it->second.find(key); rec != bin_it->second.end()) {
        rec->second.latest = std::move(latest);
      }
    }
    return std::nullopt;
  }

  dev->key = key;
  dev->bin = bin;
  dev->timestamp = u.timestamp;
  if (bin_it == open_bins_.end()) {
    bin_it = open_bins_.emplace(bin, BinState{}).first;
  }
  auto& rec = bin_it->second[key];
  rec.deviation = *dev;
  rec.latest = std::move(latest);
  return dev;
}

std::optional<Signal> Detector::close_bin(BinIndex bin) {
  if (last_closed_ && bin <= *last_closed_) {
    throw BinClosedError("bin " + std::to_string(bin) + " is already closed");
  }
  if (!open_bins_.empty() && open_bins_.begin()->first < bin) {
    throw BinClosedError("bin " + std::to_string(open_bins_.begin()->first) +
                         " must be closed before bin " + std::to_string(bin));
  }
  last_closed_ = bin;
  ++bins_closed_;

  auto node = open_bins_.extract(bin);
  if (node.empty()) {
    return std::nullopt;
  }
  BinState& state = node.mapped();

  for (auto& [key, rec] : state) {
    if (rec.latest.withdrawn) {
      monitored_.entries.erase(key);
      continue;
    }
    auto [it, inserted] = monitored_.entries.try_emplace(key);
    BaselineEntry& e = it->second;
    if (inserted) {
      e.key = key;
      e.first_seen = rec.deviation.timestamp;
    }
    e.communities = std::move(rec.latest.communities);
    e.path = std::move(rec.latest.path);
    e.last_seen = std::max(e.last_seen, rec.deviation.timestamp);
  }

  if (state.size() < threshold_) {
    return std::nullopt;
  }
  Signal s;
  s.bin = bin;
  s.bin_start = bin * config_.bin_width;
  s.bin_end = s.bin_start + config_.bin_width;
  s.count = state.size();
  s.threshold = threshold_;
  s.deviations.reserve(state.size());
  for (auto& [key, rec] : state) {
    s.deviations.push_back(std::move(rec.deviation));
  }
  return s;
}

std::vector<Signal> Detector::advance_to(Timestamp now) {
  std::vector<Signal> out;
  while (!open_bins_.empty()) {
    BinIndex bin = open_bins_.begin()->first;
    Timestamp bin_end = (bin + 1) * config_.bin_width;
    if (now < bin_end + config_.reorder_slack) {
      break;
    }
    if (auto s = close_bin(bin)) {
      out.push_back(std::move(*s));
    }
  }
  return out;
}

std::vector<Signal> Detector::flush() {
  std::vector<Signal> out;
  while (!open_bins_.empty()) {
    if (auto s = close_bin(open_bins_.begin()->first)) {
      out.push_back(std::move(*s));
    }
  }
  return out;
}

}  // namespace bgpcomm
