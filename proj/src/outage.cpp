#include "bgpcomm/outage.hpp"

#include <algorithm>

namespace bgpcomm {

std::string_view to_string(OutageVerdict v) {
  return v == OutageVerdict::outage ? "outage" : "inconclusive";
}

std::vector<OutageReport> investigate_outage(const Signal& signal, const OutageConfig& config) {
  std::map<Geolocation, std::size_t> attributed;
  for (const auto& d : signal.deviations) {
    for (const auto& m : d.removed_meanings) {
      if (const auto* g = std::get_if<Geolocation>(&m)) {
        ++attributed[*g];
      }
    }
  }

  const std::size_t total = signal.deviations.size();
  std::vector<OutageReport> reports;
  reports.reserve(attributed.size());
  for (const auto& [loc, n] : attributed) {
    OutageReport r;
    r.bin = signal.bin;
    r.location = loc;
    r.attributed = n;
    r.total = total;
    r.concentration = total ? static_cast<double>(n) / static_cast<double>(total) : 0.0;
    r.verdict = (r.concentration >= config.concentration_min && n >= config.attributed_min)
                    ? OutageVerdict::outage
                    : OutageVerdict::inconclusive;
    reports.push_back(std::move(r));
  }
  std::stable_sort(reports.begin(), reports.end(), [](const auto& a, const auto& b) {
    return a.concentration > b.concentration;
  });
  return reports;
}

LocationSeries::LocationSeries(const Dictionary& dictionary, std::optional<Geolocation> filter,
                               std::int64_t bin_width)
    : dictionary_(&dictionary), filter_(std::move(filter)), bin_width_(bin_width) {
  if (bin_width <= 0) {
    throw std::invalid_argument("bin width must be positive");
  }
}

void LocationSeries::seed(const Baseline& baseline) {
  for (const auto& [key, e] : baseline.entries) {
    last_known_[key] = e.communities;
  }
}

bool LocationSeries::matches(const CommunitySet& cs) const {
  if (!filter_) {
    return true;
  }
  return dictionary_->annotate(cs).contains(Meaning{*filter_});
}

void LocationSeries::add(const BgpUpdate& u) {
  const BinIndex bin = bin_index(u.timestamp, bin_width_);
  auto [it, inserted] = bins_.try_emplace(bin);
  if (inserted) {
    it->second.bin = bin;
    it->second.bin_start = bin * bin_width_;
  }
  ActivityPoint& p = it->second;

  if (u.is_announcement()) {
    if (matches(u.communities)) {
      ++p.announcements;
    }
    if (filter_) {
      last_known_[route_key(u)] = u.communities;
    }
    return;
  }

  if (!filter_) {
    ++p.withdrawals;
    return;
  }
  auto known = last_known_.find(route_key(u));
  if (known != last_known_.end()) {
    if (matches(known->second)) {
      ++p.withdrawals;
    }
    last_known_.erase(known);
  }
}

std::vector<ActivityPoint> LocationSeries::points() const {
  std::vector<ActivityPoint> out;
  if (bins_.empty()) {
    return out;
  }
  const BinIndex first = bins_.begin()->first;
  const BinIndex last = bins_.rbegin()->first;
  out.reserve(static_cast<std::size_t>(last - first + 1));
  auto it = bins_.begin();
  for (BinIndex b = first; b <= last; ++b) {
    if (it != bins_.end() && it->first == b) {
      out.push_back(it->second);
      ++it;
    } else {
      out.push_back(ActivityPoint{b, b * bin_width_, 0, 0});
    }
  }
  return out;
}

std::vector<ActivityPoint> location_timeseries(std::span<const BgpUpdate> updates,
                                               const Dictionary& dictionary,
                                               const std::optional<Geolocation>& filter,
                                               std::int64_t bin_width) {
  LocationSeries series(dictionary, filter, bin_width);
  for (const auto& u : updates) {
    series.add(u);
  }
  return series.points();
}

}  // namespace bgpcomm
