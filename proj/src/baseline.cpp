#include "bgpcomm/baseline.hpp"

#include <string>

#include "bgpcomm/json_io.hpp"

namespace bgpcomm {

BaselineBuilder::BaselineBuilder(Timestamp window_start, Timestamp window_end,
                                 std::uint32_t min_observations)
    : start_(window_start), end_(window_end), min_observations_(min_observations) {
  if (window_end <= window_start) {
    throw std::invalid_argument("baseline window must have positive duration");
  }
  if (min_observations == 0) {
    throw std::invalid_argument("min_observations must be at least 1");
  }
}

void BaselineBuilder::observe(const BgpUpdate& u) {
  if (!in_window(u.timestamp)) {
    throw WindowError("update at " + std::to_string(u.timestamp) + " outside baseline window [" +
                      std::to_string(start_) + ", " + std::to_string(end_) + ")");
  }
  auto key = route_key(u);
  auto [it, inserted] = routes_.try_emplace(key);
  Track& t = it->second;
  if (inserted) {
    t.entry.key = std::move(key);
  }

  if (u.kind == UpdateKind::withdrawal) {
    if (!t.withdrawn_seen || u.timestamp >= t.last_withdraw) {
      t.last_withdraw = u.timestamp;
    }
    t.withdrawn_seen = true;
    return;
  }

  if (t.entry.observations == 0) {
    t.entry.communities = u.communities;
    t.entry.first_seen = u.timestamp;
    t.entry.last_seen = u.timestamp;
  } else {
    if (u.communities != t.entry.communities) {
      t.unstable = true;
    }
    t.entry.first_seen = std::min(t.entry.first_seen, u.timestamp);
    t.entry.last_seen = std::max(t.entry.last_seen, u.timestamp);
  }
  ++t.entry.observations;
  if (!t.announced || u.timestamp >= t.last_announce) {
    t.last_announce = u.timestamp;
    t.entry.path = u.path;
  }
  t.announced = true;
}

Baseline BaselineBuilder::finalize() const {
  Baseline b;
  b.window_start = start_;
  b.window_end = end_;
  for (const auto& [key, t] : routes_) {
    // A withdrawal that shares its timestamp with the latest announcement
    // loses the tie.
    bool withdrawn = t.withdrawn_seen && (!t.announced || t.last_withdraw > t.last_announce);
    if (t.unstable || withdrawn || t.entry.observations < min_observations_) {
      continue;
    }
    b.entries.emplace(key, t.entry);
  }
  return b;
}

void write_baseline(std::ostream& out, const Baseline& b) {
  for (const auto& [key, e] : b.entries) {
    nlohmann::json j = baseline_entry_to_json(e);
    j["window_start"] = b.window_start;
    j["window_end"] = b.window_end;
    out << j.dump() << '\n';
  }
}

Baseline read_baseline(std::istream& in) {
  Baseline b;
  std::string line;
  std::size_t lineno = 0;
  bool window_set = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    try {
      auto j = nlohmann::json::parse(line);
      BaselineEntry e = baseline_entry_from_json(j);
      Timestamp ws = j.at("window_start").get<Timestamp>();
      Timestamp we = j.at("window_end").get<Timestamp>();
      if (!window_set) {
        b.window_start = ws;
        b.window_end = we;
        window_set = true;
      } else if (ws != b.window_start || we != b.window_end) {
        throw ParseError("inconsistent baseline window");
      }
      RouteKey key = e.key;
      if (!b.entries.emplace(std::move(key), std::move(e)).second) {
        throw ParseError("duplicate baseline key");
      }
    } catch (const nlohmann::json::exception& ex) {
      throw ParseError("baseline line " + std::to_string(lineno) + ": " + ex.what());
    } catch (const std::exception& ex) {
      throw ParseError("baseline line " + std::to_string(lineno) + ": " + ex.what());
    }
  }
  return b;
}

}  // namespace bgpcomm
