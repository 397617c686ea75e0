// Independent reference implementations used by the unit and acceptance
// suites. None of these call into the code they check.
#pragma once

#include <bitset>
#include <cstdio>
#include <cstdint>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bgpcomm/core.hpp"
#include "bgpcomm/dictionary.hpp"
#include "bgpcomm/valleyfree.hpp"

namespace oracle {

using bgpcomm::EdgeRole;

// Prefix containment from the raw address bits.
inline std::string bits_of(const bgpcomm::Prefix& p) {
  std::string s;
  for (std::uint8_t byte : p.network()) {
    s += std::bitset<8>(byte).to_string();
  }
  return s.substr(0, p.length());
}

inline bool covers(const bgpcomm::Prefix& a, const bgpcomm::Prefix& b) {
  if (a.family() != b.family() || a.length() > b.length()) {
    return false;
  }
  return bits_of(b).compare(0, a.length(), bits_of(a)) == 0;
}

// Valley-free by brute force: try every completion of the unknowns
// against customer* peer? provider*.
inline char letter(EdgeRole r) {
  switch (r) {
    case EdgeRole::customer: return 'c';
    case EdgeRole::peer: return 'p';
    case EdgeRole::provider: return 'v';
    default: return '?';
  }
}

inline bool completes_valley_free(const std::vector<EdgeRole>& seq) {
  static const std::regex pattern("c*p?v*");
  std::vector<std::size_t> holes;
  std::string word;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    word += letter(seq[i]);
    if (seq[i] == EdgeRole::unknown) holes.push_back(i);
  }
  std::size_t combos = 1;
  for (std::size_t i = 0; i < holes.size(); ++i) combos *= 3;
  for (std::size_t n = 0; n < combos; ++n) {
    std::size_t x = n;
    for (auto h : holes) {
      word[h] = "cpv"[x % 3];
      x /= 3;
    }
    if (std::regex_match(word, pattern)) return true;
  }
  return false;
}

/// Lexicographically smallest (i, j), i < j, with seq[i] going up or flat
/// and seq[j] going down or flat.
inline std::optional<std::pair<std::size_t, std::size_t>> first_witness(
    const std::vector<EdgeRole>& seq) {
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (seq[i] != EdgeRole::peer && seq[i] != EdgeRole::provider) continue;
    for (std::size_t j = i + 1; j < seq.size(); ++j) {
      if (seq[j] == EdgeRole::customer || seq[j] == EdgeRole::peer) return std::make_pair(i, j);
    }
  }
  return std::nullopt;
}

inline std::vector<EdgeRole> decode_sequence(std::size_t code, std::size_t length) {
  std::vector<EdgeRole> seq(length);
  for (std::size_t i = 0; i < length; ++i) {
    seq[i] = static_cast<EdgeRole>(code % 4);
    code /= 4;
  }
  return seq;
}

// Dictionary lookup as a linear scan with the exact-over-range rule.
inline bgpcomm::MeaningSet linear_lookup(const std::vector<bgpcomm::DictionaryEntry>& entries,
                                         bgpcomm::Community c) {
  std::map<std::size_t, bool> exact_in_category;
  for (const auto& e : entries) {
    if (e.asn == c.asn && e.spec.lo == c.value && e.spec.hi == c.value) {
      exact_in_category[e.meaning.index()] = true;
    }
  }
  bgpcomm::MeaningSet out;
  for (const auto& e : entries) {
    if (e.asn != c.asn || c.value < e.spec.lo || c.value > e.spec.hi) continue;
    bool exact = e.spec.lo == e.spec.hi;
    if (!exact && exact_in_category.count(e.meaning.index())) continue;
    out.insert(e.meaning);
  }
  return out;
}

// Replays a generated NDJSON stream using only the JSON library and the
// generator's documented conventions, reproducing the ground-truth tallies.
struct ScanTotals {
  std::size_t records = 0;
  std::size_t malformed = 0;
  std::size_t announcements = 0;
  std::size_t withdrawals = 0;
  std::size_t baseline_size = 0;
  /// bin -> distinct deviating keys
  std::map<std::int64_t, std::size_t> deviating_per_bin;
  /// tagged blackhole announcements, per day start
  std::map<std::int64_t, std::size_t> blackhole_per_period;
  std::set<std::string> blackhole_prefixes;
  std::size_t blackhole_events = 0;
  std::size_t valley_violations = 0;
};

// IPv4 CIDR with no host bits set. The generator emits no IPv6.
inline bool canonical_v4(const std::string& s) {
  unsigned a, b, c, d, len;
  char tail;
  if (std::sscanf(s.c_str(), "%u.%u.%u.%u/%u%c", &a, &b, &c, &d, &len, &tail) != 5) return false;
  if (a > 255 || b > 255 || c > 255 || d > 255 || len > 32) return false;
  std::uint32_t addr = (a << 24) | (b << 16) | (c << 8) | d;
  std::uint32_t host = len == 32 ? 0 : (0xffffffffu >> len);
  return (addr & host) == 0;
}

inline bool well_formed(const nlohmann::json& j) {
  if (!j.is_object()) return false;
  for (const char* k : {"ts", "peer_asn", "peer_addr", "type", "prefix"}) {
    if (!j.contains(k)) return false;
  }
  if (!j["ts"].is_number_integer() || !j["peer_asn"].is_number_integer()) return false;
  if (!j["type"].is_string() || !j["prefix"].is_string() || !j["peer_addr"].is_string()) return false;
  if (!canonical_v4(j["prefix"])) return false;
  std::string type = j["type"];
  if (type == "A") {
    if (!j.contains("as_path") || !j["as_path"].is_array() || j["as_path"].empty()) return false;
    for (const auto& h : j["as_path"]) {
      if (!h.is_number_unsigned()) return false;
    }
    if (j.contains("communities")) {
      if (!j["communities"].is_array()) return false;
      for (const auto& c : j["communities"]) {
        if (!c.is_string()) return false;
        std::string s = c;
        auto colon = s.find(':');
        if (colon == std::string::npos || s.find(':', colon + 1) != std::string::npos) return false;
        try {
          if (std::stoul(s.substr(0, colon)) > 65535 || std::stoul(s.substr(colon + 1)) > 65535)
            return false;
        } catch (...) {
          return false;
        }
      }
    }
    return true;
  }
  return type == "W" && !j.contains("as_path");
}

inline int relationship_rank(const std::string& value) {
  if (value == "100") return 0;  // customer
  if (value == "200") return 1;  // peer
  if (value == "300") return 2;  // provider
  return -1;
}

inline ScanTotals scan_generated(const std::string& ndjson, std::int64_t init_window,
                                 std::int64_t bin_width, std::int64_t period,
                                 std::uint32_t min_observations) {
  ScanTotals t;
  std::istringstream in(ndjson);
  std::string line;

  struct Seen {
    std::string communities;
    bool stable = true;
    bool withdrawn = false;
    std::uint32_t count = 0;
  };
  std::map<std::string, Seen> window;
  std::map<std::string, std::string> state;  // key -> communities ("" = withdrawn)
  std::optional<std::int64_t> start;
  // Open bin: deviating keys and their latest state ("<w>" = withdrawn).
  std::optional<std::int64_t> open_bin;
  std::set<std::string> deviating;
  std::map<std::string, std::string> latest;
  bool finalized = false;

  auto close_open_bin = [&] {
    if (!open_bin) return;
    t.deviating_per_bin[*open_bin] = deviating.size();
    for (const auto& k : deviating) {
      if (latest[k] == "<w>") {
        state.erase(k);
      } else {
        state[k] = latest[k];
      }
    }
    deviating.clear();
    latest.clear();
    open_bin.reset();
  };

  auto finalize = [&] {
    for (auto& [k, s] : window) {
      if (s.stable && !s.withdrawn && s.count >= min_observations) {
        state[k] = s.communities;
      }
    }
    t.baseline_size = state.size();
    finalized = true;
  };

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++t.records;
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !well_formed(j)) {
      ++t.malformed;
      continue;
    }
    std::int64_t ts = j["ts"];
    bool ann = j["type"] == "A";
    (ann ? t.announcements : t.withdrawals)++;
    std::string key = std::to_string(j["peer_asn"].get<std::int64_t>()) + "|" +
                      j["peer_addr"].get<std::string>() + "|" + j["prefix"].get<std::string>();
    std::vector<std::string> comms;
    if (ann && j.contains("communities")) {
      for (const auto& c : j["communities"]) comms.push_back(c);
    }
    std::set<std::string> sorted(comms.begin(), comms.end());
    std::string cs;
    for (const auto& c : sorted) cs += c + ",";

    if (!start) start = ts;
    if (ts < *start + init_window) {
      auto& s = window[key];
      if (ann) {
        if (s.count > 0 && s.communities != cs) s.stable = false;
        s.communities = cs;
        s.withdrawn = false;
        ++s.count;
      } else {
        s.withdrawn = true;
      }
    } else {
      if (!finalized) finalize();
      std::int64_t bin = ts / bin_width;  // timestamps are positive and ordered
      if (open_bin && *open_bin != bin) close_open_bin();
      auto it = state.find(key);
      if (it != state.end()) {
        if (!open_bin) open_bin = bin;
        std::string ref = latest.count(key) ? latest[key] : it->second;
        std::string now = ann ? cs : std::string("<w>");
        if (ref != now) {
          deviating.insert(key);
          latest[key] = now;
        }
      }
    }

    if (ann) {
      // Blackhole events: the generated dictionary's only blackhole entry.
      if (sorted.count("64501:666")) {
        ++t.blackhole_events;
        t.blackhole_per_period[(ts / period) * period]++;
        t.blackhole_prefixes.insert(j["prefix"].get<std::string>());
      }
      // Valley: relationship values set by on-path ASes, origin side first.
      std::vector<std::uint64_t> path;
      for (const auto& h : j["as_path"]) {
        std::uint64_t a = h;
        if (path.empty() || path.back() != a) path.push_back(a);
      }
      std::vector<int> roles(path.size() > 1 ? path.size() - 1 : 0, -1);
      for (const auto& c : sorted) {
        auto colon = c.find(':');
        std::uint64_t asn = std::stoull(c.substr(0, colon));
        int rank = relationship_rank(c.substr(colon + 1));
        if (rank < 0) continue;
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
          if (path[i] == asn) {
            roles[i] = rank;
            break;
          }
        }
      }
      // origin -> collector order: reverse positions.
      bool violating = false;
      bool seen_flat_or_up = false;
      for (auto r = roles.rbegin(); r != roles.rend(); ++r) {
        if (*r < 0) continue;
        if (seen_flat_or_up && (*r == 0 || *r == 1)) violating = true;
        if (*r == 1 || *r == 2) seen_flat_or_up = true;
      }
      if (violating) ++t.valley_violations;
    }
  }
  if (!finalized) finalize();

  close_open_bin();
  // Bins with no deviating key are not reported.
  std::erase_if(t.deviating_per_bin, [](const auto& kv) { return kv.second == 0; });
  return t;
}

}  // namespace oracle
