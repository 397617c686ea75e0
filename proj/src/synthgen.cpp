#include "bgpcomm/synthgen.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace bgpcomm::synth {

namespace {

constexpr std::uint16_t kTransitBase = 64500;
constexpr std::size_t kTransitCount = 12;
constexpr std::uint16_t kPeerBase = 65000;
constexpr std::size_t kMaxPeers = 16;
constexpr Asn kOriginBase = 131072;
constexpr std::size_t kMaxRoutes = 65536;

constexpr std::array<std::string_view, 8> kCities{"Paris",  "London", "Frankfurt", "Amsterdam",
                                                  "Madrid", "Milan",  "Stockholm", "Vienna"};
constexpr std::array<std::string_view, 4> kIxps{"FranceIX", "AMS-IX", "DE-CIX", "LINX"};

constexpr std::array<std::string_view, 8> kMalformed{
    R"({"ts":1519862460,"peer_asn":65000,"peer_addr":"203.0.113.1","type":"A","prefix":"192.0.2.0/24","as_path":[6)",
    R"({"ts":1519862460,"peer_asn":65000,"peer_addr":"203.0.113.1","type":"A","prefix":"192.0.2.0/24","as_path":[65000,64501],"communities":["64501:100:1"]})",
    R"({"ts":1519862460,"peer_asn":65000,"peer_addr":"203.0.113.1","type":"A","as_path":[65000,64501]})",
    R"({"ts":1519862460,"peer_asn":65000,"peer_addr":"203.0.113.1","type":"A","prefix":"192.0.2.0/24","as_path":[65000,[64501,64502]]})",
    R"({"ts":1519862460,"peer_asn":65000,"peer_addr":"203.0.113.1","type":"W","prefix":"192.0.2.0/24","as_path":[65000]})",
    R"({"ts":1519862460,"peer_asn":65000,"peer_addr":"203.0.113.1","type":"A","prefix":"192.0.2.1/24","as_path":[65000]})",
    R"(this is not json)",
    R"({"ts":"soon","peer_asn":65000,"peer_addr":"203.0.113.1","type":"X","prefix":"192.0.2.0/24"})",
};

struct Location {
  GeoScope scope;
  std::string name;
};

struct Route {
  PeerId peer;
  Prefix prefix;
  AsPath path;
  CommunitySet communities;
  std::uint16_t transit = 0;
  std::size_t location = 0;
};

Prefix v4_prefix(std::uint8_t a, std::uint8_t b, std::uint8_t c, std::uint8_t d, unsigned len) {
  std::array<std::uint8_t, 16> bytes{};
  bytes[0] = a;
  bytes[1] = b;
  bytes[2] = c;
  bytes[3] = d;
  return Prefix(Family::v4, bytes, len);
}

std::optional<InjectionKind> parse_kind(std::string_view s) {
  if (s == "ixp-outage") return InjectionKind::ixp_outage;
  if (s == "blackhole-burst") return InjectionKind::blackhole_burst;
  if (s == "valley-violation") return InjectionKind::valley_violation;
  if (s == "noise-flaps") return InjectionKind::noise_flaps;
  return std::nullopt;
}

template <typename T>
void shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[draw_below(rng, i)]);
  }
}

struct Event {
  Timestamp ts;
  std::uint64_t seq;
  BgpUpdate update;
};

struct TruthDeviation {
  std::string kind;
  std::set<std::size_t> removed_locations;
};

}  // namespace

std::string_view to_string(InjectionKind k) {
  switch (k) {
    case InjectionKind::ixp_outage:
      return "ixp-outage";
    case InjectionKind::blackhole_burst:
      return "blackhole-burst";
    case InjectionKind::valley_violation:
      return "valley-violation";
    case InjectionKind::noise_flaps:
      return "noise-flaps";
  }
  return "unknown";
}

std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) {
    throw std::invalid_argument("draw_below: empty range");
  }
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

namespace {

void expect_keys(const Json& j, std::initializer_list<std::string_view> allowed, std::string_view where) {
  if (!j.is_object()) {
    throw ScenarioError(std::string(where) + " must be a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ScenarioError("unknown key '" + key + "' in " + std::string(where));
    }
  }
}

}  // namespace

Scenario scenario_from_json(const Json& j) {
  try {
    expect_keys(j,
                {"seed", "start_ts", "baseline_routes", "peers", "announce_repeats",
                 "background_updates", "malformed_lines", "detector", "outage", "blackhole_period",
                 "injections"},
                "scenario");
    Scenario sc;
    sc.seed = j.value("seed", sc.seed);
    sc.start_ts = j.value("start_ts", sc.start_ts);
    sc.baseline_routes = j.value("baseline_routes", sc.baseline_routes);
    sc.peers = j.value("peers", sc.peers);
    sc.announce_repeats = j.value("announce_repeats", sc.announce_repeats);
    sc.background_updates = j.value("background_updates", sc.background_updates);
    sc.malformed_lines = j.value("malformed_lines", sc.malformed_lines);
    if (j.contains("detector")) {
      const Json& d = j["detector"];
      expect_keys(d, {"bin_width", "init_window", "min_observations", "threshold"}, "detector");
      sc.bin_width = d.value("bin_width", sc.bin_width);
      sc.init_window = d.value("init_window", sc.init_window);
      sc.min_observations = d.value("min_observations", sc.min_observations);
      sc.threshold = d.value("threshold", sc.threshold);
    }
    if (j.contains("outage")) {
      const Json& o = j["outage"];
      expect_keys(o, {"concentration_min", "attributed_min"}, "outage");
      sc.concentration_min = o.value("concentration_min", sc.concentration_min);
      sc.attributed_min = o.value("attributed_min", sc.attributed_min);
    }
    sc.blackhole_period = j.value("blackhole_period", sc.blackhole_period);
    for (const auto& ij : j.value("injections", Json::array())) {
      Injection inj;
      expect_keys(ij, {"kind", "at", "routes", "location", "tagged", "untagged", "spread", "count"},
                  "injection");
      auto kind = parse_kind(ij.at("kind").get<std::string>());
      if (!kind) {
        throw ScenarioError("unknown injection kind '" + ij.at("kind").get<std::string>() + "'");
      }
      inj.kind = *kind;
      inj.at = ij.at("at").get<Timestamp>();
      inj.routes = ij.value("routes", inj.routes);
      inj.location = ij.value("location", inj.location);
      inj.tagged = ij.value("tagged", inj.tagged);
      inj.untagged = ij.value("untagged", inj.untagged);
      inj.spread = ij.value("spread", inj.spread);
      inj.count = ij.value("count", inj.count);
      sc.injections.push_back(std::move(inj));
    }
    return sc;
  } catch (const Json::exception& e) {
    throw ScenarioError(std::string("invalid scenario: ") + e.what());
  }
}

Json scenario_to_json(const Scenario& sc) {
  Json j;
  j["seed"] = sc.seed;
  j["start_ts"] = sc.start_ts;
  j["baseline_routes"] = sc.baseline_routes;
  j["peers"] = sc.peers;
  j["announce_repeats"] = sc.announce_repeats;
  j["background_updates"] = sc.background_updates;
  j["malformed_lines"] = sc.malformed_lines;
  j["detector"] = {{"bin_width", sc.bin_width},
                   {"init_window", sc.init_window},
                   {"min_observations", sc.min_observations},
                   {"threshold", sc.threshold}};
  j["outage"] = {{"concentration_min", sc.concentration_min},
                 {"attributed_min", sc.attributed_min}};
  j["blackhole_period"] = sc.blackhole_period;
  Json injs = Json::array();
  for (const auto& inj : sc.injections) {
    Json ij;
    ij["kind"] = std::string(to_string(inj.kind));
    ij["at"] = inj.at;
    switch (inj.kind) {
      case InjectionKind::ixp_outage:
        ij["routes"] = inj.routes;
        ij["location"] = inj.location;
        break;
      case InjectionKind::noise_flaps:
        ij["routes"] = inj.routes;
        break;
      case InjectionKind::blackhole_burst:
        ij["tagged"] = inj.tagged;
        ij["untagged"] = inj.untagged;
        ij["spread"] = inj.spread;
        break;
      case InjectionKind::valley_violation:
        ij["count"] = inj.count;
        break;
    }
    injs.push_back(std::move(ij));
  }
  j["injections"] = std::move(injs);
  return j;
}

namespace {

void validate(const Scenario& sc) {
  if (sc.baseline_routes == 0 || sc.baseline_routes > kMaxRoutes) {
    throw ScenarioError("baseline_routes must be in [1, 65536]");
  }
  if (sc.peers == 0 || sc.peers > kMaxPeers) {
    throw ScenarioError("peers must be in [1, 16]");
  }
  if (sc.bin_width <= 0 || sc.init_window <= 0 || sc.blackhole_period <= 0) {
    throw ScenarioError("durations must be positive");
  }
  if (sc.min_observations == 0 || sc.announce_repeats < sc.min_observations) {
    throw ScenarioError("announce_repeats must be >= min_observations >= 1");
  }
  if (sc.threshold == 0) {
    throw ScenarioError("threshold must be at least 1");
  }
  std::size_t withdrawn = 0;
  std::size_t valley_total = 0;
  std::size_t untagged_total = 0;
  for (const auto& inj : sc.injections) {
    if (inj.at < sc.start_ts + sc.init_window) {
      throw ScenarioError("injection '" + std::string(to_string(inj.kind)) +
                          "' is scheduled inside the initialization window");
    }
    switch (inj.kind) {
      case InjectionKind::ixp_outage:
        if (inj.location.empty()) {
          throw ScenarioError("ixp-outage requires a location");
        }
        [[fallthrough]];
      case InjectionKind::noise_flaps:
        if (inj.routes == 0) {
          throw ScenarioError(std::string(to_string(inj.kind)) + " requires routes > 0");
        }
        withdrawn += inj.routes;
        break;
      case InjectionKind::blackhole_burst:
        if (inj.spread < 0) {
          throw ScenarioError("blackhole-burst spread must be non-negative");
        }
        untagged_total += inj.untagged;
        break;
      case InjectionKind::valley_violation:
        valley_total += inj.count;
        break;
    }
  }
  if (withdrawn > sc.baseline_routes) {
    throw ScenarioError("injections touch " + std::to_string(withdrawn) +
                        " routes but the baseline only has " + std::to_string(sc.baseline_routes));
  }
  if (valley_total > 4096) {
    throw ScenarioError("at most 4096 valley violations per scenario");
  }
  if (untagged_total > (1u << 22)) {
    throw ScenarioError("too many untagged blackhole-burst announcements");
  }
}

}  // namespace

GeneratedScenario generate(const Scenario& sc) {
  validate(sc);
  std::mt19937_64 rng(sc.seed);

  // Locations: background cities and IXPs, minus any outage targets.
  std::vector<Location> locations;
  std::set<std::string> targets;
  for (const auto& inj : sc.injections) {
    if (inj.kind == InjectionKind::ixp_outage) {
      targets.insert(inj.location);
    }
  }
  std::vector<std::size_t> background_locations;
  for (auto c : kCities) {
    locations.push_back({GeoScope::city, std::string(c)});
  }
  for (auto x : kIxps) {
    locations.push_back({GeoScope::ixp, std::string(x)});
  }
  for (const auto& t : targets) {
    bool known = std::any_of(locations.begin(), locations.end(),
                             [&](const Location& l) { return l.name == t; });
    if (!known) {
      locations.push_back({GeoScope::ixp, t});
    }
  }
  std::map<std::string, std::size_t> location_index;
  for (std::size_t i = 0; i < locations.size(); ++i) {
    location_index[locations[i].name] = i;
    if (!targets.contains(locations[i].name)) {
      background_locations.push_back(i);
    }
  }

  // Dictionary fixture.
  std::vector<DictionaryEntry> dict_entries;
  auto add_relationships = [&](std::uint16_t asn) {
    dict_entries.push_back({asn, ValueSpec::exact(kCustomerValue),
                            Relationship{RelationshipRole::customer}, "learned from customer"});
    dict_entries.push_back({asn, ValueSpec::exact(kPeerValue), Relationship{RelationshipRole::peer},
                            "learned from peer"});
    dict_entries.push_back({asn, ValueSpec::exact(kProviderValue),
                            Relationship{RelationshipRole::provider}, "learned from provider"});
  };
  for (std::size_t p = 0; p < sc.peers; ++p) {
    add_relationships(static_cast<std::uint16_t>(kPeerBase + p));
  }
  for (std::size_t t = 0; t < kTransitCount; ++t) {
    auto asn = static_cast<std::uint16_t>(kTransitBase + t);
    add_relationships(asn);
    for (std::size_t l = 0; l < locations.size(); ++l) {
      dict_entries.push_back({asn, ValueSpec::exact(static_cast<std::uint16_t>(kLocationBase + l)),
                              Geolocation{locations[l].scope, locations[l].name},
                              "ingress location"});
    }
    dict_entries.push_back({asn, ValueSpec{50, 59}, RoutingAction{ActionKind::local_preference},
                            "set local preference"});
    dict_entries.push_back({asn, ValueSpec{71, 73}, RoutingAction{ActionKind::prepend},
                            "prepend toward peers"});
  }
  dict_entries.push_back({kBlackholeAsn, ValueSpec::exact(kBlackholeValue), Blackhole{},
                          "remotely triggered blackhole"});
  Dictionary dictionary(dict_entries);

  std::vector<PeerId> peers;
  for (std::size_t p = 0; p < sc.peers; ++p) {
    peers.push_back(PeerId{static_cast<Asn>(kPeerBase + p), "203.0.113." + std::to_string(p + 1)});
  }

  // Route allocation to injections happens before the routes are built so
  // that outage routes carry their IXP tag from the start.
  std::vector<std::size_t> perm(sc.baseline_routes);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  shuffle(perm, rng);
  std::size_t cursor = 0;
  std::vector<std::vector<std::size_t>> allocated(sc.injections.size());
  std::vector<std::optional<std::size_t>> forced_location(sc.baseline_routes);
  for (std::size_t i = 0; i < sc.injections.size(); ++i) {
    const auto& inj = sc.injections[i];
    if (inj.kind != InjectionKind::ixp_outage && inj.kind != InjectionKind::noise_flaps) {
      continue;
    }
    for (std::size_t k = 0; k < inj.routes; ++k) {
      std::size_t r = perm[cursor++];
      allocated[i].push_back(r);
      if (inj.kind == InjectionKind::ixp_outage) {
        forced_location[r] = location_index.at(inj.location);
      }
    }
  }
  std::vector<std::size_t> untouched(perm.begin() + static_cast<std::ptrdiff_t>(cursor), perm.end());
  std::sort(untouched.begin(), untouched.end());

  if (background_locations.empty()) {
    throw ScenarioError("no background locations left");
  }
  std::vector<Route> routes(sc.baseline_routes);
  for (std::size_t r = 0; r < sc.baseline_routes; ++r) {
    Route& route = routes[r];
    route.peer = peers[r % peers.size()];
    route.prefix = v4_prefix(10, static_cast<std::uint8_t>(r >> 8), static_cast<std::uint8_t>(r & 0xFF), 0, 24);
    route.transit = static_cast<std::uint16_t>(kTransitBase + draw_below(rng, kTransitCount));
    route.location = forced_location[r]
                         ? *forced_location[r]
                         : background_locations[draw_below(rng, background_locations.size())];
    route.path.hops = {route.peer.asn, route.transit, kOriginBase + static_cast<Asn>(r)};
    route.communities = {Community{route.transit, kCustomerValue},
                         Community{route.transit, static_cast<std::uint16_t>(kLocationBase + route.location)}};
  }

  std::vector<Event> events;
  std::uint64_t seq = 0;
  auto announce = [&](Timestamp ts, const PeerId& peer, const Prefix& prefix, const AsPath& path,
                      const CommunitySet& cs) {
    BgpUpdate u;
    u.timestamp = ts;
    u.peer = peer;
    u.kind = UpdateKind::announcement;
    u.prefix = prefix;
    u.path = path;
    u.communities = cs;
    events.push_back({ts, seq++, std::move(u)});
  };
  auto withdraw = [&](Timestamp ts, const Route& route) {
    BgpUpdate u;
    u.timestamp = ts;
    u.peer = route.peer;
    u.kind = UpdateKind::withdrawal;
    u.prefix = route.prefix;
    events.push_back({ts, seq++, std::move(u)});
  };

  // Initialization phase; the first record opens the window.
  const Timestamp window_end = sc.start_ts + sc.init_window;
  for (std::size_t r = 0; r < sc.baseline_routes; ++r) {
    for (std::uint32_t k = 0; k < sc.announce_repeats; ++k) {
      Timestamp ts = (r == 0 && k == 0)
                         ? sc.start_ts
                         : sc.start_ts + static_cast<Timestamp>(draw_below(
                                             rng, static_cast<std::uint64_t>(sc.init_window)));
      announce(ts, routes[r].peer, routes[r].prefix, routes[r].path, routes[r].communities);
    }
  }

  // Ground-truth bookkeeping.
  std::map<BinIndex, std::map<RouteKey, TruthDeviation>> deviations;
  Json bh_events = Json::array();
  struct BhRecord {
    Timestamp ts;
    Prefix prefix;
  };
  std::vector<BhRecord> bh_records;
  Json valley_verdicts = Json::array();
  std::size_t valley_prefix = 0;
  std::size_t untagged_prefix = 0;
  std::size_t tagged_prefix = 0;
  Timestamp horizon = window_end;

  for (std::size_t i = 0; i < sc.injections.size(); ++i) {
    const auto& inj = sc.injections[i];
    const BinIndex bin = bin_index(inj.at, sc.bin_width);
    switch (inj.kind) {
      case InjectionKind::ixp_outage:
        for (std::size_t r : allocated[i]) {
          withdraw(inj.at, routes[r]);
          deviations[bin][RouteKey{routes[r].peer, routes[r].prefix}] =
              TruthDeviation{"withdrawal", {routes[r].location}};
        }
        horizon = std::max(horizon, inj.at);
        break;
      case InjectionKind::noise_flaps: {
        const Timestamp bin_end = (bin + 1) * sc.bin_width;
        for (std::size_t r : allocated[i]) {
          withdraw(inj.at, routes[r]);
          Timestamp back = inj.at + static_cast<Timestamp>(
                                        draw_below(rng, static_cast<std::uint64_t>(bin_end - inj.at)));
          announce(back, routes[r].peer, routes[r].prefix, routes[r].path, routes[r].communities);
          deviations[bin][RouteKey{routes[r].peer, routes[r].prefix}] =
              TruthDeviation{"withdrawal", {routes[r].location}};
        }
        horizon = std::max(horizon, bin_end - 1);
        break;
      }
      case InjectionKind::blackhole_burst: {
        if (inj.tagged > 0 && untouched.empty()) {
          throw ScenarioError("blackhole-burst needs at least one untouched baseline route");
        }
        auto when = [&]() {
          return inj.at + (inj.spread > 0 ? static_cast<Timestamp>(draw_below(
                                                rng, static_cast<std::uint64_t>(inj.spread)))
                                          : 0);
        };
        for (std::size_t k = 0; k < inj.tagged; ++k) {
          const std::size_t j = tagged_prefix++;
          const Route& cover = routes[untouched[j % untouched.size()]];
          const std::size_t host = 1 + j / untouched.size();
          if (host > 254) {
            throw ScenarioError("too many tagged blackhole prefixes for the baseline size");
          }
          const auto& net = cover.prefix.network();
          Prefix p = v4_prefix(net[0], net[1], net[2], static_cast<std::uint8_t>(host), 32);
          Timestamp ts = when();
          CommunitySet cs{Community{kBlackholeAsn, kBlackholeValue},
                          Community{cover.transit, kCustomerValue}};
          announce(ts, cover.peer, p, cover.path, cs);
          bh_records.push_back({ts, p});
          bh_events.push_back({{"ts", ts},
                               {"prefix", p.to_string()},
                               {"prefix_length", 32},
                               {"requester_asn", kBlackholeAsn},
                               {"peer_asn", cover.peer.asn},
                               {"peer_addr", cover.peer.addr},
                               {"covered_by_baseline", true}});
          horizon = std::max(horizon, ts);
        }
        for (std::size_t k = 0; k < inj.untagged; ++k) {
          const std::size_t j = untagged_prefix++;
          Prefix p = v4_prefix(100, static_cast<std::uint8_t>(64 + (j >> 16)),
                               static_cast<std::uint8_t>((j >> 8) & 0xFF),
                               static_cast<std::uint8_t>(j & 0xFF), 32);
          const PeerId& peer = peers[draw_below(rng, peers.size())];
          auto transit = static_cast<std::uint16_t>(kTransitBase + draw_below(rng, kTransitCount));
          std::size_t loc = background_locations[draw_below(rng, background_locations.size())];
          AsPath path{{peer.asn, transit, kOriginBase + static_cast<Asn>(kMaxRoutes + j)}};
          CommunitySet cs{Community{transit, kCustomerValue},
                          Community{transit, static_cast<std::uint16_t>(kLocationBase + loc)}};
          Timestamp ts = when();
          announce(ts, peer, p, path, cs);
          horizon = std::max(horizon, ts);
        }
        break;
      }
      case InjectionKind::valley_violation:
        for (std::size_t k = 0; k < inj.count; ++k) {
          const std::size_t j = valley_prefix++;
          Prefix p = v4_prefix(172, static_cast<std::uint8_t>(16 + (j >> 8)),
                               static_cast<std::uint8_t>(j & 0xFF), 0, 24);
          const PeerId& peer = peers[j % peers.size()];
          auto transit = static_cast<std::uint16_t>(kTransitBase + draw_below(rng, kTransitCount));
          AsPath path{{peer.asn, transit, kOriginBase + static_cast<Asn>(2 * kMaxRoutes + j)}};
          // Origin->collector labels [provider, customer]: the transit
          // learned the route from a provider and handed it to a provider.
          CommunitySet cs{Community{static_cast<std::uint16_t>(peer.asn), kCustomerValue},
                          Community{transit, kProviderValue}};
          Timestamp ts = inj.at + static_cast<Timestamp>(k);
          announce(ts, peer, p, path, cs);
          valley_verdicts.push_back({{"ts", ts},
                                     {"prefix", p.to_string()},
                                     {"peer_asn", peer.asn},
                                     {"peer_addr", peer.addr},
                                     {"witness", Json::array({1, 0})}});
          horizon = std::max(horizon, ts);
        }
        break;
    }
  }

  // Identical re-announcements of untouched routes; never deviations.
  if (sc.background_updates > 0 && !untouched.empty()) {
    const Timestamp span = std::max<Timestamp>(horizon - window_end + 1, 1);
    for (std::size_t k = 0; k < sc.background_updates; ++k) {
      const Route& route = routes[untouched[draw_below(rng, untouched.size())]];
      Timestamp ts = window_end + static_cast<Timestamp>(draw_below(rng, static_cast<std::uint64_t>(span)));
      announce(ts, route.peer, route.prefix, route.path, route.communities);
    }
  }

  std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    return a.ts != b.ts ? a.ts < b.ts : a.seq < b.seq;
  });

  std::vector<std::string> lines;
  lines.reserve(events.size() + sc.malformed_lines);
  std::size_t announcements = 0;
  std::size_t withdrawals = 0;
  for (const auto& e : events) {
    lines.push_back(update_to_json(e.update).dump());
    if (e.update.is_announcement()) {
      ++announcements;
    } else {
      ++withdrawals;
    }
  }
  for (std::size_t k = 0; k < sc.malformed_lines; ++k) {
    auto pos = static_cast<std::ptrdiff_t>(draw_below(rng, lines.size() + 1));
    lines.insert(lines.begin() + pos, std::string(kMalformed[k % kMalformed.size()]));
  }

  GeneratedScenario out;
  {
    std::ostringstream os;
    for (const auto& l : lines) {
      os << l << '\n';
    }
    out.updates = os.str();
  }
  {
    std::ostringstream os;
    write_dictionary(os, dictionary);
    out.dictionary = os.str();
  }

  Json truth;
  truth["scenario"] = scenario_to_json(sc);
  truth["records"] = lines.size();
  truth["announcements"] = announcements;
  truth["withdrawals"] = withdrawals;
  truth["malformed_lines"] = sc.malformed_lines;
  truth["baseline"] = {{"window_start", sc.start_ts},
                       {"window_end", window_end},
                       {"size", sc.baseline_routes}};

  Json signals = Json::array();
  Json devs = Json::array();
  Json outages = Json::array();
  for (const auto& [bin, keyed] : deviations) {
    for (const auto& [key, d] : keyed) {
      devs.push_back({{"bin", bin},
                      {"peer_asn", key.peer.asn},
                      {"peer_addr", key.peer.addr},
                      {"prefix", key.prefix.to_string()},
                      {"kind", d.kind}});
    }
    if (keyed.size() < sc.threshold) {
      continue;
    }
    signals.push_back({{"bin", bin},
                       {"bin_start", bin * sc.bin_width},
                       {"bin_end", (bin + 1) * sc.bin_width},
                       {"count", keyed.size()}});
    std::map<std::size_t, std::size_t> attributed;
    for (const auto& [key, d] : keyed) {
      for (std::size_t loc : d.removed_locations) {
        ++attributed[loc];
      }
    }
    for (const auto& [loc, n] : attributed) {
      double conc = static_cast<double>(n) / static_cast<double>(keyed.size());
      if (conc >= sc.concentration_min && n >= sc.attributed_min) {
        outages.push_back({{"bin", bin},
                           {"scope", std::string(to_string(locations[loc].scope))},
                           {"location", locations[loc].name},
                           {"attributed", n},
                           {"total", keyed.size()},
                           {"concentration", conc}});
      }
    }
  }
  truth["signals"] = std::move(signals);
  truth["deviations"] = std::move(devs);
  truth["outage_verdicts"] = std::move(outages);

  std::sort(bh_records.begin(), bh_records.end(),
            [](const BhRecord& a, const BhRecord& b) { return a.ts < b.ts; });
  truth["blackhole_events"] = std::move(bh_events);
  Json series = Json::array();
  if (!bh_records.empty()) {
    std::map<std::int64_t, std::pair<std::set<Prefix>, std::size_t>> per;
    for (const auto& r : bh_records) {
      auto& slot = per[bin_index(r.ts, sc.blackhole_period)];
      slot.first.insert(r.prefix);
      ++slot.second;
    }
    for (auto p = per.begin()->first; p <= per.rbegin()->first; ++p) {
      auto it = per.find(p);
      series.push_back({{"period_start", p * sc.blackhole_period},
                        {"distinct_prefixes", it == per.end() ? 0 : it->second.first.size()},
                        {"events", it == per.end() ? 0 : it->second.second}});
    }
  }
  truth["blackhole_series"] = std::move(series);
  truth["blackhole_prefix_lengths"] = bh_records.empty() ? Json::object()
                                                         : Json{{"32", bh_records.size()}};

  truth["valley"] = {{"paths_checked", announcements},
                     {"labeled_paths", announcements},
                     {"violating_paths", valley_verdicts.size()},
                     {"verdicts", std::move(valley_verdicts)}};
  out.ground_truth = std::move(truth);
  return out;
}

void write_scenario(const GeneratedScenario& g, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](const char* name, const std::string& content) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) {
      throw std::runtime_error("cannot write " + (dir / name).string());
    }
    f << content;
  };
  write("updates.ndjson", g.updates);
  write("dictionary.csv", g.dictionary);
  write("ground_truth.json", g.ground_truth.dump(2) + "\n");
}

}  // namespace bgpcomm::synth
