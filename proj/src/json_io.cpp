#include "bgpcomm/json_io.hpp"

namespace bgpcomm {

Json communities_to_json(const CommunitySet& cs) {
  Json arr = Json::array();
  for (const auto& c : cs) {
    arr.push_back(format_community(c));
  }
  return arr;
}

Json path_to_json(const AsPath& p) {
  Json arr = Json::array();
  for (Asn a : p.hops) {
    arr.push_back(a);
  }
  return arr;
}

Json meaning_to_json(const Meaning& m) {
  Json j;
  j["category"] = std::string(to_string(category_of(m)));
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Geolocation>) {
          j["scope"] = std::string(to_string(v.scope));
          j["location"] = v.location;
        } else if constexpr (std::is_same_v<T, Relationship>) {
          j["role"] = std::string(to_string(v.role));
        } else if constexpr (std::is_same_v<T, RoutingAction>) {
          j["action"] = std::string(to_string(v.action));
        }
      },
      m);
  return j;
}

Json meanings_to_json(const MeaningSet& ms) {
  Json arr = Json::array();
  for (const auto& m : ms) {
    arr.push_back(meaning_to_json(m));
  }
  return arr;
}

Meaning meaning_from_json(const Json& j) {
  switch (parse_category(j.at("category").get<std::string>())) {
    case Category::geolocation:
      return Geolocation{parse_geo_scope(j.at("scope").get<std::string>()),
                         j.at("location").get<std::string>()};
    case Category::relationship:
      return Relationship{parse_relationship_role(j.at("role").get<std::string>())};
    case Category::blackhole:
      return Blackhole{};
    case Category::action:
      return RoutingAction{parse_action_kind(j.at("action").get<std::string>())};
  }
  throw ParseError("unreachable meaning category");
}

Json update_to_json(const BgpUpdate& u) {
  Json j;
  j["ts"] = u.timestamp;
  j["peer_asn"] = u.peer.asn;
  j["peer_addr"] = u.peer.addr;
  j["type"] = u.is_announcement() ? "A" : "W";
  j["prefix"] = u.prefix.to_string();
  if (u.is_announcement()) {
    j["as_path"] = path_to_json(u.path);
    j["communities"] = communities_to_json(u.communities);
  }
  return j;
}

Json baseline_entry_to_json(const BaselineEntry& e) {
  Json j;
  j["peer_asn"] = e.key.peer.asn;
  j["peer_addr"] = e.key.peer.addr;
  j["prefix"] = e.key.prefix.to_string();
  j["communities"] = communities_to_json(e.communities);
  j["as_path"] = path_to_json(e.path);
  j["observations"] = e.observations;
  j["first_seen"] = e.first_seen;
  j["last_seen"] = e.last_seen;
  return j;
}

BaselineEntry baseline_entry_from_json(const Json& j) {
  BaselineEntry e;
  e.key.peer.asn = j.at("peer_asn").get<Asn>();
  e.key.peer.addr = j.at("peer_addr").get<std::string>();
  e.key.prefix = parse_prefix(j.at("prefix").get<std::string>());
  for (const auto& c : j.at("communities")) {
    e.communities.insert(parse_community(c.get<std::string>()));
  }
  for (const auto& a : j.at("as_path")) {
    e.path.hops.push_back(a.get<Asn>());
  }
  e.observations = j.at("observations").get<std::uint32_t>();
  e.first_seen = j.at("first_seen").get<Timestamp>();
  e.last_seen = j.at("last_seen").get<Timestamp>();
  if (e.path.empty()) {
    throw ParseError("baseline entry with an empty path");
  }
  if (e.observations == 0) {
    throw ParseError("baseline entry with zero observations");
  }
  return e;
}

Json deviation_to_json(const Deviation& d) {
  Json j;
  j["peer_asn"] = d.key.peer.asn;
  j["peer_addr"] = d.key.peer.addr;
  j["prefix"] = d.key.prefix.to_string();
  j["kind"] = std::string(to_string(d.kind));
  j["old_communities"] = communities_to_json(d.old_communities);
  j["new_communities"] = communities_to_json(d.new_communities);
  j["removed_meanings"] = meanings_to_json(d.removed_meanings);
  j["added_meanings"] = meanings_to_json(d.added_meanings);
  return j;
}

Json signal_to_json(const Signal& s) {
  Json j;
  j["bin"] = s.bin;
  j["bin_start"] = s.bin_start;
  j["bin_end"] = s.bin_end;
  j["count"] = s.count;
  j["threshold"] = s.threshold;
  Json devs = Json::array();
  for (const auto& d : s.deviations) {
    devs.push_back(deviation_to_json(d));
  }
  j["deviations"] = std::move(devs);
  return j;
}

Json outage_report_to_json(const OutageReport& r) {
  Json j;
  j["bin"] = r.bin;
  j["scope"] = std::string(to_string(r.location.scope));
  j["location"] = r.location.location;
  j["attributed"] = r.attributed;
  j["total"] = r.total;
  j["concentration"] = r.concentration;
  j["verdict"] = std::string(to_string(r.verdict));
  return j;
}

Json blackhole_event_to_json(const BlackholeEvent& e) {
  Json j;
  j["ts"] = e.timestamp;
  j["prefix"] = e.prefix.to_string();
  j["prefix_length"] = e.prefix_length;
  j["requester_asn"] = e.requester_asn;
  j["peer_asn"] = e.peer.asn;
  j["peer_addr"] = e.peer.addr;
  j["covered_by_baseline"] = e.covered_by_baseline;
  Json cs = Json::array();
  for (const auto& c : e.blackhole_communities) {
    cs.push_back(format_community(c));
  }
  j["communities"] = std::move(cs);
  return j;
}

Json valley_verdict_to_json(const ValleyVerdict& v) {
  Json j;
  j["ts"] = v.timestamp;
  j["peer_asn"] = v.key.peer.asn;
  j["peer_addr"] = v.key.peer.addr;
  j["prefix"] = v.key.prefix.to_string();
  j["path"] = path_to_json(v.labeling.path);
  Json labels = Json::array();
  Json evidence = Json::array();
  for (const auto& l : v.labeling.labels) {
    Json lj;
    lj["position"] = l.position;
    lj["role"] = std::string(to_string(l.role));
    if (l.evidence) {
      lj["evidence"] = format_community(*l.evidence);
      evidence.push_back(format_community(*l.evidence));
    } else {
      lj["evidence"] = nullptr;
    }
    labels.push_back(std::move(lj));
  }
  j["labels"] = std::move(labels);
  j["evidence_communities"] = std::move(evidence);
  j["violating"] = v.violating;
  if (v.witness) {
    j["witness"] = Json::array({v.witness->first, v.witness->second});
  } else {
    j["witness"] = nullptr;
  }
  j["ambiguous"] = v.labeling.ambiguous;
  j["conflicts"] = v.labeling.conflicts;
  return j;
}

Json valley_summary_to_json(const ValleySummary& s) {
  Json j;
  j["paths_checked"] = s.paths_checked;
  j["labeled_paths"] = s.labeled_paths;
  j["unlabeled_paths"] = s.unlabeled_paths;
  j["violating_paths"] = s.violating_paths;
  j["conflicted_paths"] = s.conflicted_paths;
  j["ambiguous_paths"] = s.ambiguous_paths;
  j["violation_fraction"] = s.violation_fraction();
  j["violation_fraction_all_paths"] = s.violation_fraction_all();
  j["no_labeled_paths"] = s.labeled_paths == 0;
  return j;
}

Json histogram_to_json(const CategoryHistogram& h) {
  Json j;
  j["total"] = h.total;
  Json cats = Json::object();
  for (std::size_t i = 0; i < kCategoryCount; ++i) {
    auto c = static_cast<Category>(i);
    cats[std::string(to_string(c))] = {{"count", h.count(c)}, {"fraction", h.fraction(c)}};
  }
  j["categories"] = std::move(cats);
  return j;
}

}  // namespace bgpcomm
