#include "bgpcomm/valleyfree.hpp"

#include <algorithm>
#include <array>

namespace bgpcomm {

namespace {

constexpr std::array<std::string_view, 4> kEdgeRoleNames{"customer", "peer", "provider",
                                                         "unknown"};

bool goes_down_or_flat(EdgeRole r) { return r == EdgeRole::peer || r == EdgeRole::provider; }
bool goes_up_or_flat(EdgeRole r) { return r == EdgeRole::customer || r == EdgeRole::peer; }

}  // namespace

std::string_view to_string(EdgeRole r) { return kEdgeRoleNames[static_cast<std::size_t>(r)]; }

EdgeRole parse_edge_role(std::string_view s) {
  for (std::size_t i = 0; i < kEdgeRoleNames.size(); ++i) {
    if (kEdgeRoleNames[i] == s) {
      return static_cast<EdgeRole>(i);
    }
  }
  throw ParseError("unknown edge role '" + std::string(s) + "'");
}

std::size_t EdgeLabeling::known_labels() const {
  return static_cast<std::size_t>(std::count_if(labels.begin(), labels.end(), [](const auto& l) {
    return l.role != EdgeRole::unknown;
  }));
}

std::vector<EdgeRole> EdgeLabeling::origin_to_collector() const {
  std::vector<EdgeRole> out;
  out.reserve(labels.size());
  for (auto it = labels.rbegin(); it != labels.rend(); ++it) {
    out.push_back(it->role);
  }
  return out;
}

EdgeLabeling label_edges(const BgpUpdate& u, const Dictionary& dictionary) {
  EdgeLabeling out;
  out.path = collapse_prepending(u.path);
  const auto& hops = out.path.hops;
  const std::size_t edges = hops.size() > 1 ? hops.size() - 1 : 0;
  out.labels.resize(edges);
  for (std::size_t i = 0; i < edges; ++i) {
    out.labels[i].position = i;
  }
  std::vector<bool> conflicted(edges, false);

  for (const auto& c : u.communities) {
    auto first = std::find(hops.begin(), hops.end(), static_cast<Asn>(c.asn));
    if (first == hops.end()) {
      continue;
    }
    const auto pos = static_cast<std::size_t>(first - hops.begin());
    if (pos + 1 >= hops.size()) {
      continue;  // the origin has no edge toward the origin
    }
    for (const auto& m : dictionary.lookup(c)) {
      const auto* rel = std::get_if<Relationship>(&m);
      if (!rel) {
        continue;
      }
      if (std::find(first + 1, hops.end(), static_cast<Asn>(c.asn)) != hops.end()) {
        out.ambiguous = true;
      }
      EdgeLabel& label = out.labels[pos];
      EdgeRole role = edge_role(rel->role);
      if (conflicted[pos]) {
        continue;
      }
      if (!label.evidence) {
        label.role = role;
        label.evidence = c;
      } else if (label.role != role) {
        conflicted[pos] = true;
        label.role = EdgeRole::unknown;
        label.evidence.reset();
        out.conflicts.push_back(pos);
      }
    }
  }
  return out;
}

ValleyCheck check_valley_free(std::span<const EdgeRole> roles) {
  // next_up[k]: first index >= k whose role is customer or peer.
  const std::size_t n = roles.size();
  std::vector<std::size_t> next_up(n + 1, n);
  for (std::size_t k = n; k-- > 0;) {
    next_up[k] = goes_up_or_flat(roles[k]) ? k : next_up[k + 1];
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (goes_down_or_flat(roles[i]) && next_up[i + 1] < n) {
      return ValleyCheck{true, std::make_pair(i, next_up[i + 1])};
    }
  }
  return ValleyCheck{};
}

ValleyVerdict evaluate_path(const BgpUpdate& u, const Dictionary& dictionary) {
  ValleyVerdict v;
  v.key = route_key(u);
  v.timestamp = u.timestamp;
  v.labeling = label_edges(u, dictionary);
  auto roles = v.labeling.origin_to_collector();
  auto check = check_valley_free(roles);
  v.violating = check.violating;
  if (check.witness) {
    const std::size_t last = roles.size() - 1;
    v.witness = std::make_pair(last - check.witness->first, last - check.witness->second);
  }
  return v;
}

double ValleySummary::violation_fraction() const {
  return labeled_paths ? static_cast<double>(violating_paths) / static_cast<double>(labeled_paths)
                       : 0.0;
}

double ValleySummary::violation_fraction_all() const {
  return paths_checked ? static_cast<double>(violating_paths) / static_cast<double>(paths_checked)
                       : 0.0;
}

std::optional<ValleyVerdict> ValleyReport::add(const BgpUpdate& u) {
  if (!u.is_announcement()) {
    return std::nullopt;
  }
  ValleyVerdict v = evaluate_path(u, *dictionary_);
  ++summary_.paths_checked;
  if (v.labeling.known_labels() > 0) {
    ++summary_.labeled_paths;
  } else {
    ++summary_.unlabeled_paths;
  }
  if (!v.labeling.conflicts.empty()) {
    ++summary_.conflicted_paths;
  }
  if (v.labeling.ambiguous) {
    ++summary_.ambiguous_paths;
  }
  if (!v.violating) {
    return std::nullopt;
  }
  ++summary_.violating_paths;
  return v;
}

ValleyReportResult valley_report(std::span<const BgpUpdate> updates, const Dictionary& dictionary) {
  ValleyReport report(dictionary);
  ValleyReportResult out;
  for (const auto& u : updates) {
    if (auto v = report.add(u)) {
      out.violations.push_back(std::move(*v));
    }
  }
  out.summary = report.summary();
  return out;
}

}  // namespace bgpcomm
