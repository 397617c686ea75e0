#include "bgpcomm/dictionary.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <ostream>

#include "bgpcomm/csv.hpp"

namespace bgpcomm {

namespace {

constexpr std::array<std::string_view, 4> kCategoryNames{"geolocation", "relationship", "blackhole",
                                                         "action"};
constexpr std::array<std::string_view, 4> kScopeNames{"ixp", "facility", "city", "country"};
constexpr std::array<std::string_view, 3> kRoleNames{"customer", "peer", "provider"};
constexpr std::array<std::string_view, 3> kActionNames{"selective-advertisement",
                                                       "local-preference", "prepend"};

template <typename Enum, std::size_t N>
Enum parse_name(const std::array<std::string_view, N>& names, std::string_view s,
                const char* what) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == s) {
      return static_cast<Enum>(i);
    }
  }
  throw DictionaryError("unknown " + std::string(what) + " '" + std::string(s) + "'");
}

std::uint16_t parse_u16(std::string_view s, const char* what) {
  unsigned long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw DictionaryError("malformed " + std::string(what) + " '" + std::string(s) + "'");
  }
  if (v > 0xFFFF) {
    throw DictionaryError(std::string(what) + " out of 16-bit range: " + std::string(s));
  }
  return static_cast<std::uint16_t>(v);
}

ValueSpec parse_value_spec(std::string_view s) {
  auto dash = s.find('-');
  if (dash == std::string_view::npos) {
    return ValueSpec::exact(parse_u16(s, "value"));
  }
  ValueSpec spec{parse_u16(s.substr(0, dash), "range start"),
                 parse_u16(s.substr(dash + 1), "range end")};
  if (spec.lo > spec.hi) {
    throw DictionaryError("empty value range '" + std::string(s) + "'");
  }
  return spec;
}

bool conflicts(const DictionaryEntry& a, const DictionaryEntry& b, OverlapPolicy policy) {
  if (a.asn != b.asn || category_of(a.meaning) != category_of(b.meaning) ||
      !a.spec.overlaps(b.spec) || a.meaning == b.meaning) {
    return false;
  }
  if (policy == OverlapPolicy::exact_overrides_range && a.spec.is_exact() != b.spec.is_exact()) {
    return false;
  }
  return true;
}

}  // namespace

std::string_view to_string(Category c) { return kCategoryNames[static_cast<std::size_t>(c)]; }
std::string_view to_string(GeoScope s) { return kScopeNames[static_cast<std::size_t>(s)]; }
std::string_view to_string(RelationshipRole r) { return kRoleNames[static_cast<std::size_t>(r)]; }
std::string_view to_string(ActionKind a) { return kActionNames[static_cast<std::size_t>(a)]; }

GeoScope parse_geo_scope(std::string_view s) {
  return parse_name<GeoScope>(kScopeNames, s, "geolocation scope");
}
RelationshipRole parse_relationship_role(std::string_view s) {
  return parse_name<RelationshipRole>(kRoleNames, s, "relationship role");
}
ActionKind parse_action_kind(std::string_view s) {
  return parse_name<ActionKind>(kActionNames, s, "action kind");
}
Category parse_category(std::string_view s) {
  return parse_name<Category>(kCategoryNames, s, "category");
}

std::string to_string(const Meaning& m) {
  struct Visitor {
    std::string operator()(const Geolocation& g) const {
      return "geolocation:" + std::string(to_string(g.scope)) + ":" + g.location;
    }
    std::string operator()(const Relationship& r) const {
      return "relationship:" + std::string(to_string(r.role));
    }
    std::string operator()(const Blackhole&) const { return "blackhole"; }
    std::string operator()(const RoutingAction& a) const {
      return "action:" + std::string(to_string(a.action));
    }
  };
  return std::visit(Visitor{}, m);
}

Geolocation parse_geolocation(std::string_view text) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos || colon + 1 >= text.size()) {
    throw DictionaryError("location filter must be scope:label, got '" + std::string(text) + "'");
  }
  return Geolocation{parse_geo_scope(text.substr(0, colon)), std::string(text.substr(colon + 1))};
}

std::string to_string(const ValueSpec& spec) {
  if (spec.is_exact()) {
    return std::to_string(spec.lo);
  }
  return std::to_string(spec.lo) + "-" + std::to_string(spec.hi);
}

Dictionary::Dictionary(std::vector<DictionaryEntry> entries, OverlapPolicy policy)
    : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (e.spec.lo > e.spec.hi) {
      throw DictionaryError("entry " + std::to_string(i + 1) + ": empty value range");
    }
    if (const auto* g = std::get_if<Geolocation>(&e.meaning); g && g->location.empty()) {
      throw DictionaryError("entry " + std::to_string(i + 1) + ": geolocation without a location");
    }
    auto& bucket = by_asn_[e.asn];
    for (std::size_t j : bucket) {
      if (conflicts(entries_[j], e, policy)) {
        throw DictionaryError("conflicting overlap for asn " + std::to_string(e.asn) + ": " +
                              to_string(entries_[j].spec) + " (" + to_string(entries_[j].meaning) +
                              ") vs " + to_string(e.spec) + " (" + to_string(e.meaning) + ")");
      }
    }
    bucket.push_back(i);
  }
}

std::vector<std::size_t> Dictionary::matching_entries(Community c) const {
  std::vector<std::size_t> out;
  auto it = by_asn_.find(c.asn);
  if (it == by_asn_.end()) {
    return out;
  }
  std::array<bool, kCategoryCount> exact_hit{};
  for (std::size_t i : it->second) {
    const auto& e = entries_[i];
    if (e.spec.is_exact() && e.spec.lo == c.value) {
      exact_hit[e.meaning.index()] = true;
    }
  }
  for (std::size_t i : it->second) {
    const auto& e = entries_[i];
    if (!e.spec.contains(c.value)) {
      continue;
    }
    if (!e.spec.is_exact() && exact_hit[e.meaning.index()]) {
      continue;
    }
    out.push_back(i);
  }
  return out;
}

MeaningSet Dictionary::lookup(Community c) const {
  MeaningSet out;
  for (std::size_t i : matching_entries(c)) {
    out.insert(entries_[i].meaning);
  }
  return out;
}

MeaningSet Dictionary::annotate(const CommunitySet& cs) const {
  MeaningSet out;
  for (const auto& c : cs) {
    out.merge(lookup(c));
  }
  return out;
}

CategoryHistogram Dictionary::stats() const {
  CategoryHistogram h;
  for (const auto& e : entries_) {
    ++h.counts[e.meaning.index()];
  }
  h.total = entries_.size();
  if (h.total > 0) {
    for (std::size_t i = 0; i < kCategoryCount; ++i) {
      h.fractions[i] = static_cast<double>(h.counts[i]) / static_cast<double>(h.total);
    }
  }
  return h;
}

Dictionary load_dictionary(std::istream& source, const LoadOptions& options) {
  static constexpr std::array<std::string_view, 6> kHeader{
      "asn", "value_spec", "category", "subtype", "location", "description"};

  std::vector<DictionaryEntry> entries;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(source, line)) {
    ++lineno;
    if (lineno == 1 && line.starts_with("\xEF\xBB\xBF")) {
      line.erase(0, 3);
    }
    std::string_view view = line;
    if (!view.empty() && view.back() == '\r') {
      view.remove_suffix(1);
    }
    if (view.empty() || view.front() == '#') {
      continue;
    }
    auto fields = csv::split_line(view);
    if (!fields) {
      throw DictionaryError("unbalanced quotes", lineno);
    }
    if (!header_seen) {
      if (!std::equal(fields->begin(), fields->end(), kHeader.begin(), kHeader.end())) {
        throw DictionaryError("expected header 'asn,value_spec,category,subtype,location,description'",
                              lineno);
      }
      header_seen = true;
      continue;
    }
    if (fields->size() != kHeader.size()) {
      throw DictionaryError("expected 6 fields, got " + std::to_string(fields->size()), lineno);
    }
    const auto& f = *fields;
    try {
      DictionaryEntry e;
      e.asn = parse_u16(f[0], "asn");
      e.spec = parse_value_spec(f[1]);
      const std::string& subtype = f[3];
      const std::string& location = f[4];
      Category cat = parse_category(f[2]);
      if (cat != Category::geolocation && !location.empty()) {
        throw DictionaryError("location is only allowed for geolocation entries");
      }
      switch (cat) {
        case Category::geolocation:
          if (location.empty()) {
            throw DictionaryError("geolocation entry requires a location");
          }
          e.meaning = Geolocation{parse_geo_scope(subtype), location};
          break;
        case Category::relationship:
          e.meaning = Relationship{parse_relationship_role(subtype)};
          break;
        case Category::blackhole:
          if (!subtype.empty()) {
            throw DictionaryError("blackhole entries take no subtype");
          }
          e.meaning = Blackhole{};
          break;
        case Category::action:
          e.meaning = RoutingAction{parse_action_kind(subtype)};
          break;
      }
      e.description = f[5];
      entries.push_back(std::move(e));
    } catch (const DictionaryError& err) {
      throw DictionaryError(err.what(), lineno);
    }
  }
  if (source.bad()) {
    throw DictionaryError("read failure");
  }
  if (!header_seen) {
    throw DictionaryError("missing header line");
  }
  return Dictionary(std::move(entries), options.policy);
}

Dictionary load_dictionary_file(const std::string& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) {
    throw DictionaryError("cannot open dictionary '" + path + "'");
  }
  return load_dictionary(in, options);
}

void write_dictionary(std::ostream& out, const Dictionary& d) {
  out << "asn,value_spec,category,subtype,location,description\n";
  for (const auto& e : d.entries()) {
    std::string subtype;
    std::string location;
    std::visit(
        [&](const auto& m) {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, Geolocation>) {
            subtype = to_string(m.scope);
            location = csv::quote(m.location);
          } else if constexpr (std::is_same_v<T, Relationship>) {
            subtype = to_string(m.role);
          } else if constexpr (std::is_same_v<T, RoutingAction>) {
            subtype = to_string(m.action);
          }
        },
        e.meaning);
    out << e.asn << ',' << to_string(e.spec) << ',' << to_string(category_of(e.meaning)) << ','
        << subtype << ',' << location << ',' << csv::quote(e.description) << '\n';
  }
}

}  // namespace bgpcomm
