#pragma once

#include <array>
#include <cstddef>
#include <istream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bgpcomm/core.hpp"

namespace bgpcomm {

enum class GeoScope : std::uint8_t { ixp, facility, city, country };
enum class RelationshipRole : std::uint8_t { customer, peer, provider };
enum class ActionKind : std::uint8_t { selective_advertisement, local_preference, prepend };

struct Geolocation {
  GeoScope scope = GeoScope::ixp;
  std::string location;
  friend auto operator<=>(const Geolocation&, const Geolocation&) = default;
};

/// How the tagging AS learned the route.
struct Relationship {
  RelationshipRole role = RelationshipRole::customer;
  friend auto operator<=>(const Relationship&, const Relationship&) = default;
};

struct Blackhole {
  friend auto operator<=>(const Blackhole&, const Blackhole&) = default;
};

struct RoutingAction {
  ActionKind action = ActionKind::selective_advertisement;
  friend auto operator<=>(const RoutingAction&, const RoutingAction&) = default;
};

using Meaning = std::variant<Geolocation, Relationship, Blackhole, RoutingAction>;
using MeaningSet = std::set<Meaning>;

/// Top-level category; the order matches the Meaning alternatives.
enum class Category : std::uint8_t { geolocation, relationship, blackhole, action };
inline constexpr std::size_t kCategoryCount = 4;

inline Category category_of(const Meaning& m) { return static_cast<Category>(m.index()); }

std::string_view to_string(Category c);
std::string_view to_string(GeoScope s);
std::string_view to_string(RelationshipRole r);
std::string_view to_string(ActionKind a);

GeoScope parse_geo_scope(std::string_view s);
RelationshipRole parse_relationship_role(std::string_view s);
ActionKind parse_action_kind(std::string_view s);
Category parse_category(std::string_view s);

/// Compact human-readable label, e.g. "geolocation:ixp:FranceIX".
std::string to_string(const Meaning& m);

/// Parses "scope:label", the form used on the command line for location
/// filters. The label may itself contain colons.
Geolocation parse_geolocation(std::string_view text);

/// Inclusive range of community values; an exact value is [v, v].
struct ValueSpec {
  std::uint16_t lo = 0;
  std::uint16_t hi = 0;

  static ValueSpec exact(std::uint16_t v) { return {v, v}; }
  bool is_exact() const { return lo == hi; }
  bool contains(std::uint16_t v) const { return lo <= v && v <= hi; }
  bool overlaps(const ValueSpec& o) const { return lo <= o.hi && o.lo <= hi; }

  friend auto operator<=>(const ValueSpec&, const ValueSpec&) = default;
};

std::string to_string(const ValueSpec& spec);

struct DictionaryEntry {
  std::uint16_t asn = 0;
  ValueSpec spec;
  Meaning meaning;
  std::string description;
};

class DictionaryError : public std::runtime_error {
public:
  DictionaryError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  /// 1-based source line, 0 when not tied to a file.
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

/// How overlapping entries of the same category with different meanings
/// are treated when a dictionary is built.
enum class OverlapPolicy : std::uint8_t {
  /// Any such overlap is a load error.
  reject_conflicts,
  /// An exact entry may override a range entry; range/range and
  /// exact/exact conflicts are still rejected.
  exact_overrides_range,
};

struct CategoryHistogram {
  std::array<std::size_t, kCategoryCount> counts{};
  std::array<double, kCategoryCount> fractions{};
  std::size_t total = 0;

  std::size_t count(Category c) const { return counts[static_cast<std::size_t>(c)]; }
  double fraction(Category c) const { return fractions[static_cast<std::size_t>(c)]; }
};

/// Immutable after construction; lookups are safe from any thread.
class Dictionary {
public:
  Dictionary() = default;
  explicit Dictionary(std::vector<DictionaryEntry> entries,
                      OverlapPolicy policy = OverlapPolicy::reject_conflicts);

  /// Meanings of every entry whose ASN and value spec match `c`. An exact
  /// entry suppresses range entries of the same category.
  MeaningSet lookup(Community c) const;
  MeaningSet annotate(const CommunitySet& cs) const;

  /// Entry indices matching `c` after precedence, in entry order.
  std::vector<std::size_t> matching_entries(Community c) const;

  const std::vector<DictionaryEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  CategoryHistogram stats() const;

private:
  std::vector<DictionaryEntry> entries_;
  std::map<std::uint16_t, std::vector<std::size_t>> by_asn_;
};

struct LoadOptions {
  OverlapPolicy policy = OverlapPolicy::reject_conflicts;
};

/// Reads the CSV dictionary format:
///   asn,value_spec,category,subtype,location,description
/// `#` lines are comments. Errors carry the offending line number.
Dictionary load_dictionary(std::istream& source, const LoadOptions& options = {});
Dictionary load_dictionary_file(const std::string& path, const LoadOptions& options = {});

/// Writes entries back in the CSV format accepted by load_dictionary.
void write_dictionary(std::ostream& out, const Dictionary& d);

inline CategoryHistogram dictionary_stats(const Dictionary& d) { return d.stats(); }

}  // namespace bgpcomm
