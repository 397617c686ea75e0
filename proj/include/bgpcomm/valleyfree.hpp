#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bgpcomm/core.hpp"
#include "bgpcomm/dictionary.hpp"

namespace bgpcomm {

/// Role of the sending AS (nearer the origin) relative to the receiving AS.
enum class EdgeRole : std::uint8_t { customer, peer, provider, unknown };

std::string_view to_string(EdgeRole r);
EdgeRole parse_edge_role(std::string_view s);
inline EdgeRole edge_role(RelationshipRole r) { return static_cast<EdgeRole>(r); }

struct EdgeLabel {
  /// Edge between collapsed hops `position` and `position + 1`; 0 is
  /// nearest the collector.
  std::size_t position = 0;
  EdgeRole role = EdgeRole::unknown;
  std::optional<Community> evidence;
};

struct EdgeLabeling {
  AsPath path;  // collapsed
  /// One label per edge, ordered by position.
  std::vector<EdgeLabel> labels;
  /// Positions whose communities disagreed; those edges are unknown.
  std::vector<std::size_t> conflicts;
  /// A tagging AS occurred more than once in the collapsed path.
  bool ambiguous = false;

  std::size_t known_labels() const;
  /// Roles ordered origin-side edge first, as check_valley_free expects.
  std::vector<EdgeRole> origin_to_collector() const;
};

/// Labels each edge from relationship communities set by ASes on the path.
/// A community tagged by AS X labels the edge from X toward the origin.
EdgeLabeling label_edges(const BgpUpdate& u, const Dictionary& dictionary);

struct ValleyCheck {
  bool violating = false;
  /// Indices into the origin-to-collector sequence, first < second.
  std::optional<std::pair<std::size_t, std::size_t>> witness;
};

/// A sequence is valley-free iff some completion of its unknowns matches
/// customer* peer? provider*. Equivalently it violates iff some i < j has
/// role_i in {peer, provider} and role_j in {customer, peer}; the witness
/// is the lexicographically smallest such pair.
ValleyCheck check_valley_free(std::span<const EdgeRole> origin_to_collector);

struct ValleyVerdict {
  RouteKey key;
  Timestamp timestamp = 0;
  EdgeLabeling labeling;
  bool violating = false;
  /// Edge positions (origin-side first), i.e. first > second numerically.
  std::optional<std::pair<std::size_t, std::size_t>> witness;
};

ValleyVerdict evaluate_path(const BgpUpdate& u, const Dictionary& dictionary);

struct ValleySummary {
  std::uint64_t paths_checked = 0;
  std::uint64_t labeled_paths = 0;
  std::uint64_t unlabeled_paths = 0;
  std::uint64_t violating_paths = 0;
  std::uint64_t conflicted_paths = 0;
  std::uint64_t ambiguous_paths = 0;

  /// violating / labeled, 0 when nothing was labeled.
  double violation_fraction() const;
  /// violating / checked, 0 on an empty stream.
  double violation_fraction_all() const;
};

/// Streams announcements through label_edges and check_valley_free.
class ValleyReport {
public:
  explicit ValleyReport(const Dictionary& dictionary) : dictionary_(&dictionary) {}

  /// Returns the verdict when the announcement violates; withdrawals are
  /// ignored.
  std::optional<ValleyVerdict> add(const BgpUpdate& u);

  const ValleySummary& summary() const { return summary_; }

private:
  const Dictionary* dictionary_;
  ValleySummary summary_;
};

struct ValleyReportResult {
  ValleySummary summary;
  std::vector<ValleyVerdict> violations;
};

ValleyReportResult valley_report(std::span<const BgpUpdate> updates, const Dictionary& dictionary);

}  // namespace bgpcomm
