#pragma once

#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <string_view>

#include "bgpcomm/core.hpp"

namespace bgpcomm {

/// Raised by parse_record; never escapes UpdateReader::next().
class RecordError : public ParseError {
public:
  using ParseError::ParseError;
};

class SourceReadError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Parses one NDJSON update record:
///   {"ts", "peer_asn", "peer_addr", "type": "A"|"W", "prefix",
///    "as_path" (A only), "communities" (A only, optional)}
/// Unknown fields are ignored. Throws RecordError, or
/// UnsupportedCommunityForm for extended/large communities.
BgpUpdate parse_record(std::string_view line);

inline constexpr std::int64_t kDefaultReorderSlack = 30;

struct StreamCursor {
  std::uint64_t consumed = 0;
  std::uint64_t accepted = 0;
  std::uint64_t dropped_malformed = 0;
  std::uint64_t dropped_stale = 0;
  std::optional<Timestamp> last_accepted;

  std::uint64_t dropped() const { return dropped_malformed + dropped_stale; }
};

/// Pulls validated updates from a line stream. Bad lines are counted and
/// skipped; records older than (newest accepted - slack) are dropped as
/// stale. Blank lines are not records and are not counted.
///
/// Single consumer; the stream must outlive the reader.
class UpdateReader {
public:
  explicit UpdateReader(std::istream& source, std::int64_t reorder_slack = kDefaultReorderSlack);

  /// Next accepted update, or nullopt at end of stream. Throws
  /// SourceReadError only when the underlying stream fails.
  std::optional<BgpUpdate> next();

  const StreamCursor& cursor() const { return cursor_; }
  std::int64_t reorder_slack() const { return slack_; }

private:
  std::istream& source_;
  std::int64_t slack_;
  StreamCursor cursor_;
};

}  // namespace bgpcomm
