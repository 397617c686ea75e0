#include "bgpcomm/ingestion.hpp"

#include <json.hpp>

#include <string>

namespace bgpcomm {

namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) {
    throw RecordError(std::string("missing required field '") + key + "'");
  }
  return *it;
}

std::int64_t require_integer(const json& obj, const char* key, std::int64_t lo, std::int64_t hi) {
  const json& v = require(obj, key);
  if (!v.is_number_integer()) {
    throw RecordError(std::string("field '") + key + "' must be an integer");
  }
  std::int64_t out;
  if (v.is_number_unsigned()) {
    auto u = v.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(hi)) {
      throw RecordError(std::string("field '") + key + "' out of range");
    }
    out = static_cast<std::int64_t>(u);
  } else {
    out = v.get<std::int64_t>();
  }
  if (out < lo || out > hi) {
    throw RecordError(std::string("field '") + key + "' out of range");
  }
  return out;
}

const std::string& require_string(const json& obj, const char* key) {
  const json& v = require(obj, key);
  if (!v.is_string()) {
    throw RecordError(std::string("field '") + key + "' must be a string");
  }
  return v.get_ref<const std::string&>();
}

bool present(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it != obj.end() && !it->is_null();
}

AsPath parse_path(const json& arr) {
  if (!arr.is_array()) {
    throw RecordError("field 'as_path' must be an array");
  }
  AsPath path;
  path.hops.reserve(arr.size());
  for (const auto& hop : arr) {
    if (hop.is_array() || hop.is_object() ||
        (hop.is_string() && hop.get_ref<const std::string&>().find('{') != std::string::npos)) {
      throw RecordError("AS-set in as_path is not supported");
    }
    if (!hop.is_number_unsigned()) {
      throw RecordError("as_path hops must be non-negative integers");
    }
    auto asn = hop.get<std::uint64_t>();
    if (asn > 0xFFFFFFFFull) {
      throw RecordError("as_path hop exceeds 32 bits");
    }
    path.hops.push_back(static_cast<Asn>(asn));
  }
  if (path.empty()) {
    throw RecordError("announcement with an empty as_path");
  }
  return path;
}

CommunitySet parse_communities(const json& arr) {
  if (!arr.is_array()) {
    throw RecordError("field 'communities' must be an array");
  }
  CommunitySet out;
  for (const auto& c : arr) {
    if (!c.is_string()) {
      throw RecordError("communities must be \"asn:value\" strings");
    }
    try {
      out.insert(parse_community(c.get_ref<const std::string&>()));
    } catch (const UnsupportedCommunityForm&) {
      throw;
    } catch (const ParseError& e) {
      throw RecordError(std::string("invalid community: ") + e.what());
    }
  }
  return out;
}

}  // namespace

BgpUpdate parse_record(std::string_view line) {
  json obj = json::parse(line.begin(), line.end(), nullptr, /*allow_exceptions=*/false);
  if (obj.is_discarded()) {
    throw RecordError("malformed JSON");
  }
  if (!obj.is_object()) {
    throw RecordError("record must be a JSON object");
  }

  BgpUpdate u;
  u.timestamp = require_integer(obj, "ts", 0, std::numeric_limits<std::int64_t>::max());
  u.peer.asn = static_cast<Asn>(require_integer(obj, "peer_asn", 0, 0xFFFFFFFFll));
  u.peer.addr = require_string(obj, "peer_addr");
  if (u.peer.addr.empty()) {
    throw RecordError("field 'peer_addr' is empty");
  }

  const std::string& type = require_string(obj, "type");
  if (type == "A") {
    u.kind = UpdateKind::announcement;
  } else if (type == "W") {
    u.kind = UpdateKind::withdrawal;
  } else {
    throw RecordError("field 'type' must be \"A\" or \"W\"");
  }

  try {
    u.prefix = parse_prefix(require_string(obj, "prefix"));
  } catch (const RecordError&) {
    throw;
  } catch (const ParseError& e) {
    throw RecordError(e.what());
  }

  if (u.kind == UpdateKind::announcement) {
    u.path = parse_path(require(obj, "as_path"));
    if (present(obj, "communities")) {
      u.communities = parse_communities(obj["communities"]);
    }
  } else {
    if (present(obj, "as_path")) {
      throw RecordError("withdrawal carries an as_path");
    }
    if (present(obj, "communities")) {
      const json& cs = obj["communities"];
      if (!cs.is_array() || !cs.empty()) {
        throw RecordError("withdrawal carries communities");
      }
    }
  }
  return u;
}

UpdateReader::UpdateReader(std::istream& source, std::int64_t reorder_slack)
    : source_(source), slack_(reorder_slack) {
  if (reorder_slack < 0) {
    throw std::invalid_argument("reorder slack must be non-negative");
  }
}

std::optional<BgpUpdate> UpdateReader::next() {
  std::string line;
  while (std::getline(source_, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    ++cursor_.consumed;
    BgpUpdate u;
    try {
      u = parse_record(line);
    } catch (const std::exception&) {
      ++cursor_.dropped_malformed;
      continue;
    }
    if (cursor_.last_accepted && u.timestamp < *cursor_.last_accepted - slack_) {
      ++cursor_.dropped_stale;
      continue;
    }
    ++cursor_.accepted;
    if (!cursor_.last_accepted || u.timestamp > *cursor_.last_accepted) {
      cursor_.last_accepted = u.timestamp;
    }
    return u;
  }
  if (source_.bad()) {
    throw SourceReadError("failed reading update stream");
  }
  return std::nullopt;
}

}  // namespace bgpcomm
