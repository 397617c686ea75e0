#pragma once

// NDJSON / JSON encodings of the engine's records. Object keys are emitted
// in sorted order (nlohmann::json default), which keeps outputs
// byte-stable across runs.

#include <json.hpp>

#include "bgpcomm/baseline.hpp"
#include "bgpcomm/blackhole.hpp"
#include "bgpcomm/core.hpp"
#include "bgpcomm/detector.hpp"
#include "bgpcomm/dictionary.hpp"
#include "bgpcomm/outage.hpp"
#include "bgpcomm/valleyfree.hpp"

namespace bgpcomm {

using Json = nlohmann::json;

Json communities_to_json(const CommunitySet& cs);
Json path_to_json(const AsPath& p);
Json meaning_to_json(const Meaning& m);
Json meanings_to_json(const MeaningSet& ms);
Meaning meaning_from_json(const Json& j);

/// Encodes an update in the ingestion record schema.
Json update_to_json(const BgpUpdate& u);

Json baseline_entry_to_json(const BaselineEntry& e);
BaselineEntry baseline_entry_from_json(const Json& j);

Json deviation_to_json(const Deviation& d);
Json signal_to_json(const Signal& s);
Json outage_report_to_json(const OutageReport& r);
Json blackhole_event_to_json(const BlackholeEvent& e);
Json valley_verdict_to_json(const ValleyVerdict& v);
Json valley_summary_to_json(const ValleySummary& s);
Json histogram_to_json(const CategoryHistogram& h);

}  // namespace bgpcomm
