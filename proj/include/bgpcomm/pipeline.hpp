#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bgpcomm/baseline.hpp"
#include "bgpcomm/blackhole.hpp"
#include "bgpcomm/detector.hpp"
#include "bgpcomm/dictionary.hpp"
#include "bgpcomm/ingestion.hpp"
#include "bgpcomm/json_io.hpp"
#include "bgpcomm/outage.hpp"
#include "bgpcomm/valleyfree.hpp"

namespace bgpcomm {

class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct Config {
  std::string dictionary_path;
  /// "-" reads standard input.
  std::string input_path = "-";
  std::filesystem::path output_dir = "out";
  std::optional<std::string> baseline_path;

  std::int64_t bin_width = kDefaultBinWidth;
  std::int64_t init_window = kDefaultInitWindow;
  std::uint32_t min_observations = kDefaultMinObservations;
  std::size_t threshold = kDefaultThreshold;
  std::optional<double> relative_threshold;
  std::int64_t reorder_slack = kDefaultReorderSlack;
  bool detect_path_changes = false;
  double concentration_min = 0.5;
  std::size_t attributed_min = 10;
  std::int64_t blackhole_period = 86400;
  std::vector<Geolocation> timeseries_locations;

  bool outage_investigator = true;
  bool blackhole_investigator = true;
  bool valley_investigator = true;

  /// Throws ConfigError naming the first invalid field.
  void validate() const;
};

/// Overlays the keys present in `j` onto `base`. Unknown keys are errors.
Config config_from_json(const Json& j, Config base = {});
Config load_config_file(const std::filesystem::path& path, Config base = {});
Json config_to_json(const Config& c);

struct PipelineResult {
  StreamCursor cursor;
  std::size_t baseline_size = 0;
  std::size_t signals = 0;
  std::size_t outage_verdicts = 0;
  std::size_t blackhole_events = 0;
  std::uint64_t valley_violations = 0;
  Json summary;
};

/// ingest -> baseline -> detect -> investigate -> report. Validates the
/// configuration and loads the dictionary before creating any output.
///
/// Writes signals.ndjson, outages.ndjson, blackhole_events.ndjson,
/// blackhole_series.csv, blackhole_prefix_lengths.csv,
/// valley_verdicts.ndjson, timeseries_all.csv (plus one CSV per
/// configured location), baseline.ndjson and summary.json.
PipelineResult run_pipeline(const Config& cfg);

/// Same as run_pipeline but reads updates from `input`.
PipelineResult run_pipeline(const Config& cfg, std::istream& input);

struct BlackholeScanResult {
  std::size_t events = 0;
  StreamCursor cursor;
};

/// Classifies every announcement and writes blackhole_events.ndjson,
/// blackhole_series.csv and blackhole_prefix_lengths.csv into `out_dir`.
BlackholeScanResult blackhole_scan(std::istream& input, const Dictionary& dictionary,
                                   const Baseline& baseline, const std::filesystem::path& out_dir,
                                   std::int64_t period = 86400,
                                   std::int64_t reorder_slack = kDefaultReorderSlack);

struct ValleyCheckResult {
  ValleySummary summary;
  StreamCursor cursor;
};

/// Writes valley_verdicts.ndjson and valley_summary.json into `out_dir`.
ValleyCheckResult valley_check(std::istream& input, const Dictionary& dictionary,
                               const std::filesystem::path& out_dir,
                               std::int64_t reorder_slack = kDefaultReorderSlack);

void write_activity_csv(std::ostream& out, const std::vector<ActivityPoint>& points);
void write_blackhole_series_csv(std::ostream& out, const BlackholeSeries& series);
void write_histogram_csv(std::ostream& out, const std::map<unsigned, std::size_t>& hist);

/// File-name friendly slug, e.g. "ixp_FranceIX".
std::string location_slug(const Geolocation& g);

}  // namespace bgpcomm
