#include "bgpcomm/pipeline.hpp"

#include <fstream>
#include <iostream>
#include <memory>

namespace bgpcomm {

namespace fs = std::filesystem;

void Config::validate() const {
  if (dictionary_path.empty()) {
    throw ConfigError("dictionary path is required");
  }
  if (input_path.empty()) {
    throw ConfigError("input path is required ('-' for standard input)");
  }
  if (bin_width <= 0) {
    throw ConfigError("bin_width must be > 0");
  }
  if (init_window <= 0) {
    throw ConfigError("init_window must be > 0");
  }
  if (reorder_slack < 0) {
    throw ConfigError("reorder_slack must be >= 0");
  }
  if (blackhole_period <= 0) {
    throw ConfigError("blackhole_period must be > 0");
  }
  if (min_observations < 1) {
    throw ConfigError("min_observations must be >= 1");
  }
  if (threshold < 1) {
    throw ConfigError("threshold must be >= 1");
  }
  if (relative_threshold && !(*relative_threshold > 0.0 && *relative_threshold <= 1.0)) {
    throw ConfigError("relative_threshold must be in (0, 1]");
  }
  if (!(concentration_min > 0.0 && concentration_min <= 1.0)) {
    throw ConfigError("concentration_min must be in (0, 1]");
  }
}

Config config_from_json(const Json& j, Config c) {
  if (!j.is_object()) {
    throw ConfigError("config must be a JSON object");
  }
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "dictionary") {
        c.dictionary_path = v.get<std::string>();
      } else if (key == "input") {
        c.input_path = v.get<std::string>();
      } else if (key == "output_dir") {
        c.output_dir = v.get<std::string>();
      } else if (key == "baseline") {
        if (v.is_null()) {
          c.baseline_path.reset();
        } else {
          c.baseline_path = v.get<std::string>();
        }
      } else if (key == "bin_width") {
        c.bin_width = v.get<std::int64_t>();
      } else if (key == "init_window") {
        c.init_window = v.get<std::int64_t>();
      } else if (key == "min_observations") {
        auto n = v.get<std::int64_t>();
        if (n < 1) {
          throw ConfigError("min_observations must be >= 1");
        }
        c.min_observations = static_cast<std::uint32_t>(n);
      } else if (key == "threshold") {
        auto n = v.get<std::int64_t>();
        if (n < 1) {
          throw ConfigError("threshold must be >= 1");
        }
        c.threshold = static_cast<std::size_t>(n);
      } else if (key == "relative_threshold") {
        if (v.is_null()) {
          c.relative_threshold.reset();
        } else {
          c.relative_threshold = v.get<double>();
        }
      } else if (key == "reorder_slack") {
        c.reorder_slack = v.get<std::int64_t>();
      } else if (key == "path_changes") {
        c.detect_path_changes = v.get<bool>();
      } else if (key == "concentration_min") {
        c.concentration_min = v.get<double>();
      } else if (key == "attributed_min") {
        c.attributed_min = v.get<std::size_t>();
      } else if (key == "blackhole_period") {
        c.blackhole_period = v.get<std::int64_t>();
      } else if (key == "timeseries_locations") {
        c.timeseries_locations.clear();
        for (const auto& loc : v) {
          c.timeseries_locations.push_back(parse_geolocation(loc.get<std::string>()));
        }
      } else if (key == "investigators") {
        c.outage_investigator = v.value("outage", c.outage_investigator);
        c.blackhole_investigator = v.value("blackhole", c.blackhole_investigator);
        c.valley_investigator = v.value("valley", c.valley_investigator);
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    }
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("invalid config value: ") + e.what());
  } catch (const DictionaryError& e) {
    throw ConfigError(e.what());
  }
  return c;
}

Config load_config_file(const fs::path& path, Config base) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config '" + path.string() + "'");
  }
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) {
    throw ConfigError("config '" + path.string() + "' is not valid JSON");
  }
  return config_from_json(j, std::move(base));
}

Json config_to_json(const Config& c) {
  Json j;
  j["dictionary"] = c.dictionary_path;
  j["input"] = c.input_path;
  j["output_dir"] = c.output_dir.string();
  j["baseline"] = c.baseline_path ? Json(*c.baseline_path) : Json(nullptr);
  j["bin_width"] = c.bin_width;
  j["init_window"] = c.init_window;
  j["min_observations"] = c.min_observations;
  j["threshold"] = c.threshold;
  j["relative_threshold"] = c.relative_threshold ? Json(*c.relative_threshold) : Json(nullptr);
  j["reorder_slack"] = c.reorder_slack;
  j["path_changes"] = c.detect_path_changes;
  j["concentration_min"] = c.concentration_min;
  j["attributed_min"] = c.attributed_min;
  j["blackhole_period"] = c.blackhole_period;
  Json locs = Json::array();
  for (const auto& g : c.timeseries_locations) {
    locs.push_back(std::string(to_string(g.scope)) + ":" + g.location);
  }
  j["timeseries_locations"] = std::move(locs);
  j["investigators"] = {{"outage", c.outage_investigator},
                        {"blackhole", c.blackhole_investigator},
                        {"valley", c.valley_investigator}};
  return j;
}

std::string location_slug(const Geolocation& g) {
  std::string out = std::string(to_string(g.scope)) + "_";
  for (char ch : g.location) {
    bool keep = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') ||
                ch == '-' || ch == '_';
    out.push_back(keep ? ch : '_');
  }
  return out;
}

void write_activity_csv(std::ostream& out, const std::vector<ActivityPoint>& points) {
  out << "bin_start,announcements,withdrawals\n";
  for (const auto& p : points) {
    out << p.bin_start << ',' << p.announcements << ',' << p.withdrawals << '\n';
  }
}

void write_blackhole_series_csv(std::ostream& out, const BlackholeSeries& series) {
  out << "period_start,distinct_prefixes,events,cumulative_distinct_prefixes\n";
  for (const auto& p : series.points) {
    out << p.period_start << ',' << p.distinct_prefixes << ',' << p.events << ','
        << p.cumulative_distinct_prefixes << '\n';
  }
}

void write_histogram_csv(std::ostream& out, const std::map<unsigned, std::size_t>& hist) {
  out << "prefix_length,count\n";
  for (const auto& [len, n] : hist) {
    out << len << ',' << n << '\n';
  }
}

namespace {

std::ofstream open_output(const fs::path& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) {
    throw std::runtime_error("cannot write '" + path.string() + "'");
  }
  return f;
}

Json cursor_to_json(const StreamCursor& c) {
  return {{"consumed", c.consumed},
          {"accepted", c.accepted},
          {"dropped", {{"malformed", c.dropped_malformed}, {"stale", c.dropped_stale}}}};
}

std::optional<Baseline> load_baseline_file(const std::optional<std::string>& path) {
  if (!path) {
    return std::nullopt;
  }
  std::ifstream in(*path);
  if (!in) {
    throw ConfigError("cannot open baseline '" + *path + "'");
  }
  return read_baseline(in);
}

void write_blackhole_outputs(const fs::path& dir, const std::vector<BlackholeEvent>& events,
                             std::int64_t period) {
  auto series_out = open_output(dir / "blackhole_series.csv");
  write_blackhole_series_csv(series_out, blackhole_series(events, period));
  auto hist_out = open_output(dir / "blackhole_prefix_lengths.csv");
  write_histogram_csv(hist_out, blackhole_prefix_length_histogram(events));
}

/// Streaming driver; holds the baseline and per-bin state, never the stream.
class PipelineRun {
public:
  PipelineRun(const Config& cfg, const Dictionary& dict, std::optional<Baseline> imported)
      : cfg_(cfg), dict_(dict), all_(dict, std::nullopt, cfg.bin_width), valley_(dict) {
    fs::create_directories(cfg.output_dir);
    signals_out_ = open_output(cfg.output_dir / "signals.ndjson");
    if (cfg.outage_investigator) {
      outages_out_ = open_output(cfg.output_dir / "outages.ndjson");
    }
    if (cfg.blackhole_investigator) {
      blackhole_out_ = open_output(cfg.output_dir / "blackhole_events.ndjson");
    }
    if (cfg.valley_investigator) {
      valley_out_ = open_output(cfg.output_dir / "valley_verdicts.ndjson");
    }
    for (const auto& loc : cfg.timeseries_locations) {
      filtered_.emplace_back(dict, loc, cfg.bin_width);
    }
    if (imported) {
      imported_ = true;
      for (auto& s : filtered_) {
        s.seed(*imported);
      }
      start_detection(std::move(*imported));
    }
  }

  void feed(const BgpUpdate& u) {
    if (!detector_ && !builder_) {
      builder_.emplace(u.timestamp, u.timestamp + cfg_.init_window, cfg_.min_observations);
    }
    if (builder_ && u.timestamp >= builder_->window_end()) {
      start_detection(builder_->finalize());
    }

    if (detector_) {
      for (auto& s : detector_->advance_to(u.timestamp)) {
        handle_signal(s);
      }
      detector_->process_update(u);
    } else if (builder_->in_window(u.timestamp)) {
      builder_->observe(u);
    } else {
      ++outside_window_;
    }

    all_.add(u);
    for (auto& s : filtered_) {
      s.add(u);
    }
    if (cfg_.valley_investigator) {
      if (auto v = valley_.add(u)) {
        valley_out_ << valley_verdict_to_json(*v).dump() << '\n';
      }
    }
    if (cfg_.blackhole_investigator) {
      static const Baseline kEmpty;
      const Baseline& ref = detector_ ? detector_->monitored() : kEmpty;
      if (auto e = classify_blackhole(u, dict_, ref)) {
        if (detector_) {
          emit_blackhole(std::move(*e));
        } else {
          pending_blackholes_.push_back(std::move(*e));
        }
      }
    }
  }

  PipelineResult finish(const StreamCursor& cursor) {
    if (builder_) {
      start_detection(builder_->finalize());
    }
    if (detector_) {
      for (auto& s : detector_->flush()) {
        handle_signal(s);
      }
    }

    const fs::path& dir = cfg_.output_dir;
    {
      auto f = open_output(dir / "timeseries_all.csv");
      write_activity_csv(f, all_.points());
    }
    for (std::size_t i = 0; i < filtered_.size(); ++i) {
      auto f = open_output(dir / ("timeseries_" + location_slug(cfg_.timeseries_locations[i]) + ".csv"));
      write_activity_csv(f, filtered_[i].points());
    }
    if (cfg_.blackhole_investigator) {
      write_blackhole_outputs(dir, blackhole_events_, cfg_.blackhole_period);
    }
    if (detector_) {
      auto f = open_output(dir / "baseline.ndjson");
      write_baseline(f, detector_->monitored());
    }

    PipelineResult r;
    r.cursor = cursor;
    r.baseline_size = baseline_size_;
    r.signals = signals_;
    r.outage_verdicts = outage_verdicts_;
    r.blackhole_events = blackhole_events_.size();
    r.valley_violations = valley_.summary().violating_paths;

    Json s;
    s["records"] = cursor_to_json(cursor);
    s["baseline"] = {{"size", baseline_size_},
                     {"window_start", window_start_},
                     {"window_end", window_end_},
                     {"imported", imported_},
                     {"updates_outside_window", outside_window_}};
    s["detection"] = {
        {"signals", signals_},
        {"bins_closed", detector_ ? detector_->bins_closed() : 0},
        {"late_updates", detector_ ? detector_->late_updates() : 0},
        {"effective_threshold", detector_ ? detector_->effective_threshold() : cfg_.threshold},
        {"monitored_routes_at_end", detector_ ? detector_->monitored().size() : 0}};
    if (cfg_.outage_investigator) {
      s["outage"] = {{"verdicts", outage_verdicts_}, {"reports", outage_reports_}};
    }
    if (cfg_.blackhole_investigator) {
      s["blackhole"] = {{"events", blackhole_events_.size()}};
    }
    if (cfg_.valley_investigator) {
      s["valley"] = valley_summary_to_json(valley_.summary());
      auto f = open_output(dir / "valley_summary.json");
      f << s["valley"].dump(2) << '\n';
    }
    s["config"] = config_to_json(cfg_);
    // Outputs must not depend on where they are written.
    s["config"].erase("output_dir");
    {
      auto f = open_output(dir / "summary.json");
      f << s.dump(2) << '\n';
    }
    r.summary = std::move(s);
    return r;
  }

private:
  void start_detection(Baseline baseline) {
    baseline_size_ = baseline.size();
    window_start_ = baseline.window_start;
    window_end_ = baseline.window_end;
    builder_.reset();
    DetectorConfig dc;
    dc.bin_width = cfg_.bin_width;
    dc.threshold = cfg_.threshold;
    dc.relative_threshold = cfg_.relative_threshold;
    dc.detect_path_changes = cfg_.detect_path_changes;
    dc.reorder_slack = cfg_.reorder_slack;
    detector_.emplace(std::move(baseline), dict_, dc);
    for (auto& e : pending_blackholes_) {
      e.covered_by_baseline = covered_by_peer_route(detector_->monitored(), e.peer, e.prefix);
      emit_blackhole(std::move(e));
    }
    pending_blackholes_.clear();
  }

  void handle_signal(const Signal& s) {
    ++signals_;
    signals_out_ << signal_to_json(s).dump() << '\n';
    if (!cfg_.outage_investigator) {
      return;
    }
    OutageConfig oc{cfg_.concentration_min, cfg_.attributed_min};
    for (const auto& r : investigate_outage(s, oc)) {
      ++outage_reports_;
      if (r.verdict == OutageVerdict::outage) {
        ++outage_verdicts_;
      }
      outages_out_ << outage_report_to_json(r).dump() << '\n';
    }
  }

  void emit_blackhole(BlackholeEvent e) {
    blackhole_out_ << blackhole_event_to_json(e).dump() << '\n';
    blackhole_events_.push_back(std::move(e));
  }

  const Config& cfg_;
  const Dictionary& dict_;
  std::optional<BaselineBuilder> builder_;
  std::optional<Detector> detector_;
  LocationSeries all_;
  std::vector<LocationSeries> filtered_;
  ValleyReport valley_;
  std::vector<BlackholeEvent> pending_blackholes_;
  std::vector<BlackholeEvent> blackhole_events_;

  std::ofstream signals_out_;
  std::ofstream outages_out_;
  std::ofstream blackhole_out_;
  std::ofstream valley_out_;

  bool imported_ = false;
  std::size_t baseline_size_ = 0;
  Timestamp window_start_ = 0;
  Timestamp window_end_ = 0;
  std::uint64_t outside_window_ = 0;
  std::size_t signals_ = 0;
  std::size_t outage_verdicts_ = 0;
  std::size_t outage_reports_ = 0;
};

PipelineResult run_with(const Config& cfg, const Dictionary& dict,
                        std::optional<Baseline> imported, std::istream& input) {
  PipelineRun run(cfg, dict, std::move(imported));
  UpdateReader reader(input, cfg.reorder_slack);
  while (auto u = reader.next()) {
    run.feed(*u);
  }
  return run.finish(reader.cursor());
}

}  // namespace

PipelineResult run_pipeline(const Config& cfg, std::istream& input) {
  cfg.validate();
  Dictionary dict = load_dictionary_file(cfg.dictionary_path);
  auto imported = load_baseline_file(cfg.baseline_path);
  return run_with(cfg, dict, std::move(imported), input);
}

PipelineResult run_pipeline(const Config& cfg) {
  cfg.validate();
  Dictionary dict = load_dictionary_file(cfg.dictionary_path);
  auto imported = load_baseline_file(cfg.baseline_path);
  if (cfg.input_path == "-") {
    return run_with(cfg, dict, std::move(imported), std::cin);
  }
  std::ifstream in(cfg.input_path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open input '" + cfg.input_path + "'");
  }
  return run_with(cfg, dict, std::move(imported), in);
}

BlackholeScanResult blackhole_scan(std::istream& input, const Dictionary& dictionary,
                                   const Baseline& baseline, const fs::path& out_dir,
                                   std::int64_t period, std::int64_t reorder_slack) {
  if (period <= 0) {
    throw ConfigError("period must be > 0");
  }
  fs::create_directories(out_dir);
  auto events_out = open_output(out_dir / "blackhole_events.ndjson");
  std::vector<BlackholeEvent> events;
  UpdateReader reader(input, reorder_slack);
  while (auto u = reader.next()) {
    if (auto e = classify_blackhole(*u, dictionary, baseline)) {
      events_out << blackhole_event_to_json(*e).dump() << '\n';
      events.push_back(std::move(*e));
    }
  }
  write_blackhole_outputs(out_dir, events, period);
  return {events.size(), reader.cursor()};
}

ValleyCheckResult valley_check(std::istream& input, const Dictionary& dictionary,
                               const fs::path& out_dir, std::int64_t reorder_slack) {
  fs::create_directories(out_dir);
  auto verdicts_out = open_output(out_dir / "valley_verdicts.ndjson");
  ValleyReport report(dictionary);
  UpdateReader reader(input, reorder_slack);
  while (auto u = reader.next()) {
    if (auto v = report.add(*u)) {
      verdicts_out << valley_verdict_to_json(*v).dump() << '\n';
    }
  }
  auto summary_out = open_output(out_dir / "valley_summary.json");
  Json s = valley_summary_to_json(report.summary());
  s["records"] = cursor_to_json(reader.cursor());
  summary_out << s.dump(2) << '\n';
  return {report.summary(), reader.cursor()};
}

}  // namespace bgpcomm
