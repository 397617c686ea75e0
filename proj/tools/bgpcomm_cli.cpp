// bgpcomm command-line front end.
//
//   bgpcomm run --config cfg.json [overrides]
//   bgpcomm generate --scenario sc.json --out DIR
//   bgpcomm dict-stats --dictionary dict.csv [--json]
//   bgpcomm blackhole-scan --dictionary dict.csv --input updates.ndjson --out DIR
//   bgpcomm valley-check --dictionary dict.csv --input updates.ndjson --out DIR [--expect FILE]
//   bgpcomm timeseries --dictionary dict.csv --input updates.ndjson [--location ixp:NAME]

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <tuple>

#include "bgpcomm/pipeline.hpp"
#include "bgpcomm/synthgen.hpp"

namespace {

using namespace bgpcomm;

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;
constexpr int kExitMismatch = 3;

/// Opens a named file, or hands back standard input for "-".
class InputSource {
public:
  explicit InputSource(const std::string& path) {
    if (path == "-") {
      stream_ = &std::cin;
      return;
    }
    file_.open(path, std::ios::binary);
    if (!file_) {
      throw std::runtime_error("cannot open input '" + path + "'");
    }
    stream_ = &file_;
  }
  std::istream& get() { return *stream_; }

private:
  std::ifstream file_;
  std::istream* stream_ = nullptr;
};

Baseline maybe_baseline(const std::string& path) {
  if (path.empty()) {
    return {};
  }
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open baseline '" + path + "'");
  }
  return read_baseline(in);
}

void print_cursor(const StreamCursor& c) {
  std::cerr << "records: " << c.consumed << " consumed, " << c.accepted << " accepted, "
            << c.dropped_malformed << " malformed, " << c.dropped_stale << " stale\n";
}

struct RunOptions {
  std::string config;
  std::string dictionary;
  std::string input;
  std::string out;
  std::string baseline;
  std::optional<std::int64_t> bin_width;
  std::optional<std::int64_t> init_window;
  std::optional<std::uint32_t> min_observations;
  std::optional<std::int64_t> threshold;
  std::optional<double> relative_threshold;
  std::optional<std::int64_t> reorder_slack;
  bool path_changes = false;
  std::optional<double> concentration_min;
  std::optional<std::size_t> attributed_min;
  std::optional<std::int64_t> blackhole_period;
  std::vector<std::string> locations;
  bool no_outage = false;
  bool no_blackhole = false;
  bool no_valley = false;
};

int cmd_run(const RunOptions& o) {
  Config cfg;
  if (!o.config.empty()) {
    cfg = load_config_file(o.config);
  }
  if (!o.dictionary.empty()) cfg.dictionary_path = o.dictionary;
  if (!o.input.empty()) cfg.input_path = o.input;
  if (!o.out.empty()) cfg.output_dir = o.out;
  if (!o.baseline.empty()) cfg.baseline_path = o.baseline;
  if (o.bin_width) cfg.bin_width = *o.bin_width;
  if (o.init_window) cfg.init_window = *o.init_window;
  if (o.min_observations) cfg.min_observations = *o.min_observations;
  if (o.threshold) {
    if (*o.threshold < 1) {
      throw ConfigError("threshold must be >= 1");
    }
    cfg.threshold = static_cast<std::size_t>(*o.threshold);
  }
  if (o.relative_threshold) cfg.relative_threshold = *o.relative_threshold;
  if (o.reorder_slack) cfg.reorder_slack = *o.reorder_slack;
  if (o.path_changes) cfg.detect_path_changes = true;
  if (o.concentration_min) cfg.concentration_min = *o.concentration_min;
  if (o.attributed_min) cfg.attributed_min = *o.attributed_min;
  if (o.blackhole_period) cfg.blackhole_period = *o.blackhole_period;
  for (const auto& l : o.locations) {
    cfg.timeseries_locations.push_back(parse_geolocation(l));
  }
  if (o.no_outage) cfg.outage_investigator = false;
  if (o.no_blackhole) cfg.blackhole_investigator = false;
  if (o.no_valley) cfg.valley_investigator = false;

  PipelineResult r = run_pipeline(cfg);
  print_cursor(r.cursor);
  std::cerr << "baseline routes: " << r.baseline_size << ", signals: " << r.signals
            << ", outage verdicts: " << r.outage_verdicts
            << ", blackhole events: " << r.blackhole_events
            << ", valley violations: " << r.valley_violations << '\n';
  return 0;
}

int cmd_generate(const std::string& scenario_path, const std::string& out) {
  std::ifstream in(scenario_path);
  if (!in) {
    throw ConfigError("cannot open scenario '" + scenario_path + "'");
  }
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) {
    throw ConfigError("scenario '" + scenario_path + "' is not valid JSON");
  }
  auto generated = synth::generate(synth::scenario_from_json(j));
  synth::write_scenario(generated, out);
  std::cerr << "wrote " << generated.ground_truth["records"].get<std::size_t>() << " records to "
            << out << '\n';
  return 0;
}

int cmd_dict_stats(const std::string& path, bool as_json) {
  Dictionary d = load_dictionary_file(path);
  auto h = d.stats();
  if (as_json) {
    std::cout << histogram_to_json(h).dump(2) << '\n';
    return 0;
  }
  std::printf("entries: %zu\n", h.total);
  for (std::size_t i = 0; i < kCategoryCount; ++i) {
    auto c = static_cast<Category>(i);
    std::printf("%-13s %6zu  %6.2f%%\n", std::string(to_string(c)).c_str(), h.count(c),
                100.0 * h.fraction(c));
  }
  std::size_t policy = h.count(Category::action) + h.count(Category::blackhole);
  double policy_fraction = h.fraction(Category::action) + h.fraction(Category::blackhole);
  std::printf("%-13s %6zu  %6.2f%%\n", "policy", policy, 100.0 * policy_fraction);
  return 0;
}

int cmd_blackhole_scan(const std::string& dict_path, const std::string& input,
                       const std::string& baseline, const std::string& out, std::int64_t period,
                       std::int64_t slack) {
  Dictionary d = load_dictionary_file(dict_path);
  Baseline b = maybe_baseline(baseline);
  InputSource src(input);
  auto r = blackhole_scan(src.get(), d, b, out, period, slack);
  print_cursor(r.cursor);
  std::cerr << "blackhole events: " << r.events << '\n';
  return 0;
}

int cmd_valley_check(const std::string& dict_path, const std::string& input,
                     const std::string& out, const std::string& expect, std::int64_t slack) {
  Dictionary d = load_dictionary_file(dict_path);
  InputSource src(input);
  auto r = valley_check(src.get(), d, out, slack);
  print_cursor(r.cursor);
  const auto& s = r.summary;
  std::printf("paths checked: %llu\nlabeled paths: %llu\nviolating paths: %llu\n"
              "violation fraction (labeled): %.6f\nviolation fraction (all): %.6f\n",
              static_cast<unsigned long long>(s.paths_checked),
              static_cast<unsigned long long>(s.labeled_paths),
              static_cast<unsigned long long>(s.violating_paths), s.violation_fraction(),
              s.violation_fraction_all());
  if (expect.empty()) {
    return 0;
  }

  // Compare the written verdicts against an expectation file keyed by
  // (peer_asn, peer_addr, prefix).
  using Key = std::tuple<std::uint64_t, std::string, std::string>;
  std::map<Key, std::optional<std::pair<std::size_t, std::size_t>>> observed;
  {
    std::ifstream vin(std::filesystem::path(out) / "valley_verdicts.ndjson");
    std::string line;
    while (std::getline(vin, line)) {
      Json v = Json::parse(line);
      Key k{v["peer_asn"].get<std::uint64_t>(), v["peer_addr"].get<std::string>(),
            v["prefix"].get<std::string>()};
      std::optional<std::pair<std::size_t, std::size_t>> w;
      if (!v["witness"].is_null()) {
        w = std::make_pair(v["witness"][0].get<std::size_t>(), v["witness"][1].get<std::size_t>());
      }
      observed[k] = w;
    }
  }
  std::ifstream ein(expect);
  if (!ein) {
    throw ConfigError("cannot open expectation file '" + expect + "'");
  }
  std::size_t total = 0;
  std::size_t agree = 0;
  std::string line;
  while (std::getline(ein, line)) {
    if (line.empty()) {
      continue;
    }
    Json e = Json::parse(line);
    Key k{e["peer_asn"].get<std::uint64_t>(), e["peer_addr"].get<std::string>(),
          e["prefix"].get<std::string>()};
    bool want = e["violating"].get<bool>();
    auto it = observed.find(k);
    bool got = it != observed.end();
    bool ok = want == got;
    if (ok && want && e.contains("witness") && !e["witness"].is_null()) {
      auto w = std::make_pair(e["witness"][0].get<std::size_t>(), e["witness"][1].get<std::size_t>());
      ok = it->second == w;
    }
    ++total;
    agree += ok ? 1 : 0;
  }
  std::printf("oracle agreement: %zu/%zu (%.2f%%)\n", agree, total,
              total ? 100.0 * static_cast<double>(agree) / static_cast<double>(total) : 100.0);
  return agree == total ? 0 : kExitMismatch;
}

int cmd_timeseries(const std::string& dict_path, const std::string& input,
                   const std::string& location, const std::string& baseline, std::int64_t bin_width,
                   const std::string& output, std::int64_t slack) {
  Dictionary d = load_dictionary_file(dict_path);
  std::optional<Geolocation> filter;
  if (!location.empty()) {
    filter = parse_geolocation(location);
  }
  LocationSeries series(d, filter, bin_width);
  if (!baseline.empty()) {
    series.seed(maybe_baseline(baseline));
  }
  InputSource src(input);
  UpdateReader reader(src.get(), slack);
  while (auto u = reader.next()) {
    series.add(*u);
  }
  print_cursor(reader.cursor());
  if (output == "-") {
    write_activity_csv(std::cout, series.points());
  } else {
    std::ofstream f(output, std::ios::binary);
    if (!f) {
      throw std::runtime_error("cannot write '" + output + "'");
    }
    write_activity_csv(f, series.points());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"BGP communities anomaly detection engine"};
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "ingest -> baseline -> detect -> investigate -> report");
  run_cmd->add_option("--config", run.config, "JSON config file");
  run_cmd->add_option("--dictionary", run.dictionary, "communities dictionary CSV");
  run_cmd->add_option("--input", run.input, "update stream (NDJSON), '-' for stdin");
  run_cmd->add_option("--out", run.out, "output directory");
  run_cmd->add_option("--baseline", run.baseline, "import a baseline instead of learning one");
  run_cmd->add_option("--bin-width", run.bin_width, "bin width in seconds (default 60)");
  run_cmd->add_option("--init-window", run.init_window, "initialization window in seconds (default 3600)");
  run_cmd->add_option("--min-observations", run.min_observations, "baseline sightings needed (default 2)");
  run_cmd->add_option("--threshold", run.threshold, "distinct deviating routes per bin (default 10)");
  run_cmd->add_option("--relative-threshold", run.relative_threshold, "threshold as a fraction of the baseline");
  run_cmd->add_option("--reorder-slack", run.reorder_slack, "reorder slack in seconds (default 30)");
  run_cmd->add_flag("--path-changes", run.path_changes, "also report path-change deviations");
  run_cmd->add_option("--concentration-min", run.concentration_min, "outage concentration cutoff (default 0.5)");
  run_cmd->add_option("--attributed-min", run.attributed_min, "outage attributed-route floor (default 10)");
  run_cmd->add_option("--blackhole-period", run.blackhole_period, "blackhole series period (default 86400)");
  run_cmd->add_option("--location", run.locations, "extra filtered time series, scope:label");
  run_cmd->add_flag("--no-outage", run.no_outage, "disable the outage investigator");
  run_cmd->add_flag("--no-blackhole", run.no_blackhole, "disable the blackhole investigator");
  run_cmd->add_flag("--no-valley", run.no_valley, "disable the valley-free investigator");

  std::string scenario, gen_out;
  auto* gen_cmd = app.add_subcommand("generate", "write a synthetic scenario with ground truth");
  gen_cmd->add_option("--scenario", scenario, "scenario JSON")->required();
  gen_cmd->add_option("--out", gen_out, "output directory")->required();

  std::string ds_dict;
  bool ds_json = false;
  auto* ds_cmd = app.add_subcommand("dict-stats", "category breakdown of a dictionary");
  ds_cmd->add_option("--dictionary", ds_dict, "communities dictionary CSV")->required();
  ds_cmd->add_flag("--json", ds_json, "emit JSON");

  std::string bh_dict, bh_input, bh_baseline, bh_out;
  std::int64_t bh_period = 86400;
  std::int64_t slack = kDefaultReorderSlack;
  auto* bh_cmd = app.add_subcommand("blackhole-scan", "classify blackholing announcements");
  bh_cmd->add_option("--dictionary", bh_dict, "communities dictionary CSV")->required();
  bh_cmd->add_option("--input", bh_input, "update stream, '-' for stdin")->required();
  bh_cmd->add_option("--baseline", bh_baseline, "baseline NDJSON for coverage checks");
  bh_cmd->add_option("--out", bh_out, "output directory")->required();
  bh_cmd->add_option("--period", bh_period, "series period in seconds (default 86400)");
  bh_cmd->add_option("--reorder-slack", slack, "reorder slack in seconds");

  std::string vc_dict, vc_input, vc_out, vc_expect;
  auto* vc_cmd = app.add_subcommand("valley-check", "flag valley-free violations");
  vc_cmd->add_option("--dictionary", vc_dict, "communities dictionary CSV")->required();
  vc_cmd->add_option("--input", vc_input, "update stream, '-' for stdin")->required();
  vc_cmd->add_option("--out", vc_out, "output directory")->required();
  vc_cmd->add_option("--expect", vc_expect, "expected verdicts NDJSON to compare against");
  vc_cmd->add_option("--reorder-slack", slack, "reorder slack in seconds");

  std::string ts_dict, ts_input, ts_location, ts_baseline, ts_output = "-";
  std::int64_t ts_bin = kDefaultBinWidth;
  auto* ts_cmd = app.add_subcommand("timeseries", "per-bin routing activity, optionally by location");
  ts_cmd->add_option("--dictionary", ts_dict, "communities dictionary CSV")->required();
  ts_cmd->add_option("--input", ts_input, "update stream, '-' for stdin")->required();
  ts_cmd->add_option("--location", ts_location, "location filter, scope:label");
  ts_cmd->add_option("--baseline", ts_baseline, "seed last-known communities from a baseline");
  ts_cmd->add_option("--bin-width", ts_bin, "bin width in seconds (default 60)");
  ts_cmd->add_option("--output", ts_output, "CSV path, '-' for stdout");
  ts_cmd->add_option("--reorder-slack", slack, "reorder slack in seconds");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return cmd_run(run);
    if (*gen_cmd) return cmd_generate(scenario, gen_out);
    if (*ds_cmd) return cmd_dict_stats(ds_dict, ds_json);
    if (*bh_cmd) return cmd_blackhole_scan(bh_dict, bh_input, bh_baseline, bh_out, bh_period, slack);
    if (*vc_cmd) return cmd_valley_check(vc_dict, vc_input, vc_out, vc_expect, slack);
    if (*ts_cmd) {
      if (ts_bin <= 0) {
        throw ConfigError("bin width must be > 0");
      }
      return cmd_timeseries(ts_dict, ts_input, ts_location, ts_baseline, ts_bin, ts_output, slack);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DictionaryError& e) {
    std::cerr << "dictionary error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const synth::ScenarioError& e) {
    std::cerr << "scenario error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
