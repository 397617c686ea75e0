#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "bgpcomm/json_io.hpp"

namespace bgpcomm::synth {

enum class InjectionKind : std::uint8_t { ixp_outage, blackhole_burst, valley_violation, noise_flaps };

std::string_view to_string(InjectionKind k);

struct Injection {
  InjectionKind kind = InjectionKind::ixp_outage;
  Timestamp at = 0;
  /// ixp-outage: routes withdrawn; noise-flaps: routes flapped.
  std::size_t routes = 0;
  /// ixp-outage: IXP label.
  std::string location = "FranceIX";
  /// blackhole-burst.
  std::size_t tagged = 0;
  std::size_t untagged = 0;
  std::int64_t spread = 0;
  /// valley-violation.
  std::size_t count = 1;
};

struct Scenario {
  std::uint64_t seed = 1;
  Timestamp start_ts = 1519862400;
  std::size_t baseline_routes = 1000;
  std::size_t peers = 4;
  std::uint32_t announce_repeats = 2;
  /// Identical re-announcements of untouched routes after the window.
  std::size_t background_updates = 0;
  std::size_t malformed_lines = 0;

  // Engine parameters the ground truth is computed for.
  std::int64_t bin_width = 60;
  std::int64_t init_window = 3600;
  std::uint32_t min_observations = 2;
  std::size_t threshold = 10;
  double concentration_min = 0.5;
  std::size_t attributed_min = 10;
  std::int64_t blackhole_period = 86400;

  std::vector<Injection> injections;
};

class ScenarioError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

Scenario scenario_from_json(const Json& j);
Json scenario_to_json(const Scenario& sc);

struct GeneratedScenario {
  std::string updates;     // NDJSON, one record per line
  std::string dictionary;  // CSV
  Json ground_truth;
};

/// Deterministic: equal scenarios produce byte-identical outputs.
GeneratedScenario generate(const Scenario& sc);

/// Writes updates.ndjson, dictionary.csv and ground_truth.json.
void write_scenario(const GeneratedScenario& g, const std::filesystem::path& dir);

/// Communities with fixed meanings in every generated dictionary.
inline constexpr std::uint16_t kBlackholeAsn = 64501;
inline constexpr std::uint16_t kBlackholeValue = 666;
inline constexpr std::uint16_t kCustomerValue = 100;
inline constexpr std::uint16_t kPeerValue = 200;
inline constexpr std::uint16_t kProviderValue = 300;
inline constexpr std::uint16_t kLocationBase = 1000;

/// Portable bounded draw; std distributions are implementation-defined.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound);

}  // namespace bgpcomm::synth
