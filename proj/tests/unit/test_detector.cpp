#include <doctest.h>

#include <limits>
#include <random>

#include "bgpcomm/detector.hpp"
#include "builders.hpp"

using namespace bgpcomm;
using build::announce;
using build::comms;
using build::withdraw;

namespace {

constexpr Timestamp kT0 = 1519866000;  // multiple of 60

Dictionary test_dictionary() {
  return Dictionary({
      {64501, ValueSpec::exact(100), Relationship{RelationshipRole::customer}, ""},
      {64501, ValueSpec::exact(200), Relationship{RelationshipRole::peer}, ""},
      {64501, ValueSpec{1000, 1999}, Geolocation{GeoScope::ixp, "FranceIX"}, ""},
  });
}

Baseline make_baseline(unsigned n, const CommunitySet& cs = comms({"64501:100", "64501:1001"})) {
  Baseline b;
  b.window_start = kT0 - 3600;
  b.window_end = kT0;
  for (unsigned i = 0; i < n; ++i) {
    auto u = announce(kT0 - 100, build::nth_prefix(i), cs);
    BaselineEntry e;
    e.key = route_key(u);
    e.path = u.path;
    e.communities = cs;
    e.observations = 2;
    e.first_seen = e.last_seen = u.timestamp;
    b.entries.emplace(e.key, e);
  }
  return b;
}

DetectorConfig cfg(std::size_t threshold) {
  DetectorConfig c;
  c.threshold = threshold;
  return c;
}

}  // namespace

TEST_CASE("process_update examples") {
  auto dict = test_dictionary();
  Detector d(make_baseline(1, comms({"64501:100"})), dict);
  const std::string p = build::nth_prefix(0);

  SUBCASE("withdrawal") {
    auto dev = d.process_update(withdraw(kT0 + 1, p));
    REQUIRE(dev);
    CHECK(dev->kind == DeviationKind::withdrawal);
    CHECK(dev->old_communities == comms({"64501:100"}));
    CHECK(dev->new_communities.empty());
    CHECK(dev->removed_meanings == MeaningSet{Relationship{RelationshipRole::customer}});
    CHECK(dev->added_meanings.empty());
    CHECK(dev->bin == bin_index(kT0 + 1, 60));
  }
  SUBCASE("community change") {
    auto dev = d.process_update(announce(kT0 + 1, p, comms({"64501:200"})));
    REQUIRE(dev);
    CHECK(dev->kind == DeviationKind::community_change);
    CHECK(dev->old_communities == comms({"64501:100"}));
    CHECK(dev->new_communities == comms({"64501:200"}));
    CHECK(dev->removed_meanings == MeaningSet{Relationship{RelationshipRole::customer}});
    CHECK(dev->added_meanings == MeaningSet{Relationship{RelationshipRole::peer}});
  }
  SUBCASE("identical re-announcement") {
    CHECK_FALSE(d.process_update(announce(kT0 + 1, p, comms({"64501:100"}))));
  }
  SUBCASE("keys outside the baseline") {
    CHECK_FALSE(d.process_update(withdraw(kT0 + 1, build::nth_prefix(9))));
    CHECK_FALSE(d.process_update(announce(kT0 + 1, p, comms({"64501:100"}), {1}, build::peer(1, "x"))));
  }
}

TEST_CASE("path changes are reported only when enabled") {
  auto dict = test_dictionary();
  const std::string p = build::nth_prefix(0);
  Detector off(make_baseline(1), dict);
  CHECK_FALSE(off.process_update(announce(kT0 + 1, p, comms({"64501:100", "64501:1001"}), {64496, 9, 64501})));

  DetectorConfig c;
  c.detect_path_changes = true;
  Detector on(make_baseline(1), dict, c);
  // Prepending alone is not a path change.
  CHECK_FALSE(on.process_update(
      announce(kT0 + 1, p, comms({"64501:100", "64501:1001"}), {64496, 64500, 64500, 64501})));
  auto dev = on.process_update(announce(kT0 + 2, p, comms({"64501:100", "64501:1001"}), {64496, 9, 64501}));
  REQUIRE(dev);
  CHECK(dev->kind == DeviationKind::path_change);
  REQUIRE(dev->new_path);
  CHECK(dev->new_path->hops == std::vector<Asn>{64496, 9, 64501});
}

TEST_CASE("close_bin threshold boundaries") {
  auto dict = test_dictionary();
  for (auto [n, fires] : {std::pair{12u, true}, std::pair{9u, false}, std::pair{10u, true}}) {
    Detector d(make_baseline(20), dict, cfg(10));
    for (unsigned i = 0; i < n; ++i) d.process_update(withdraw(kT0 + 5, build::nth_prefix(i)));
    auto s = d.close_bin(bin_index(kT0, 60));
    CHECK(s.has_value() == fires);
    if (s) {
      CHECK(s->count == n);
      CHECK(s->threshold == 10);
      CHECK(s->bin_start == kT0);
      CHECK(s->bin_end == kT0 + 60);
      CHECK(s->deviations.size() == n);
    }
  }
}

TEST_CASE("flaps coalesce per key and keep the latest deviation") {
  auto dict = test_dictionary();
  Detector d(make_baseline(3), dict, cfg(1));
  const std::string p = build::nth_prefix(0);
  for (int i = 0; i < 50; ++i) {
    d.process_update(withdraw(kT0 + i % 50, p));
    d.process_update(announce(kT0 + i % 50, p, comms({"64501:200"})));
  }
  auto s = d.close_bin(bin_index(kT0, 60));
  REQUIRE(s);
  CHECK(s->count == 1);
  REQUIRE(s->deviations.size() == 1);
  CHECK(s->deviations[0].kind == DeviationKind::community_change);
  CHECK(s->deviations[0].old_communities == comms({"64501:100", "64501:1001"}));
  CHECK(s->deviations[0].new_communities == comms({"64501:200"}));
  // Re-admitted with the new state: the same announcement no longer deviates.
  CHECK_FALSE(d.process_update(announce(kT0 + 61, p, comms({"64501:200"}))));
  CHECK(d.process_update(announce(kT0 + 62, p, comms({"64501:100", "64501:1001"}))));
}

TEST_CASE("withdraw then identical re-announce in one bin counts once and keeps the key") {
  auto dict = test_dictionary();
  Detector d(make_baseline(2), dict, cfg(1));
  const std::string p = build::nth_prefix(0);
  d.process_update(withdraw(kT0 + 1, p));
  CHECK_FALSE(d.process_update(announce(kT0 + 2, p, comms({"64501:100", "64501:1001"}))));
  auto s = d.close_bin(bin_index(kT0, 60));
  REQUIRE(s);
  CHECK(s->count == 1);
  CHECK(s->deviations[0].kind == DeviationKind::withdrawal);
  CHECK(d.monitored().size() == 2);
}

TEST_CASE("a final withdrawal removes the key from the monitored baseline") {
  auto dict = test_dictionary();
  Detector d(make_baseline(2), dict, cfg(5));
  const std::string p = build::nth_prefix(0);
  d.process_update(withdraw(kT0 + 1, p));
  CHECK_FALSE(d.close_bin(bin_index(kT0, 60)));  // below threshold, still re-admits
  CHECK(d.monitored().size() == 1);
  CHECK_FALSE(d.process_update(withdraw(kT0 + 70, p)));
  CHECK_FALSE(d.process_update(announce(kT0 + 71, p, comms({"64501:200"}))));
}

TEST_CASE("signals are emitted in increasing bin order and closed bins cannot reopen") {
  auto dict = test_dictionary();
  Detector d(make_baseline(40), dict, cfg(1));
  std::vector<BinIndex> bins;
  for (unsigned i = 0; i < 40; ++i) {
    Timestamp t = kT0 + static_cast<Timestamp>(i) * 17;
    d.process_update(withdraw(t, build::nth_prefix(i)));
    for (auto& s : d.advance_to(t)) bins.push_back(s.bin);
  }
  for (auto& s : d.flush()) bins.push_back(s.bin);
  CHECK(std::is_sorted(bins.begin(), bins.end()));
  CHECK(std::adjacent_find(bins.begin(), bins.end()) == bins.end());
  CHECK(bins.size() == static_cast<std::size_t>(bin_index(kT0 + 39 * 17, 60) - bin_index(kT0, 60) + 1));
  REQUIRE(d.last_closed());
  CHECK_THROWS_AS(d.close_bin(*d.last_closed()), BinClosedError);
  // Updates for closed bins are counted, not applied.
  CHECK_FALSE(d.process_update(withdraw(kT0, build::nth_prefix(39))));
  CHECK(d.late_updates() == 1);
}

TEST_CASE("close_bin refuses to skip an open bin") {
  auto dict = test_dictionary();
  Detector d(make_baseline(2), dict, cfg(1));
  d.process_update(withdraw(kT0 + 1, build::nth_prefix(0)));
  CHECK_THROWS_AS(d.close_bin(bin_index(kT0, 60) + 1), BinClosedError);
  CHECK(d.close_bin(bin_index(kT0, 60)));
}

TEST_CASE("advance_to honours the reorder slack") {
  auto dict = test_dictionary();
  DetectorConfig c = cfg(1);
  c.reorder_slack = 30;
  Detector d(make_baseline(3), dict, c);
  d.process_update(withdraw(kT0 + 10, build::nth_prefix(0)));
  CHECK(d.advance_to(kT0 + 60 + 29).empty());
  // A straggler within the slack still lands in the open bin.
  d.process_update(withdraw(kT0 + 59, build::nth_prefix(1)));
  auto out = d.advance_to(kT0 + 60 + 30);
  REQUIRE(out.size() == 1);
  CHECK(out[0].count == 2);
}

TEST_CASE("count equals distinct keys among deviations") {
  auto dict = test_dictionary();
  std::mt19937_64 rng(8);
  Detector d(make_baseline(30), dict, cfg(1));
  Timestamp t = kT0;
  for (int i = 0; i < 3000; ++i) {
    t += static_cast<Timestamp>(rng() % 3);
    auto p = build::nth_prefix(static_cast<unsigned>(rng() % 30));
    switch (rng() % 3) {
      case 0: d.process_update(withdraw(t, p)); break;
      case 1: d.process_update(announce(t, p, comms({"64501:200"}))); break;
      default: d.process_update(announce(t, p, comms({"64501:100", "64501:1001"}))); break;
    }
    for (const auto& s : d.advance_to(t)) {
      std::set<RouteKey> keys;
      for (const auto& dev : s.deviations) {
        keys.insert(dev.key);
        CHECK(dev.bin == s.bin);
        if (dev.kind == DeviationKind::community_change) CHECK(dev.old_communities != dev.new_communities);
        if (dev.kind == DeviationKind::withdrawal) CHECK(dev.new_communities.empty());
      }
      CHECK(s.count == keys.size());
      CHECK(s.count == s.deviations.size());
      CHECK(s.count >= s.threshold);
    }
  }
}

TEST_CASE("threshold one and an unreachable threshold") {
  auto dict = test_dictionary();
  for (std::size_t threshold : {std::size_t{1}, std::numeric_limits<std::size_t>::max()}) {
    Detector d(make_baseline(10), dict, cfg(threshold));
    std::size_t signals = 0;
    std::size_t bins_with_deviation = 0;
    for (unsigned i = 0; i < 10; ++i) {
      Timestamp t = kT0 + static_cast<Timestamp>(i) * 120;
      d.process_update(withdraw(t, build::nth_prefix(i)));
      ++bins_with_deviation;
      signals += d.advance_to(t + 200).size();
    }
    signals += d.flush().size();
    CHECK(signals == (threshold == 1 ? bins_with_deviation : 0));
  }
}

TEST_CASE("relative threshold scales with the baseline") {
  auto dict = test_dictionary();
  DetectorConfig c;
  c.relative_threshold = 0.05;
  CHECK(Detector(make_baseline(1000), dict, c).effective_threshold() == 50);
  CHECK(Detector(make_baseline(1001), dict, c).effective_threshold() == 51);
  CHECK(Detector(make_baseline(0), dict, c).effective_threshold() == 1);
  c.relative_threshold = 0.0;
  CHECK_THROWS_AS(Detector(make_baseline(1), dict, c), std::invalid_argument);
  c.relative_threshold = 1.5;
  CHECK_THROWS_AS(Detector(make_baseline(1), dict, c), std::invalid_argument);
}

TEST_CASE("invalid detector configuration") {
  auto dict = test_dictionary();
  DetectorConfig c;
  c.bin_width = 0;
  CHECK_THROWS_AS(Detector(make_baseline(1), dict, c), std::invalid_argument);
  c = {};
  c.threshold = 0;
  CHECK_THROWS_AS(Detector(make_baseline(1), dict, c), std::invalid_argument);
  c = {};
  c.reorder_slack = -1;
  CHECK_THROWS_AS(Detector(make_baseline(1), dict, c), std::invalid_argument);
}

TEST_CASE("replaying the same stream gives the same signals") {
  auto dict = test_dictionary();
  auto run = [&] {
    std::mt19937_64 rng(77);
    Detector d(make_baseline(50), dict, cfg(3));
    std::vector<std::pair<BinIndex, std::size_t>> out;
    Timestamp t = kT0;
    for (int i = 0; i < 2000; ++i) {
      t += static_cast<Timestamp>(rng() % 4);
      auto p = build::nth_prefix(static_cast<unsigned>(rng() % 50));
      if (rng() % 2) {
        d.process_update(withdraw(t, p));
      } else {
        d.process_update(announce(t, p, comms({"64501:100", "64501:1001"})));
      }
      for (auto& s : d.advance_to(t)) out.emplace_back(s.bin, s.count);
    }
    for (auto& s : d.flush()) out.emplace_back(s.bin, s.count);
    return out;
  };
  CHECK(run() == run());
}
