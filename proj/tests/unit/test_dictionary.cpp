#include <doctest.h>

#include <random>
#include <sstream>

#include "bgpcomm/dictionary.hpp"
#include "oracles.hpp"

using namespace bgpcomm;

namespace {

constexpr const char* kHeader = "asn,value_spec,category,subtype,location,description\n";

Dictionary load_text(const std::string& body, LoadOptions opts = {}) {
  std::istringstream in(kHeader + body);
  return load_dictionary(in, opts);
}

std::size_t error_line(const std::string& body) {
  try {
    load_text(body);
  } catch (const DictionaryError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("single record load") {
  auto d = load_text("3356,2003,geolocation,city,\"Frankfurt\",\"provider docs\"\n");
  REQUIRE(d.size() == 1);
  const auto& e = d.entries()[0];
  CHECK(e.asn == 3356);
  CHECK(e.spec == ValueSpec::exact(2003));
  CHECK(e.meaning == Meaning{Geolocation{GeoScope::city, "Frankfurt"}});
  CHECK(e.description == "provider docs");
}

TEST_CASE("same-meaning overlap loads") {
  auto d = load_text("100,666,blackhole,,,\"\"\n100,600-700,blackhole,,,\"\"\n");
  CHECK(d.size() == 2);
  CHECK(d.lookup({100, 666}) == MeaningSet{Blackhole{}});
  CHECK(d.lookup({100, 650}) == MeaningSet{Blackhole{}});
}

TEST_CASE("conflicting overlap within a category is a load error") {
  CHECK_THROWS_AS(load_text("100,666,relationship,customer,,\"\"\n100,600-700,relationship,peer,,\"\"\n"),
                  DictionaryError);
  CHECK_THROWS_AS(load_text("100,0-10,relationship,customer,,\"\"\n100,5-20,relationship,peer,,\"\"\n"),
                  DictionaryError);
  CHECK_THROWS_AS(load_text("100,5,relationship,customer,,\"\"\n100,5,relationship,peer,,\"\"\n"),
                  DictionaryError);
}

TEST_CASE("overlap across categories is allowed") {
  auto d = load_text("100,666,blackhole,,,\"\"\n100,600-700,geolocation,ixp,\"X\",\"\"\n");
  CHECK(d.lookup({100, 666}) == MeaningSet{Blackhole{}, Geolocation{GeoScope::ixp, "X"}});
}

TEST_CASE("different ASNs never conflict") {
  auto d = load_text("100,5,relationship,customer,,\"\"\n101,5,relationship,peer,,\"\"\n");
  CHECK(d.size() == 2);
}

TEST_CASE("lookup examples") {
  auto d = load_text("3356,2003,geolocation,city,\"Frankfurt\",\"provider docs\"\n");
  CHECK(d.lookup({3356, 2003}) == MeaningSet{Geolocation{GeoScope::city, "Frankfurt"}});
  CHECK(d.lookup({3356, 9999}).empty());
  CHECK(d.lookup({3357, 2003}).empty());
}

TEST_CASE("exact entry takes precedence over a range of the same category") {
  std::vector<DictionaryEntry> entries{
      {100, ValueSpec::exact(50), Geolocation{GeoScope::ixp, "A"}, ""},
      {100, ValueSpec{0, 100}, Geolocation{GeoScope::ixp, "B"}, ""},
  };
  Dictionary d(entries, OverlapPolicy::exact_overrides_range);
  CHECK(d.lookup({100, 50}) == MeaningSet{Geolocation{GeoScope::ixp, "A"}});
  CHECK(d.lookup({100, 51}) == MeaningSet{Geolocation{GeoScope::ixp, "B"}});
  CHECK(d.matching_entries({100, 50}) == std::vector<std::size_t>{0});

  // The same pair is a conflict under the default policy.
  CHECK_THROWS_AS((void)Dictionary(entries), DictionaryError);

  std::istringstream in(std::string(kHeader) + "100,50,geolocation,ixp,\"A\",\"\"\n100,0-100,geolocation,ixp,\"B\",\"\"\n");
  LoadOptions opts;
  opts.policy = OverlapPolicy::exact_overrides_range;
  CHECK(load_dictionary(in, opts).lookup({100, 50}) == MeaningSet{Geolocation{GeoScope::ixp, "A"}});
}

TEST_CASE("exact_overrides_range still rejects range-range and exact-exact conflicts") {
  CHECK_THROWS_AS(Dictionary({{1, {0, 10}, Relationship{RelationshipRole::peer}, ""},
                              {1, {5, 20}, Relationship{RelationshipRole::customer}, ""}},
                             OverlapPolicy::exact_overrides_range),
                  DictionaryError);
  CHECK_THROWS_AS(Dictionary({{1, ValueSpec::exact(3), Relationship{RelationshipRole::peer}, ""},
                              {1, ValueSpec::exact(3), Relationship{RelationshipRole::customer}, ""}},
                             OverlapPolicy::exact_overrides_range),
                  DictionaryError);
}

TEST_CASE("exact precedence only suppresses the same category") {
  Dictionary d({{100, ValueSpec::exact(50), Blackhole{}, ""},
                {100, ValueSpec{0, 100}, Geolocation{GeoScope::ixp, "B"}, ""}});
  CHECK(d.lookup({100, 50}) == MeaningSet{Blackhole{}, Geolocation{GeoScope::ixp, "B"}});
}

TEST_CASE("annotate examples") {
  auto d = load_text(
      "3356,2003,geolocation,city,\"Frankfurt\",\"\"\n"
      "100,666,blackhole,,,\"\"\n"
      "100,667,blackhole,,,\"\"\n");
  CHECK(d.annotate({}).empty());
  CHECK(d.annotate({{3356, 2003}}) == MeaningSet{Geolocation{GeoScope::city, "Frankfurt"}});
  CHECK(d.annotate({{100, 666}, {100, 667}}) == MeaningSet{Blackhole{}});
}

TEST_CASE("load errors carry the offending line number") {
  CHECK(error_line("1,2,geolocation,city,\"X\",\"\"\n1,3,nonsense,,,\"\"\n") == 3);
  CHECK(error_line("1,70000,blackhole,,,\"\"\n") == 2);
  CHECK(error_line("1,9-3,blackhole,,,\"\"\n") == 2);
  CHECK(error_line("70000,1,blackhole,,,\"\"\n") == 2);
  CHECK(error_line("1,2,geolocation,city,,\"\"\n") == 2);
  CHECK(error_line("1,2,geolocation,moon,\"X\",\"\"\n") == 2);
  CHECK(error_line("1,2,relationship,sibling,,\"\"\n") == 2);
  CHECK(error_line("1,2,relationship,customer,\"X\",\"\"\n") == 2);
  CHECK(error_line("1,2,blackhole,customer,,\"\"\n") == 2);
  CHECK(error_line("1,2,action,prepend\n") == 2);
  CHECK(error_line("# comment\n1,2,action,teleport,,\"\"\n") == 3);
  CHECK(error_line("1,2,action,prepend,,\"unterminated\n") == 2);
}

TEST_CASE("header, comments and quoting") {
  std::istringstream no_header("1,2,blackhole,,,\"\"\n");
  CHECK_THROWS_AS(load_dictionary(no_header), DictionaryError);

  std::istringstream empty("");
  CHECK_THROWS_AS(load_dictionary(empty), DictionaryError);

  auto d = load_text(
      "# operator docs\n"
      "\n"
      "1,2,geolocation,ixp,\"Paris, FR \"\"Equinix\"\"\",\"a, b\"\n"
      "1,3,action,selective-advertisement,,no quotes\n");
  REQUIRE(d.size() == 2);
  CHECK(d.entries()[0].meaning == Meaning{Geolocation{GeoScope::ixp, "Paris, FR \"Equinix\""}});
  CHECK(d.entries()[0].description == "a, b");
  CHECK(d.entries()[1].meaning == Meaning{RoutingAction{ActionKind::selective_advertisement}});

  std::istringstream crlf(std::string("asn,value_spec,category,subtype,location,description\r\n") +
                          "1,2,blackhole,,,\"\"\r\n");
  CHECK(load_dictionary(crlf).size() == 1);

  std::istringstream bom(std::string("\xEF\xBB\xBF") + kHeader + "1,2,blackhole,,,\"\"\n");
  CHECK(load_dictionary(bom).size() == 1);
}

TEST_CASE("write_dictionary round-trips") {
  auto d = load_text(
      "1,2,geolocation,ixp,\"Paris, FR\",\"x\"\n"
      "1,10-20,relationship,peer,,\"\"\n"
      "7,666,blackhole,,,\"rtbh\"\n"
      "7,50-59,action,local-preference,,\"\"\n"
      "7,71,action,prepend,,\"\"\n");
  std::ostringstream out;
  write_dictionary(out, d);
  std::istringstream in(out.str());
  auto again = load_dictionary(in);
  REQUIRE(again.size() == d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(again.entries()[i].asn == d.entries()[i].asn);
    CHECK(again.entries()[i].spec == d.entries()[i].spec);
    CHECK(again.entries()[i].meaning == d.entries()[i].meaning);
    CHECK(again.entries()[i].description == d.entries()[i].description);
  }
}

TEST_CASE("dictionary_stats examples") {
  auto one = load_text("1,666,blackhole,,,\"\"\n");
  auto h = dictionary_stats(one);
  CHECK(h.total == 1);
  CHECK(h.count(Category::blackhole) == 1);
  CHECK(h.fraction(Category::blackhole) == doctest::Approx(1.0));
  CHECK(h.fraction(Category::geolocation) == 0.0);

  auto empty = load_text("");
  auto he = dictionary_stats(empty);
  CHECK(he.total == 0);
  for (std::size_t i = 0; i < kCategoryCount; ++i) {
    CHECK(he.counts[i] == 0);
    CHECK(he.fractions[i] == 0.0);
  }
}

TEST_CASE("mirror fixture: 48 geolocation, 21 relationship, 31 other") {
  std::string body;
  for (int i = 0; i < 48; ++i) {
    body += "64500," + std::to_string(1000 + i) + ",geolocation,city,\"City" + std::to_string(i) + "\",\"\"\n";
  }
  const char* roles[] = {"customer", "peer", "provider"};
  for (int i = 0; i < 21; ++i) {
    body += "64501," + std::to_string(100 + i) + ",relationship," + roles[i % 3] + ",,\"\"\n";
  }
  const char* actions[] = {"selective-advertisement", "local-preference", "prepend"};
  for (int i = 0; i < 31; ++i) {
    if (i < 4) {
      body += "64502," + std::to_string(666 + i) + ",blackhole,,,\"\"\n";
    } else {
      body += "64503," + std::to_string(i) + ",action," + actions[i % 3] + ",,\"\"\n";
    }
  }
  auto h = load_text(body).stats();
  CHECK(h.total == 100);
  CHECK(std::abs(h.fraction(Category::geolocation) - 0.48) <= 1e-9);
  CHECK(std::abs(h.fraction(Category::relationship) - 0.21) <= 1e-9);
  CHECK(std::abs(h.fraction(Category::action) + h.fraction(Category::blackhole) - 0.31) <= 1e-9);
  double sum = 0;
  for (double f : h.fractions) sum += f;
  CHECK(std::abs(sum - 1.0) <= 1e-9);
}

namespace {

Meaning random_meaning(std::mt19937_64& rng) {
  switch (rng() % 4) {
    case 0: return Geolocation{static_cast<GeoScope>(rng() % 4), "L" + std::to_string(rng() % 3)};
    case 1: return Relationship{static_cast<RelationshipRole>(rng() % 3)};
    case 2: return Blackhole{};
    default: return RoutingAction{static_cast<ActionKind>(rng() % 3)};
  }
}

}  // namespace

TEST_CASE("lookup agrees with a linear scan on non-overlapping exact dictionaries") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<DictionaryEntry> entries;
    std::set<std::pair<std::uint16_t, std::uint16_t>> used;
    for (int i = 0; i < 200; ++i) {
      auto asn = static_cast<std::uint16_t>(rng() % 5);
      auto v = static_cast<std::uint16_t>(rng() % 64);
      if (!used.insert({asn, v}).second) continue;
      entries.push_back({asn, ValueSpec::exact(v), random_meaning(rng), ""});
    }
    Dictionary d(entries);
    for (std::uint16_t asn = 0; asn < 6; ++asn) {
      for (std::uint16_t v = 0; v < 70; ++v) {
        REQUIRE(d.lookup({asn, v}) == oracle::linear_lookup(entries, {asn, v}));
      }
    }
  }
}

TEST_CASE("lookup agrees with a linear scan when ranges and exact values mix") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<DictionaryEntry> entries;
    for (int i = 0; i < 12; ++i) {
      auto asn = static_cast<std::uint16_t>(rng() % 2);
      auto lo = static_cast<std::uint16_t>(rng() % 40);
      auto hi = static_cast<std::uint16_t>(rng() % 3 == 0 ? lo : lo + rng() % 10);
      entries.push_back({asn, {lo, hi}, random_meaning(rng), ""});
    }
    std::optional<Dictionary> d;
    try {
      d.emplace(entries, OverlapPolicy::exact_overrides_range);
    } catch (const DictionaryError&) {
      continue;
    }
    for (std::uint16_t asn = 0; asn < 2; ++asn) {
      for (std::uint16_t v = 0; v < 52; ++v) {
        REQUIRE(d->lookup({asn, v}) == oracle::linear_lookup(entries, {asn, v}));
      }
    }
  }
}

TEST_CASE("lookup never invents meanings and annotate is monotone") {
  std::mt19937_64 rng(44);
  std::vector<DictionaryEntry> entries;
  std::set<std::pair<std::uint16_t, std::uint16_t>> used;
  for (int i = 0; i < 120; ++i) {
    auto asn = static_cast<std::uint16_t>(rng() % 4);
    auto v = static_cast<std::uint16_t>(rng() % 50);
    if (used.insert({asn, v}).second) entries.push_back({asn, ValueSpec::exact(v), random_meaning(rng), ""});
  }
  Dictionary d(entries);
  for (int i = 0; i < 500; ++i) {
    Community c{static_cast<std::uint16_t>(rng() % 5), static_cast<std::uint16_t>(rng() % 55)};
    MeaningSet allowed;
    for (const auto& e : entries) {
      if (e.asn == c.asn) allowed.insert(e.meaning);
    }
    for (const auto& m : d.lookup(c)) CHECK(allowed.count(m));

    CommunitySet small, big;
    for (int k = 0; k < 6; ++k) {
      Community x{static_cast<std::uint16_t>(rng() % 4), static_cast<std::uint16_t>(rng() % 50)};
      big.insert(x);
      if (rng() % 2) small.insert(x);
    }
    auto a = d.annotate(small);
    auto b = d.annotate(big);
    CHECK(std::includes(b.begin(), b.end(), a.begin(), a.end()));
  }
}

TEST_CASE("meaning and geolocation text forms") {
  CHECK(to_string(Meaning{Geolocation{GeoScope::ixp, "FranceIX"}}) == "geolocation:ixp:FranceIX");
  CHECK(to_string(Meaning{Blackhole{}}) == "blackhole");
  auto g = parse_geolocation("facility:Equinix PA2: Paris");
  CHECK(g.scope == GeoScope::facility);
  CHECK(g.location == "Equinix PA2: Paris");
  CHECK_THROWS_AS(parse_geolocation("ixp"), DictionaryError);
  CHECK_THROWS_AS(parse_geolocation("ixp:"), DictionaryError);
  CHECK_THROWS_AS(parse_geolocation("galaxy:x"), DictionaryError);
}
