#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "tierlab/errors.hpp"
#include "tierlab/io_util.hpp"
#include "tierlab/odm.hpp"
#include "tierlab/synth.hpp"

using namespace tierlab;

namespace {

GeoHierarchy synth_geo() {
  return GeoHierarchy::from_rows({
      {"IT", "country", ""},
      {"IT_A", "region", "IT"},
      {"IT_B", "region", "IT"},
      {"IT_C", "region", "IT"},
      {"IT_A_P1", "province", "IT_A"},
      {"IT_A_P2", "province", "IT_A"},
      {"IT_B_P3", "province", "IT_B"},
      {"IT_C_P4", "province", "IT_C"},
  });
}

struct Fixture {
  GeoHierarchy geo = synth_geo();
  TierTimeline timeline;
  HolidayCalendar holidays{{parse_day("2020-11-11")}};  // a Wednesday
  ScenarioConfig cfg;
};

// IT_A steps yellow -> red on Nov 9, IT_B stays orange; five flows covering
// internal, intra-region, cross-region and both EXT directions
Fixture make_fixture() {
  Fixture f;
  const Day first = parse_day("2020-11-02");
  const Day last = parse_day("2020-11-15");
  f.timeline = TierTimeline::from_intervals({
      {"IT_A",
       {{first, parse_day("2020-11-08"), Tier::Yellow},
        {parse_day("2020-11-09"), last, Tier::Red}}},
      {"IT_B", {{first, last, Tier::Orange}}},
  });
  f.cfg.seed = 9;
  f.cfg.bucket = Bucket::Day;
  f.cfg.noise_cv = 0.0;
  f.cfg.relaxation_per_day = 0.01;
  f.cfg.holiday_multiplier = 0.5;
  f.cfg.weekly_profile = {1.06, 1.08, 1.07, 1.05, 1.02, 0.90, 0.82};
  f.cfg.tier_multipliers = {
      {Tier::Yellow, 1.0}, {Tier::Orange, 0.8}, {Tier::Red, 0.6}};
  f.cfg.base_flows = {
      {{"IT_A_P1", "IT_A_P1"}, 1000.0}, {{"IT_A_P1", "IT_A_P2"}, 300.0},
      {{"IT_B_P3", "IT_A_P1"}, 200.0},  {{"EXT", "IT_B_P3"}, 100.0},
      {{"IT_A_P2", "EXT"}, 50.0},
  };
  f.cfg.first_day = first;
  f.cfg.last_day = last;
  return f;
}

// the generator's expected-count formula, recomputed independently
double hand_mean(const Fixture& f, const std::string& drive_region, Day d,
                 double base) {
  const TierInterval& iv = f.timeline.interval_at(drive_region, d);
  const auto mult = f.cfg.tier_multipliers.at(iv.tier);
  const double relax = std::pow(1 + f.cfg.relaxation_per_day, d.n - iv.start.n);
  const double holiday =
      f.holidays.is_holiday(d) ? f.cfg.holiday_multiplier : 1.0;
  return base * f.cfg.weekly_profile[d.weekday_mon0()] * mult * relax * holiday;
}

std::string write_tmp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << text;
  return path.string();
}

}  // namespace

TEST_CASE("same seed, same bytes; different seed, same manifest echoes") {
  Fixture f = make_fixture();
  f.cfg.noise_cv = 0.25;
  const SynthResult a = gen_synthetic(f.cfg, f.geo, f.timeline, f.holidays);
  const SynthResult b = gen_synthetic(f.cfg, f.geo, f.timeline, f.holidays);
  CHECK(odm_to_csv(a.records) == odm_to_csv(b.records));
  CHECK(manifest_to_json(a.manifest) == manifest_to_json(b.manifest));

  f.cfg.seed = 10;
  const SynthResult c = gen_synthetic(f.cfg, f.geo, f.timeline, f.holidays);
  CHECK(odm_to_csv(a.records) != odm_to_csv(c.records));
  // the echo part of the manifest never depends on the seed
  REQUIRE(a.manifest.regions.size() == c.manifest.regions.size());
  for (const auto& [region, rows] : a.manifest.regions) {
    const auto& other = c.manifest.regions.at(region);
    REQUIRE(rows.size() == other.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(rows[i].expected_total == other[i].expected_total);
      CHECK(rows[i].relaxation_factor == other[i].relaxation_factor);
    }
  }
}

TEST_CASE("records come out sorted by day, origin, destination") {
  const Fixture f = make_fixture();
  const SynthResult r = gen_synthetic(f.cfg, f.geo, f.timeline, f.holidays);
  CHECK(r.records.size() == 5 * 14);  // five flows, fourteen days
  CHECK(r.manifest.record_count == r.records.size());
  CHECK(r.manifest.flow_count == 5);
  for (std::size_t i = 1; i < r.records.size(); ++i) {
    const auto& p = r.records[i - 1];
    const auto& q = r.records[i];
    const auto kp = std::tuple(p.period_start.day(), p.origin, p.destination);
    const auto kq = std::tuple(q.period_start.day(), q.origin, q.destination);
    CHECK(kp < kq);
  }
  for (const auto& rec : r.records) {
    CHECK(rec.bucket == Bucket::Day);
    CHECK(rec.period_start.at_midnight());
  }
}

TEST_CASE("noise-free counts match the formula and the manifest echoes") {
  const Fixture f = make_fixture();
  const SynthResult r = gen_synthetic(f.cfg, f.geo, f.timeline, f.holidays);

  // every record equals the rounded expected count
  for (const auto& rec : r.records) {
    const std::string drive =
        rec.origin == "EXT" ? "IT_B" : rec.origin.substr(0, 4);
    const double base = f.cfg.base_flows.at({rec.origin, rec.destination});
    const double mean = hand_mean(f, drive, rec.period_start.day(), base);
    CHECK(rec.count == std::llround(mean));
  }

  // only touched regions are echoed, never EXT or bystanders
  REQUIRE(r.manifest.regions.size() == 2);
  CHECK(r.manifest.regions.count("IT_A") == 1);
  CHECK(r.manifest.regions.count("IT_B") == 1);
  CHECK(r.manifest.regions.count("IT_C") == 0);

  const Day first = f.cfg.first_day;
  const auto& rows_a = r.manifest.regions.at("IT_A");
  const auto& rows_b = r.manifest.regions.at("IT_B");
  REQUIRE(rows_a.size() == 14);
  REQUIRE(rows_b.size() == 14);
  for (int i = 0; i < 14; ++i) {
    const Day d = first.plus(i);
    const RegionDayEcho& a = rows_a[i];
    CHECK(a.day == d);
    CHECK(a.tier == f.timeline.tier_at("IT_A", d));
    CHECK(a.weekly_factor == f.cfg.weekly_profile[d.weekday_mon0()]);
    CHECK(a.holiday_factor == (d == parse_day("2020-11-11") ? 0.5 : 1.0));
    // internal: P1->P1 and P1->P2; inward: P3->P1; outward: P2->EXT
    CHECK(a.expected_internal ==
          std::llround(hand_mean(f, "IT_A", d, 1000)) +
              std::llround(hand_mean(f, "IT_A", d, 300)));
    CHECK(a.expected_inward == std::llround(hand_mean(f, "IT_B", d, 200)));
    CHECK(a.expected_outward == std::llround(hand_mean(f, "IT_A", d, 50)));
    CHECK(a.expected_total ==
          a.expected_internal + a.expected_inward + a.expected_outward);

    const RegionDayEcho& b = rows_b[i];
    CHECK(b.tier == Tier::Orange);
    CHECK(b.tier_multiplier == 0.8);
    CHECK(b.expected_internal == 0);
    CHECK(b.expected_inward == std::llround(hand_mean(f, "IT_B", d, 100)));
    CHECK(b.expected_outward == std::llround(hand_mean(f, "IT_B", d, 200)));
  }

  // the within-tier growth restarts at each interval boundary
  CHECK(rows_a[7].relaxation_factor == 1.0);  // Nov 9, first red day
  CHECK(rows_a[8].relaxation_factor == doctest::Approx(1.01).epsilon(1e-15));
  CHECK(rows_a[6].relaxation_factor ==
        doctest::Approx(std::pow(1.01, 6)).epsilon(1e-15));
}

TEST_CASE("hourly buckets split the day through the curfew profile") {
  Fixture f = make_fixture();
  f.cfg.bucket = Bucket::Hour;
  f.cfg.noise_cv = 0.0;
  f.cfg.relaxation_per_day = 0.0;
  f.cfg.holiday_multiplier = 1.0;
  f.cfg.weekly_profile = {1, 1, 1, 1, 1, 1, 1};
  f.cfg.base_flows = {{{"IT_A_P1", "IT_A_P1"}, 1800.0}};
  f.cfg.last_day = f.cfg.first_day.plus(1);  // two days
  for (int h = 0; h < 24; ++h)
    f.cfg.curfew_hour_profile[h] = h < 6 ? 0.0 : 1.0 / 18;

  const SynthResult r = gen_synthetic(f.cfg, f.geo, f.timeline, f.holidays);
  REQUIRE(r.records.size() == 2 * 24);
  for (int i = 0; i < 48; ++i) {
    const OdmRecord& rec = r.records[i];
    CHECK(rec.bucket == Bucket::Hour);
    const int h = i % 24;
    CHECK(rec.period_start.hour() == h);
    // yellow tier on both days, multiplier 1: day mean 1800, hour mean 100
    CHECK(rec.count == (h < 6 ? 0 : 100));
  }
  // echoes sum the rounded hourly counts
  const auto& rows = r.manifest.regions.at("IT_A");
  CHECK(rows[0].expected_internal == 1800);

  // the manifest json carries the hourly profile only for hourly scenarios
  const auto j = nlohmann::json::parse(manifest_to_json(r.manifest));
  CHECK(j.contains("curfew_hour_profile"));
  const Fixture daily = make_fixture();
  const SynthResult rd =
      gen_synthetic(daily.cfg, daily.geo, daily.timeline, daily.holidays);
  CHECK_FALSE(
      nlohmann::json::parse(manifest_to_json(rd.manifest))
          .contains("curfew_hour_profile"));
}

TEST_CASE("manifest json carries the full configuration") {
  const Fixture f = make_fixture();
  const SynthResult r = gen_synthetic(f.cfg, f.geo, f.timeline, f.holidays);
  const auto j = nlohmann::json::parse(manifest_to_json(r.manifest));
  CHECK(j["schema_version"] == 1);
  CHECK(j["seed"] == 9);
  CHECK(j["bucket"] == "day");
  CHECK(j["first_day"] == "2020-11-02");
  CHECK(j["last_day"] == "2020-11-15");
  CHECK(j["noise_cv"] == 0.0);
  CHECK(j["relaxation_per_day"] == 0.01);
  CHECK(j["weekly_profile"].size() == 7);
  CHECK(j["tier_multipliers"]["red"] == 0.6);
  CHECK(j["flow_count"] == 5);
  CHECK(j["record_count"] == 70);
  REQUIRE(j["regions"]["IT_A"].is_array());
  const auto& row = j["regions"]["IT_A"][0];
  CHECK(row["day"] == "2020-11-02");
  CHECK(row["tier"] == "yellow");
  CHECK(row["expected_total"].is_number_integer());
}

TEST_CASE("configuration sanity is enforced before generating") {
  const Fixture good = make_fixture();
  auto broken = [&](auto mutate) {
    Fixture f = make_fixture();
    mutate(f.cfg);
    return f;
  };
  auto expect_invalid = [&](Fixture f) {
    CHECK_THROWS_AS(gen_synthetic(f.cfg, f.geo, f.timeline, f.holidays),
                    InvalidConfig);
  };
  expect_invalid(broken([](ScenarioConfig& c) { c.noise_cv = 1.0; }));
  expect_invalid(broken([](ScenarioConfig& c) { c.noise_cv = -0.1; }));
  expect_invalid(broken([](ScenarioConfig& c) { c.relaxation_per_day = -1.0; }));
  expect_invalid(broken([](ScenarioConfig& c) { c.holiday_multiplier = 0.0; }));
  expect_invalid(broken([](ScenarioConfig& c) { c.weekly_profile[3] = 0.0; }));
  expect_invalid(broken([](ScenarioConfig& c) { c.tier_multipliers[Tier::Red] = 0.0; }));
  expect_invalid(broken([](ScenarioConfig& c) { c.base_flows.clear(); }));
  expect_invalid(broken([](ScenarioConfig& c) {
    c.base_flows[{"IT_A_P1", "IT_A_P2"}] = -5.0;
  }));
  expect_invalid(broken([](ScenarioConfig& c) {
    c.base_flows[{"EXT", "EXT"}] = 10.0;
  }));
  expect_invalid(broken([](ScenarioConfig& c) {
    c.last_day = c.first_day.plus(-1);
  }));
  expect_invalid(broken([](ScenarioConfig& c) {
    c.bucket = Bucket::Hour;  // all-zero curfew profile
  }));

  // a tier without a multiplier is named when first needed
  Fixture f = make_fixture();
  f.cfg.tier_multipliers.erase(Tier::Orange);
  expect_invalid(std::move(f));

  // days outside the timeline coverage surface as coverage errors
  Fixture g = make_fixture();
  g.cfg.last_day = parse_day("2020-12-31");
  CHECK_THROWS_AS(gen_synthetic(g.cfg, g.geo, g.timeline, g.holidays),
                  DayOutOfCoverage);

  // the untouched fixture generates fine
  CHECK_NOTHROW(gen_synthetic(good.cfg, good.geo, good.timeline, good.holidays));
}

TEST_CASE("bundled staircase scenario expands its flow patterns") {
  const Scenario sc = load_scenario("scenario_staircase.ini");
  CHECK(sc.config.seed == 42);
  CHECK(sc.config.bucket == Bucket::Day);
  CHECK(sc.config.noise_cv == 0.05);
  CHECK(sc.config.relaxation_per_day == 0.01);
  CHECK(sc.config.first_day == parse_day("2020-11-01"));
  CHECK(sc.config.last_day == parse_day("2021-01-31"));
  CHECK(sc.config.weekly_profile[5] == 0.90);
  CHECK(sc.config.tier_multipliers.at(Tier::Red) == 0.63);

  const auto provinces = sc.geo.at_level(Level::Province);
  const auto regions = sc.geo.at_level(Level::Region);
  REQUIRE(provinces.size() == 107);
  REQUIRE(regions.size() == 21);
  std::size_t intra = 0;
  for (const auto& r : regions) {
    const std::size_t n = sc.geo.children(r).size();
    intra += n * (n - 1);
  }
  CHECK(sc.config.base_flows.size() == 107 + intra + 21 * 20);
  CHECK(sc.config.base_flows.size() == 1163);
  CHECK(sc.config.base_flows.at({"IT_LOM_MI", "IT_LOM_MI"}) == 20000.0);
  CHECK(sc.config.base_flows.at({"IT_LOM_MI", "IT_LAZ_RM"}) == 400.0);

  // every region's timeline covers the scenario window
  for (const auto& r : regions) {
    const auto [lo, hi] = sc.timeline.coverage(r);
    CHECK(lo <= sc.config.first_day);
    CHECK(hi >= sc.config.last_day);
  }
}

TEST_CASE("explicit base flows override pattern-generated ones") {
  const std::string path = write_tmp("tierlab_test_override.ini",
                                     "[scenario]\n"
                                     "first_day = 2020-11-01\n"
                                     "last_day = 2020-11-07\n"
                                     "[files]\n"
                                     "areas = italy_areas.csv\n"
                                     "timeline = scenario_staircase_timeline.csv\n"
                                     "[tier_multipliers]\n"
                                     "yellow = 1.0\n"
                                     "[flow_patterns]\n"
                                     "province_internal = 500\n"
                                     "[base_flows]\n"
                                     "IT_LOM_MI:IT_LOM_MI = 9999\n"
                                     "EXT:IT_LAZ_RM = 77\n");
  const Scenario sc = load_scenario(path);
  CHECK(sc.config.base_flows.size() == 108);  // 107 internal + one EXT flow
  CHECK(sc.config.base_flows.at({"IT_LOM_MI", "IT_LOM_MI"}) == 9999.0);
  CHECK(sc.config.base_flows.at({"EXT", "IT_LAZ_RM"}) == 77.0);
  CHECK(sc.config.base_flows.at({"IT_TOS_FI", "IT_TOS_FI"}) == 500.0);
}

TEST_CASE("scenario files reject typos loudly") {
  auto bad = [&](const std::string& name, const std::string& body) {
    return write_tmp(name, body);
  };
  const std::string files =
      "[files]\n"
      "areas = italy_areas.csv\n"
      "timeline = scenario_staircase_timeline.csv\n";
  const std::string scenario =
      "[scenario]\nfirst_day = 2020-11-01\nlast_day = 2020-11-07\n";
  const std::string tiers = "[tier_multipliers]\nyellow = 1.0\n";
  const std::string flows = "[base_flows]\nIT_LOM_MI:IT_LOM_MI = 10\n";
  const std::string valid = files + scenario + tiers + flows;

  CHECK_NOTHROW(load_scenario(bad("tierlab_test_ok.ini", valid)));
  CHECK_THROWS_AS(
      load_scenario(bad("tierlab_test_s1.ini", valid + "[typo_section]\n")),
      InvalidConfig);
  CHECK_THROWS_AS(
      load_scenario(bad("tierlab_test_s2.ini",
                        files + "[scenario]\nfirst_day = 2020-11-01\n"
                                "last_day = 2020-11-07\nspeed = 4\n" +
                            tiers + flows)),
      InvalidConfig);
  CHECK_THROWS_AS(
      load_scenario(bad("tierlab_test_s3.ini",
                        files + "[scenario]\nseed = 1\nseed = 2\n"
                                "first_day = 2020-11-01\n"
                                "last_day = 2020-11-07\n" +
                            tiers + flows)),
      InvalidConfig);
  CHECK_THROWS_AS(
      load_scenario(bad("tierlab_test_s4.ini", scenario + tiers + flows)),
      InvalidConfig);  // no [files]
  CHECK_THROWS_AS(
      load_scenario(bad("tierlab_test_s5.ini",
                        files + "[scenario]\nlast_day = 2020-11-07\n" + tiers +
                            flows)),
      InvalidConfig);  // no first_day
  CHECK_THROWS_AS(
      load_scenario(bad("tierlab_test_s6.ini",
                        valid + "[flow_patterns]\ncounty_mesh = 5\n")),
      InvalidConfig);
  CHECK_THROWS_AS(
      load_scenario(bad("tierlab_test_s7.ini",
                        files + scenario + tiers +
                            "[base_flows]\nIT_LOM_MI = 10\n")),
      InvalidConfig);  // key without colon
  CHECK_THROWS_AS(
      load_scenario(bad("tierlab_test_s8.ini",
                        valid + "[weekly_profile]\nvalues = 1,1,1,1,1,1\n")),
      InvalidConfig);  // six entries
  CHECK_THROWS_AS(
      load_scenario(bad("tierlab_test_s9.ini", "seed = 1\n" + valid)),
      InvalidConfig);  // entry before any section
  CHECK_THROWS_AS(
      load_scenario(bad("tierlab_test_s10.ini", "[oops\n" + valid)),
      InvalidConfig);  // malformed header
  CHECK_THROWS_AS(
      load_scenario(bad("tierlab_test_s11.ini",
                        files + scenario +
                            "[tier_multipliers]\npurple = 1.0\n" + flows)),
      BadFile);  // unknown tier name

  // range errors surface when generating, not when loading
  const Scenario noisy = load_scenario(
      bad("tierlab_test_s12.ini",
          files + "[scenario]\nnoise_cv = 1.0\nfirst_day = 2020-11-01\n"
                  "last_day = 2020-11-07\n" +
              tiers + flows));
  CHECK_THROWS_AS(gen_synthetic(noisy), InvalidConfig);
}
