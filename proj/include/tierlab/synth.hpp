#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tierlab/calendar.hpp"
#include "tierlab/geo.hpp"
#include "tierlab/odm.hpp"
#include "tierlab/tiers.hpp"

namespace tierlab {

// Ground-truth parameters of a synthetic scenario. The expected count of a
// flow (o, d) on a day is
//
//   base(o,d) * weekly_profile[weekday(day)]
//             * tier_multipliers[tier(region(o), day)]
//             * (1 + relaxation_per_day)^(days since the region's tier began)
//             * holiday_multiplier        (on bank holidays)
//
// hourly buckets further multiply by curfew_hour_profile[hour]. The realized
// count is expected * (1 + gaussian(0, noise_cv)), rounded to the nearest
// non-negative integer. For EXT origins the destination's region drives the
// tier factors.
struct ScenarioConfig {
  std::uint64_t seed = 1;
  Bucket bucket = Bucket::Day;
  double noise_cv = 0.0;  // in [0, 1)
  double relaxation_per_day = 0.0;
  double holiday_multiplier = 1.0;
  std::array<double, 7> weekly_profile{1, 1, 1, 1, 1, 1, 1};  // Mon..Sun
  std::array<double, 24> curfew_hour_profile{};  // hourly shares of the day
  std::map<Tier, double> tier_multipliers;
  std::map<std::pair<std::string, std::string>, double> base_flows;
  Day first_day;
  Day last_day;
};

// Per-(region, day) echo of every injected factor plus the noise-free
// realized counts (per-flow rounding, then summed by direction). A pure
// function of the config, independent of the seed.
struct RegionDayEcho {
  Day day;
  Tier tier = Tier::Yellow;
  double tier_multiplier = 1;
  double relaxation_factor = 1;
  double weekly_factor = 1;
  double holiday_factor = 1;
  std::int64_t expected_internal = 0;
  std::int64_t expected_inward = 0;
  std::int64_t expected_outward = 0;
  std::int64_t expected_total = 0;
};

struct ScenarioManifest {
  ScenarioConfig config;  // base_flows echoed as flow_count only in JSON
  std::size_t flow_count = 0;
  std::size_t record_count = 0;
  std::map<std::string, std::vector<RegionDayEcho>> regions;
};

std::string manifest_to_json(const ScenarioManifest& m);

// Scenario file: INI-style sections. [scenario] seed/bucket/noise_cv/
// relaxation_per_day/holiday_multiplier/first_day/last_day; [files] areas/
// timeline/holidays (relative to the config file, else the data dir);
// [tier_multipliers] per tier; [weekly_profile] and [curfew_hour_profile]
// comma lists under "values"; [base_flows] explicit "O:D = count" entries;
// [flow_patterns] province_internal / intra_region_pairs / capital_mesh
// expanded against the registry (capital = first province of each region).
struct Scenario {
  ScenarioConfig config;
  GeoHierarchy geo;
  TierTimeline timeline;
  HolidayCalendar holidays;
};

Scenario load_scenario(const std::string& path);

struct SynthResult {
  std::vector<OdmRecord> records;  // sorted by (day, origin, destination, hour)
  ScenarioManifest manifest;
};

// Deterministic for a fixed config: records are generated in sorted flow
// order with one RNG draw per record. Throws InvalidConfig on out-of-range
// parameters and propagates timeline errors for uncovered days.
SynthResult gen_synthetic(const ScenarioConfig& cfg, const GeoHierarchy& geo,
                          const TierTimeline& timeline,
                          const HolidayCalendar& holidays);
SynthResult gen_synthetic(const Scenario& scenario);

}  // namespace tierlab
