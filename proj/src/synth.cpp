#include "tierlab/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "json.hpp"
#include "tierlab/errors.hpp"
#include "tierlab/io_util.hpp"
#include "tierlab/rng.hpp"

namespace tierlab {
namespace {

// Minimal INI reader: [section] headers, "key = value" lines, '#' or ';'
// starts a comment. Later duplicate keys are an error so typos surface.
struct IniSection {
  std::vector<std::pair<std::string, std::string>> entries;

  const std::string* find(const std::string& key) const {
    for (const auto& [k, v] : entries)
      if (k == key) return &v;
    return nullptr;
  }
};

struct IniFile {
  std::map<std::string, IniSection> sections;

  const IniSection* find(const std::string& name) const {
    auto it = sections.find(name);
    return it == sections.end() ? nullptr : &it->second;
  }
};

IniFile parse_ini(const std::string& path) {
  const std::string text = slurp(path);
  IniFile ini;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto cut = raw.find_first_of("#;");
    if (cut != std::string::npos) raw.erase(cut);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3)
        throw InvalidConfig(path + ":" + std::to_string(line_no) +
                            ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      ini.sections[section];  // allow empty sections
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidConfig(path + ":" + std::to_string(line_no) +
                          ": expected key = value");
    if (section.empty())
      throw InvalidConfig(path + ":" + std::to_string(line_no) +
                          ": entry before any [section]");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw InvalidConfig(path + ":" + std::to_string(line_no) + ": empty key");
    auto& sec = ini.sections[section];
    if (sec.find(key))
      throw InvalidConfig(path + ": duplicate key " + key + " in [" + section +
                          "]");
    sec.entries.emplace_back(key, value);
  }
  return ini;
}

double parse_double(const std::string& value, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw InvalidConfig(what + ": not a number: " + value);
  }
}

std::uint64_t parse_u64(const std::string& value, const std::string& what) {
  std::uint64_t v = 0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    throw InvalidConfig(what + ": not an unsigned integer: " + value);
  return v;
}

std::vector<double> parse_list(const std::string& value,
                               const std::string& what, std::size_t n) {
  std::vector<double> out;
  for (const auto& field : split_csv(value))
    out.push_back(parse_double(field, what));
  if (out.size() != n)
    throw InvalidConfig(what + ": expected " + std::to_string(n) +
                        " comma-separated values, got " +
                        std::to_string(out.size()));
  return out;
}

// [files] entries resolve next to the config file first, then through the
// data dir, so a scenario can ship with private inputs or reuse bundled ones.
std::string resolve_near(const std::filesystem::path& dir,
                         const std::string& name) {
  const auto cand = dir / name;
  std::error_code ec;
  if (std::filesystem::exists(cand, ec)) return cand.string();
  return resolve_data_path(name);
}

double tier_mult(const ScenarioConfig& cfg, Tier t, const std::string& region,
                 Day d) {
  const auto it = cfg.tier_multipliers.find(t);
  if (it == cfg.tier_multipliers.end())
    throw InvalidConfig(std::string("no tier multiplier configured for ") +
                        tier_name(t) + " (needed for " + region + " on " +
                        format_day(d) + ")");
  return it->second;
}

void validate(const ScenarioConfig& cfg) {
  if (cfg.noise_cv < 0 || cfg.noise_cv >= 1)
    throw InvalidConfig("noise_cv must be in [0, 1)");
  if (cfg.relaxation_per_day <= -1)
    throw InvalidConfig("relaxation_per_day must be > -1");
  if (cfg.holiday_multiplier <= 0)
    throw InvalidConfig("holiday_multiplier must be > 0");
  for (double w : cfg.weekly_profile)
    if (w <= 0) throw InvalidConfig("weekly_profile entries must be > 0");
  if (cfg.bucket == Bucket::Hour) {
    double sum = 0;
    for (double h : cfg.curfew_hour_profile) {
      if (h < 0) throw InvalidConfig("curfew_hour_profile entries must be >= 0");
      sum += h;
    }
    if (sum <= 0)
      throw InvalidConfig("curfew_hour_profile must have a positive entry");
  }
  for (const auto& [tier, mult] : cfg.tier_multipliers)
    if (mult <= 0)
      throw InvalidConfig(std::string("tier multiplier for ") +
                          tier_name(tier) + " must be > 0");
  if (cfg.base_flows.empty()) throw InvalidConfig("no base flows configured");
  for (const auto& [od, base] : cfg.base_flows) {
    if (base < 0)
      throw InvalidConfig("base flow " + od.first + ":" + od.second +
                          " must be >= 0");
    if (od.first == kExternalArea && od.second == kExternalArea)
      throw InvalidConfig("base flow EXT:EXT touches no region");
  }
  if (cfg.last_day < cfg.first_day)
    throw InvalidConfig("last_day precedes first_day");
}

struct FlowPlan {
  std::string origin;
  std::string destination;
  double base = 0;
  std::string origin_region;  // empty for EXT
  std::string dest_region;    // empty for EXT
  std::string drive_region;   // region whose tier scales this flow
};

}  // namespace

Scenario load_scenario(const std::string& path) {
  const std::string resolved = resolve_data_path(path);
  const IniFile ini = parse_ini(resolved);
  const auto dir = std::filesystem::path(resolved).parent_path();

  for (const auto& [name, _] : ini.sections) {
    static const char* known[] = {"scenario",       "files",
                                  "tier_multipliers", "weekly_profile",
                                  "curfew_hour_profile", "base_flows",
                                  "flow_patterns"};
    if (std::find(std::begin(known), std::end(known), name) == std::end(known))
      throw InvalidConfig(resolved + ": unknown section [" + name + "]");
  }

  Scenario sc;
  ScenarioConfig& cfg = sc.config;

  const IniSection* files = ini.find("files");
  if (!files || !files->find("areas") || !files->find("timeline"))
    throw InvalidConfig(resolved + ": [files] must name areas and timeline");
  sc.geo = GeoHierarchy::load(resolve_near(dir, *files->find("areas")));
  sc.timeline = TierTimeline::load(resolve_near(dir, *files->find("timeline")));
  if (const std::string* hol = files->find("holidays"))
    sc.holidays = HolidayCalendar::load(resolve_near(dir, *hol));
  for (const auto& [k, _] : files->entries)
    if (k != "areas" && k != "timeline" && k != "holidays")
      throw InvalidConfig(resolved + ": unknown key " + k + " in [files]");

  const IniSection* scen = ini.find("scenario");
  if (!scen) throw InvalidConfig(resolved + ": missing [scenario] section");
  bool have_first = false, have_last = false;
  for (const auto& [k, v] : scen->entries) {
    if (k == "seed")
      cfg.seed = parse_u64(v, "seed");
    else if (k == "bucket")
      cfg.bucket = parse_bucket(v);
    else if (k == "noise_cv")
      cfg.noise_cv = parse_double(v, "noise_cv");
    else if (k == "relaxation_per_day")
      cfg.relaxation_per_day = parse_double(v, "relaxation_per_day");
    else if (k == "holiday_multiplier")
      cfg.holiday_multiplier = parse_double(v, "holiday_multiplier");
    else if (k == "first_day")
      cfg.first_day = parse_day(v), have_first = true;
    else if (k == "last_day")
      cfg.last_day = parse_day(v), have_last = true;
    else
      throw InvalidConfig(resolved + ": unknown key " + k + " in [scenario]");
  }
  if (!have_first || !have_last)
    throw InvalidConfig(resolved + ": [scenario] must set first_day/last_day");

  const IniSection* tiers = ini.find("tier_multipliers");
  if (!tiers || tiers->entries.empty())
    throw InvalidConfig(resolved + ": missing [tier_multipliers]");
  for (const auto& [k, v] : tiers->entries)
    cfg.tier_multipliers[parse_tier(k)] = parse_double(v, "tier multiplier " + k);

  if (const IniSection* wp = ini.find("weekly_profile")) {
    const std::string* v = wp->find("values");
    if (!v || wp->entries.size() != 1)
      throw InvalidConfig(resolved + ": [weekly_profile] needs a single "
                          "values key (Mon..Sun)");
    const auto list = parse_list(*v, "weekly_profile", 7);
    std::copy(list.begin(), list.end(), cfg.weekly_profile.begin());
  }
  if (const IniSection* hp = ini.find("curfew_hour_profile")) {
    const std::string* v = hp->find("values");
    if (!v || hp->entries.size() != 1)
      throw InvalidConfig(resolved + ": [curfew_hour_profile] needs a single "
                          "values key (24 shares)");
    const auto list = parse_list(*v, "curfew_hour_profile", 24);
    std::copy(list.begin(), list.end(), cfg.curfew_hour_profile.begin());
  }

  // Pattern-generated flows first, explicit [base_flows] entries override.
  if (const IniSection* pat = ini.find("flow_patterns")) {
    for (const auto& [k, v] : pat->entries) {
      const double base = parse_double(v, "flow pattern " + k);
      if (k == "province_internal") {
        for (const auto& p : sc.geo.at_level(Level::Province))
          cfg.base_flows[{p, p}] = base;
      } else if (k == "intra_region_pairs") {
        for (const auto& r : sc.geo.at_level(Level::Region)) {
          const auto provs = sc.geo.children(r);
          for (const auto& a : provs)
            for (const auto& b : provs)
              if (a != b) cfg.base_flows[{a, b}] = base;
        }
      } else if (k == "capital_mesh") {
        // capital = first province of each region, registry order
        std::vector<std::string> capitals;
        for (const auto& r : sc.geo.at_level(Level::Region)) {
          const auto provs = sc.geo.children(r);
          if (!provs.empty()) capitals.push_back(provs.front());
        }
        for (const auto& a : capitals)
          for (const auto& b : capitals)
            if (a != b) cfg.base_flows[{a, b}] = base;
      } else {
        throw InvalidConfig(resolved + ": unknown flow pattern " + k);
      }
    }
  }
  if (const IniSection* flows = ini.find("base_flows")) {
    for (const auto& [k, v] : flows->entries) {
      const auto colon = k.find(':');
      if (colon == std::string::npos || colon == 0 || colon + 1 == k.size())
        throw InvalidConfig(resolved + ": base flow key must be ORIGIN:DEST, "
                            "got " + k);
      const std::string o = trim(k.substr(0, colon));
      const std::string d = trim(k.substr(colon + 1));
      cfg.base_flows[{o, d}] = parse_double(v, "base flow " + k);
    }
  }

  return sc;
}

SynthResult gen_synthetic(const ScenarioConfig& cfg, const GeoHierarchy& geo,
                          const TierTimeline& timeline,
                          const HolidayCalendar& holidays) {
  validate(cfg);

  std::vector<FlowPlan> flows;
  flows.reserve(cfg.base_flows.size());
  for (const auto& [od, base] : cfg.base_flows) {
    FlowPlan f;
    f.origin = od.first;
    f.destination = od.second;
    f.base = base;
    if (f.origin != kExternalArea)
      f.origin_region = geo.lift(f.origin, Level::Region);
    if (f.destination != kExternalArea)
      f.dest_region = geo.lift(f.destination, Level::Region);
    f.drive_region = f.origin_region.empty() ? f.dest_region : f.origin_region;
    flows.push_back(std::move(f));
  }

  // Regions touched by any flow, each with a manifest echo per day.
  std::map<std::string, std::vector<RegionDayEcho>> echoes;
  for (const auto& f : flows) {
    if (!f.origin_region.empty()) echoes[f.origin_region];
    if (!f.dest_region.empty()) echoes[f.dest_region];
  }

  struct DayFactors {
    Tier tier;
    double tier_multiplier;
    double relaxation;
  };

  Rng rng(cfg.seed);
  SynthResult out;
  out.manifest.config = cfg;
  out.manifest.flow_count = flows.size();

  const int n_hours = cfg.bucket == Bucket::Hour ? 24 : 1;
  for (Day d = cfg.first_day; d <= cfg.last_day; d = d.next()) {
    const double weekly = cfg.weekly_profile[d.weekday_mon0()];
    const double holiday = holidays.is_holiday(d) ? cfg.holiday_multiplier : 1;

    std::map<std::string, DayFactors> factors;
    for (auto& [region, echo] : echoes) {
      const TierInterval& iv = timeline.interval_at(region, d);
      DayFactors f;
      f.tier = iv.tier;
      f.tier_multiplier = tier_mult(cfg, iv.tier, region, d);
      f.relaxation = std::pow(1 + cfg.relaxation_per_day, d.n - iv.start.n);
      factors[region] = f;
      RegionDayEcho e;
      e.day = d;
      e.tier = f.tier;
      e.tier_multiplier = f.tier_multiplier;
      e.relaxation_factor = f.relaxation;
      e.weekly_factor = weekly;
      e.holiday_factor = holiday;
      echo.push_back(e);
    }

    for (const auto& f : flows) {
      const DayFactors& df = factors.at(f.drive_region);
      const double mean_day =
          f.base * weekly * df.tier_multiplier * df.relaxation * holiday;
      std::int64_t noiseless = 0;
      for (int h = 0; h < n_hours; ++h) {
        const double mean = cfg.bucket == Bucket::Hour
                                ? mean_day * cfg.curfew_hour_profile[h]
                                : mean_day;
        const double noisy = mean * (1 + cfg.noise_cv * rng.gaussian());
        OdmRecord rec;
        rec.period_start =
            cfg.bucket == Bucket::Hour ? hour_start(d, h) : midnight(d);
        rec.bucket = cfg.bucket;
        rec.origin = f.origin;
        rec.destination = f.destination;
        rec.count = std::max<std::int64_t>(0, std::llround(noisy));
        out.records.push_back(std::move(rec));
        noiseless += std::llround(mean);
      }
      // direction sums mirror classification at region level
      if (f.origin_region == f.dest_region) {
        if (!f.origin_region.empty()) {
          RegionDayEcho& e = echoes[f.origin_region].back();
          e.expected_internal += noiseless;
        }
      } else {
        if (!f.origin_region.empty())
          echoes[f.origin_region].back().expected_outward += noiseless;
        if (!f.dest_region.empty())
          echoes[f.dest_region].back().expected_inward += noiseless;
      }
    }
  }

  for (auto& [region, rows] : echoes)
    for (auto& e : rows)
      e.expected_total =
          e.expected_internal + e.expected_inward + e.expected_outward;

  out.manifest.record_count = out.records.size();
  out.manifest.regions = std::move(echoes);
  return out;
}

SynthResult gen_synthetic(const Scenario& scenario) {
  return gen_synthetic(scenario.config, scenario.geo, scenario.timeline,
                       scenario.holidays);
}

std::string manifest_to_json(const ScenarioManifest& m) {
  using json = nlohmann::ordered_json;
  const ScenarioConfig& c = m.config;
  json j;
  j["schema_version"] = 1;
  j["seed"] = c.seed;
  j["bucket"] = bucket_name(c.bucket);
  j["first_day"] = format_day(c.first_day);
  j["last_day"] = format_day(c.last_day);
  j["noise_cv"] = c.noise_cv;
  j["relaxation_per_day"] = c.relaxation_per_day;
  j["holiday_multiplier"] = c.holiday_multiplier;
  j["weekly_profile"] = c.weekly_profile;
  if (c.bucket == Bucket::Hour) j["curfew_hour_profile"] = c.curfew_hour_profile;
  json tiers = json::object();
  for (const auto& [t, mult] : c.tier_multipliers) tiers[tier_name(t)] = mult;
  j["tier_multipliers"] = tiers;
  j["flow_count"] = m.flow_count;
  j["record_count"] = m.record_count;
  json regions = json::object();
  for (const auto& [region, rows] : m.regions) {
    json arr = json::array();
    for (const auto& e : rows) {
      json r;
      r["day"] = format_day(e.day);
      r["tier"] = tier_name(e.tier);
      r["tier_multiplier"] = e.tier_multiplier;
      r["relaxation_factor"] = e.relaxation_factor;
      r["weekly_factor"] = e.weekly_factor;
      r["holiday_factor"] = e.holiday_factor;
      r["expected_internal"] = e.expected_internal;
      r["expected_inward"] = e.expected_inward;
      r["expected_outward"] = e.expected_outward;
      r["expected_total"] = e.expected_total;
      arr.push_back(std::move(r));
    }
    regions[region] = std::move(arr);
  }
  j["regions"] = std::move(regions);
  return j.dump(2) + "\n";
}

}  // namespace tierlab
