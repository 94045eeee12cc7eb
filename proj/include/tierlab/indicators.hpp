#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tierlab/calendar.hpp"
#include "tierlab/geo.hpp"
#include "tierlab/odm.hpp"

namespace tierlab {

// Movement time series for one (area, direction).
//
// Points hold *raw* accumulated counts; `reference` is the divisor applied on
// access. Keeping the two apart is deliberate: percent-type metrics downstream
// are ratios in which the reference cancels algebraically, so they are
// computed from the raw sums alone and are bit-for-bit invariant under any
// positive rescaling of the normalization.
struct IndicatorSeries {
  std::string area;
  Direction direction = Direction::Total;
  Bucket bucket = Bucket::Day;
  std::map<TimePoint, double> points;  // bucket start -> raw value
  double reference = 1.0;

  std::optional<double> raw_at(TimePoint t) const {
    const auto it = points.find(t);
    if (it == points.end()) return std::nullopt;
    return it->second;
  }
  std::optional<double> raw_at_day(Day d) const { return raw_at(midnight(d)); }

  // Normalized view, value = raw / reference.
  std::optional<double> value_at(TimePoint t) const {
    const auto r = raw_at(t);
    if (!r) return std::nullopt;
    return *r / reference;
  }
  std::optional<double> value_at_day(Day d) const {
    return value_at(midnight(d));
  }

  std::vector<Day> days() const;
};

struct SeriesKey {
  std::string area;
  Direction direction = Direction::Total;
  auto operator<=>(const SeriesKey&) const = default;
};

// All indicator series produced by one aggregation pass, sharing one bucket
// and one reference.
struct IndicatorSet {
  Bucket bucket = Bucket::Day;
  std::string country;  // code of the national Total area
  std::map<SeriesKey, IndicatorSeries> series;

  const IndicatorSeries* find(const std::string& area, Direction d) const {
    const auto it = series.find(SeriesKey{area, d});
    return it == series.end() ? nullptr : &it->second;
  }
  const IndicatorSeries& at(const std::string& area, Direction d) const;
  const IndicatorSeries& national_total() const {
    return at(country, Direction::Total);
  }
  double reference() const;

  // Areas present, sorted.
  std::vector<std::string> areas() const;
};

// Hour-of-day filter [first_hour, last_hour), e.g. {23, 24} keeps the curfew
// hour. Only meaningful for hourly input.
struct HourWindow {
  int first_hour = 0;
  int last_hour = 24;
};

// Classifies every record against each area at `level` and accumulates
// Internal / Inward / Outward / Total series per area plus the national Total
// (one count per record) under the country code. Record areas coarser than
// `level` throw LevelMismatch; mixing hourly and daily records throws
// MixedBucketInput; an hour window on daily data throws WindowOnDailyData.
// `out_bucket` = Day with hourly input sums hours into days (after the
// window filter); hourly output from daily input is impossible and throws.
IndicatorSet aggregate_indicators(const std::vector<OdmRecord>& records,
                                  const GeoHierarchy& geo, Level level,
                                  Bucket out_bucket,
                                  std::optional<HourWindow> window = {});

// Sets the common reference (every value is divided by it on access). Throws
// NonPositiveReference.
void normalize(IndicatorSet& set, double reference);

// Mean daily national Total over the first seven full days (a full day of an
// hourly set has all 24 buckets). Fewer than seven full days uses what is
// there; none at all throws InsufficientCoverage.
double default_reference(const IndicatorSet& set);

// Flat CSV, header "area,direction,bucket,timestamp,value,reference".
// Day-bucket timestamps are bare dates. Values are written normalized;
// loading treats them as raw with reference 1, which keeps write/load/write
// byte-stable.
std::string series_to_csv(const IndicatorSet& set);
IndicatorSet series_from_csv(const std::string& text);
IndicatorSet series_from_file(const std::string& path);

}  // namespace tierlab
