#include "tierlab/indicators.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "tierlab/errors.hpp"
#include "tierlab/io_util.hpp"

namespace tierlab {

std::vector<Day> IndicatorSeries::days() const {
  std::vector<Day> out;
  std::set<Day> seen;
  for (const auto& [t, _] : points)
    if (seen.insert(t.day()).second) out.push_back(t.day());
  return out;
}

const IndicatorSeries& IndicatorSet::at(const std::string& area,
                                        Direction d) const {
  const auto it = series.find(SeriesKey{area, d});
  if (it == series.end())
    throw UnknownArea("no series for " + area + "/" + direction_name(d));
  return it->second;
}

double IndicatorSet::reference() const {
  return series.empty() ? 1.0 : series.begin()->second.reference;
}

std::vector<std::string> IndicatorSet::areas() const {
  std::set<std::string> s;
  for (const auto& [k, _] : series) s.insert(k.area);
  return {s.begin(), s.end()};
}

IndicatorSet aggregate_indicators(const std::vector<OdmRecord>& records,
                                  const GeoHierarchy& geo, Level level,
                                  Bucket out_bucket,
                                  std::optional<HourWindow> window) {
  if (!records.empty()) {
    const Bucket in_bucket = records.front().bucket;
    for (const auto& r : records)
      if (r.bucket != in_bucket)
        throw MixedBucketInput("records mix hour and day buckets");
    if (window && in_bucket == Bucket::Day)
      throw WindowOnDailyData("hour-of-day window needs hourly records");
    if (out_bucket == Bucket::Hour && in_bucket == Bucket::Day)
      throw WindowOnDailyData("cannot split daily records into hours");
  }
  if (window &&
      (window->first_hour < 0 || window->last_hour > 24 ||
       window->first_hour >= window->last_hour))
    throw WindowOnDailyData("hour window must satisfy 0 <= first < last <= 24");

  IndicatorSet set;
  set.bucket = out_bucket;
  set.country = geo.country();

  const auto lift_or_ext =
      [&](const std::string& code) -> std::optional<std::string> {
    if (code == kExternalArea) return std::nullopt;
    if (static_cast<int>(geo.level_of(code)) > static_cast<int>(level))
      throw LevelMismatch("record area " + code + " is coarser than the " +
                          std::string(level_name(level)) + " level");
    return geo.lift(code, level);
  };

  const auto add = [&](const std::string& area, Direction d, TimePoint t,
                       double v) {
    auto& s = set.series[SeriesKey{area, d}];
    if (s.points.empty() && s.area.empty()) {
      s.area = area;
      s.direction = d;
      s.bucket = out_bucket;
    }
    s.points[t] += v;
  };

  for (const auto& rec : records) {
    if (window) {
      const int h = rec.period_start.hour();
      if (h < window->first_hour || h >= window->last_hour) continue;
    }
    const TimePoint t = out_bucket == Bucket::Day
                            ? midnight(rec.period_start.day())
                            : rec.period_start;
    const auto o = lift_or_ext(rec.origin);
    const auto d = lift_or_ext(rec.destination);
    const double c = static_cast<double>(rec.count);
    if (o && d && *o == *d) {
      add(*o, Direction::Internal, t, c);
      add(*o, Direction::Total, t, c);
    } else {
      if (o) {
        add(*o, Direction::Outward, t, c);
        add(*o, Direction::Total, t, c);
      }
      if (d) {
        add(*d, Direction::Inward, t, c);
        add(*d, Direction::Total, t, c);
      }
    }
    // national total: each record exactly once
    if (level != Level::Country) add(set.country, Direction::Total, t, c);
  }
  return set;
}

void normalize(IndicatorSet& set, double reference) {
  if (!(reference > 0.0))
    throw NonPositiveReference("reference must be positive, got " +
                               std::to_string(reference));
  for (auto& [_, s] : set.series) s.reference = reference;
}

double default_reference(const IndicatorSet& set) {
  const IndicatorSeries* nat = set.find(set.country, Direction::Total);
  if (!nat || nat->points.empty())
    throw InsufficientCoverage("no national total to derive a reference from");
  // raw daily sums, day order
  std::map<Day, std::pair<double, int>> by_day;  // sum, bucket count
  for (const auto& [t, v] : nat->points) {
    auto& e = by_day[t.day()];
    e.first += v;
    e.second += 1;
  }
  const int need = set.bucket == Bucket::Hour ? 24 : 1;
  double sum = 0;
  int used = 0;
  for (const auto& [day, e] : by_day) {
    if (e.second < need) continue;  // partial day
    sum += e.first;
    if (++used == 7) break;
  }
  if (used == 0)
    throw InsufficientCoverage("no full day available for the reference");
  const double ref = sum / used;
  if (!(ref > 0.0))
    throw NonPositiveReference("derived reference is not positive");
  return ref;
}

std::string series_to_csv(const IndicatorSet& set) {
  std::string out = "area,direction,bucket,timestamp,value,reference\n";
  char buf[64];
  for (const auto& [key, s] : set.series) {
    for (const auto& [t, raw] : s.points) {
      out += key.area;
      out += ',';
      out += direction_name(key.direction);
      out += ',';
      out += bucket_name(s.bucket);
      out += ',';
      out += s.bucket == Bucket::Day ? format_day(t.day()) : format_timestamp(t);
      out += ',';
      std::snprintf(buf, sizeof buf, "%.17g", raw / s.reference);
      out += buf;
      out += ',';
      std::snprintf(buf, sizeof buf, "%.17g", s.reference);
      out += buf;
      out += '\n';
    }
  }
  return out;
}

IndicatorSet series_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  if (!read_header(in, line, line_no) ||
      split_csv(line) != std::vector<std::string>{"area", "direction", "bucket",
                                                  "timestamp", "value",
                                                  "reference"})
    throw HeaderMismatch(
        "expected series header area,direction,bucket,timestamp,value,reference");
  IndicatorSet set;
  bool bucket_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto f = split_csv(line);
    if (f.size() != 6)
      throw BadFile("series line " + std::to_string(line_no) +
                    ": expected 6 fields");
    const Direction dir = parse_direction(f[1]);
    const Bucket b = parse_bucket(f[2]);
    if (!bucket_seen) {
      set.bucket = b;
      bucket_seen = true;
    } else if (b != set.bucket) {
      throw MixedBucketInput("series file mixes buckets");
    }
    auto& s = set.series[SeriesKey{f[0], dir}];
    if (s.area.empty()) {
      s.area = f[0];
      s.direction = dir;
      s.bucket = b;
    }
    s.points[parse_timestamp(f[3])] = std::stod(f[4]);
  }
  // The national total is the Total series of the only country-looking area;
  // by convention the coarsest area present. Recover it as the area that is a
  // prefix of none... keep it simple: the country is whichever area has a
  // Total series and no other direction anywhere in the file.
  for (const auto& [key, _] : set.series) {
    if (key.direction != Direction::Total) continue;
    bool only_total = true;
    for (Direction d :
         {Direction::Internal, Direction::Inward, Direction::Outward})
      if (set.series.count(SeriesKey{key.area, d})) only_total = false;
    if (only_total) {
      set.country = key.area;
      break;
    }
  }
  return set;
}

IndicatorSet series_from_file(const std::string& path) {
  return series_from_csv(slurp(path));
}

}  // namespace tierlab
