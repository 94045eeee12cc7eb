#include "tierlab/tiers.hpp"

#include <algorithm>
#include <sstream>

#include "tierlab/errors.hpp"
#include "tierlab/io_util.hpp"

namespace tierlab {

const char* tier_name(Tier t) {
  switch (t) {
    case Tier::PreDecree: return "pre_decree";
    case Tier::Yellow: return "yellow";
    case Tier::Orange: return "orange";
    case Tier::Red: return "red";
    case Tier::White: return "white";
  }
  return "?";
}

Tier parse_tier(const std::string& s) {
  if (s == "pre_decree") return Tier::PreDecree;
  if (s == "yellow") return Tier::Yellow;
  if (s == "orange") return Tier::Orange;
  if (s == "red") return Tier::Red;
  if (s == "white") return Tier::White;
  throw BadFile("unknown tier '" + s + "'");
}

std::optional<int> tier_strictness(Tier t) {
  switch (t) {
    case Tier::Yellow: return 0;
    case Tier::Orange: return 1;
    case Tier::Red: return 2;
    default: return std::nullopt;
  }
}

TierTimeline TierTimeline::load(const std::string& path) {
  std::istringstream in(slurp(path));
  std::string line;
  std::size_t line_no = 0;
  if (!read_header(in, line, line_no))
    throw HeaderMismatch("timeline " + path + " is empty");
  const auto header = split_csv(line);
  const std::vector<std::string> base{"region", "start_date", "end_date",
                                      "tier"};
  const bool with_note = header.size() == 5 && header[4] == "provenance";
  if (!(header.size() >= base.size() &&
        std::equal(base.begin(), base.end(), header.begin()) &&
        (header.size() == 4 || with_note)))
    throw HeaderMismatch("timeline " + path +
                         ": expected header region,start_date,end_date,tier");
  std::map<std::string, std::vector<TierInterval>> by_region;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto f = split_csv(line);
    if (f.size() != header.size())
      throw BadFile(path + ":" + std::to_string(line_no) + ": expected " +
                    std::to_string(header.size()) + " fields");
    by_region[f[0]].push_back(
        TierInterval{parse_day(f[1]), parse_day(f[2]), parse_tier(f[3])});
  }
  return from_intervals(by_region);
}

TierTimeline TierTimeline::from_intervals(
    const std::map<std::string, std::vector<TierInterval>>& by_region) {
  TierTimeline tl;
  for (const auto& [region, raw] : by_region) {
    auto iv = raw;
    std::sort(iv.begin(), iv.end(),
              [](const TierInterval& a, const TierInterval& b) {
                return a.start < b.start;
              });
    for (size_t i = 0; i < iv.size(); ++i) {
      if (iv[i].end < iv[i].start)
        throw BadFile("region " + region + ": interval ending " +
                      format_day(iv[i].end) + " before it starts");
      if (i == 0) continue;
      if (iv[i].start <= iv[i - 1].end)
        throw OverlappingIntervals("region " + region + ": interval at " +
                                   format_day(iv[i].start) + " overlaps");
      if (iv[i].start.n != iv[i - 1].end.n + 1)
        throw GapInCoverage("region " + region + ": gap between " +
                            format_day(iv[i - 1].end) + " and " +
                            format_day(iv[i].start));
    }
    if (iv.empty())
      throw BadFile("region " + region + " has no intervals");
    tl.by_region_[region] = std::move(iv);
  }
  return tl;
}

const TierInterval& TierTimeline::interval_at(const std::string& region,
                                              Day d) const {
  const auto it = by_region_.find(region);
  if (it == by_region_.end())
    throw UnknownRegion("region " + region + " not in timeline");
  const auto& iv = it->second;
  if (d < iv.front().start || d > iv.back().end)
    throw DayOutOfCoverage("day " + format_day(d) + " outside coverage of " +
                           region + " [" + format_day(iv.front().start) + ", " +
                           format_day(iv.back().end) + "]");
  // binary search on interval start
  auto pos = std::upper_bound(
      iv.begin(), iv.end(), d,
      [](Day day, const TierInterval& i) { return day < i.start; });
  --pos;
  return *pos;
}

Tier TierTimeline::tier_at(const std::string& region, Day d) const {
  return interval_at(region, d).tier;
}

std::vector<std::string> TierTimeline::regions() const {
  std::vector<std::string> out;
  out.reserve(by_region_.size());
  for (const auto& [r, _] : by_region_) out.push_back(r);
  return out;
}

std::pair<Day, Day> TierTimeline::coverage(const std::string& region) const {
  const auto it = by_region_.find(region);
  if (it == by_region_.end())
    throw UnknownRegion("region " + region + " not in timeline");
  return {it->second.front().start, it->second.back().end};
}

const std::vector<TierInterval>& TierTimeline::intervals(
    const std::string& region) const {
  const auto it = by_region_.find(region);
  if (it == by_region_.end())
    throw UnknownRegion("region " + region + " not in timeline");
  return it->second;
}

std::vector<Transition> TierTimeline::detect_transitions(
    const std::string& region) const {
  const auto& iv = intervals(region);
  std::vector<Transition> out;
  for (size_t i = 1; i < iv.size(); ++i)
    if (iv[i].tier != iv[i - 1].tier)
      out.push_back(Transition{region, iv[i].start, iv[i - 1].tier, iv[i].tier});
  return out;
}

std::vector<Transition> TierTimeline::detect_transitions() const {
  std::vector<Transition> out;
  for (const auto& [region, _] : by_region_) {
    auto r = detect_transitions(region);
    out.insert(out.end(), r.begin(), r.end());
  }
  return out;
}

int TierTimeline::count_days(const std::string& region, Tier t, Day from,
                             Day to) const {
  const auto& iv = intervals(region);
  int n = 0;
  for (const auto& i : iv) {
    if (i.tier != t) continue;
    const Day lo = std::max(i.start, from);
    const Day hi = std::min(i.end, to);
    if (lo <= hi) n += hi.n - lo.n + 1;
  }
  return n;
}

}  // namespace tierlab
