#include "tierlab/relaxation.hpp"

#include <algorithm>
#include <set>

#include "tierlab/errors.hpp"

namespace tierlab {

std::vector<RelaxationObservation> collect_relaxation_observations(
    const IndicatorSet& set, const TierTimeline& timeline,
    const GeoHierarchy& geo, const HolidayCalendar& cal, Day first, Day last) {
  std::vector<RelaxationObservation> rows;
  for (const auto& [key, series] : set.series) {
    if (key.direction != Direction::Total) continue;
    if (!geo.contains(key.area) || geo.level_of(key.area) != Level::Province)
      continue;
    const std::string region = geo.lift(key.area, Level::Region);
    if (!timeline.has_region(region)) continue;
    const auto [cov_first, cov_last] = timeline.coverage(region);
    for (Day d = first; d <= last; d = d.next()) {
      const Day d7 = d.plus(-7);
      if (d7 < cov_first || d > cov_last) continue;
      const auto now = series.raw_at_day(d);
      const auto then = series.raw_at_day(d7);
      if (!now || !then || *then == 0.0) continue;
      RelaxationObservation obs;
      obs.province = key.area;
      obs.day = d;
      obs.response = *now / *then - 1.0;
      obs.week_ago = timeline.tier_at(region, d7);
      obs.today = timeline.tier_at(region, d);
      obs.weekend_or_holiday = cal.is_weekend_or_holiday(d);
      rows.push_back(std::move(obs));
    }
  }
  return rows;
}

DesignMatrix build_relaxation_design(
    const std::vector<RelaxationObservation>& rows) {
  std::set<std::string> kinds;
  for (const auto& r : rows)
    if (r.week_ago != r.today)
      kinds.insert(transition_kind_name(TransitionKind{r.week_ago, r.today}));

  DesignMatrix d;
  d.names.push_back(DesignMatrix::kIntercept);
  d.names.insert(d.names.end(), kinds.begin(), kinds.end());
  d.names.push_back("weekend_holiday");

  std::vector<double> row(d.names.size());
  for (const auto& r : rows) {
    std::fill(row.begin(), row.end(), 0.0);
    row[0] = 1.0;
    if (r.week_ago != r.today) {
      const std::string name =
          transition_kind_name(TransitionKind{r.week_ago, r.today});
      const auto it = std::find(d.names.begin(), d.names.end(), name);
      row[it - d.names.begin()] = 1.0;
    }
    row.back() = r.weekend_or_holiday ? 1.0 : 0.0;
    d.add_row(r.response, row);
  }
  return d;
}

DesignMatrix build_relaxation_design(const IndicatorSet& set,
                                     const TierTimeline& timeline,
                                     const GeoHierarchy& geo,
                                     const HolidayCalendar& cal, Day first,
                                     Day last) {
  return build_relaxation_design(
      collect_relaxation_observations(set, timeline, geo, cal, first, last));
}

}  // namespace tierlab
