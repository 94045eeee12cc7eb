#pragma once

#include <vector>

#include "tierlab/calendar.hpp"
#include "tierlab/geo.hpp"
#include "tierlab/impact.hpp"
#include "tierlab/indicators.hpp"
#include "tierlab/ols.hpp"
#include "tierlab/tiers.hpp"

namespace tierlab {

// One regression row: week-on-week relative change of a province's Total
// movements, with the tier pair it straddles.
struct RelaxationObservation {
  std::string province;
  Day day;
  double response = 0;  // v(day)/v(day-7) - 1, raw ratio
  Tier week_ago = Tier::Yellow;
  Tier today = Tier::Yellow;
  bool weekend_or_holiday = false;
};

// Walks every province-level Total series in `set` over [first, last]. Rows
// need both endpoints present with a nonzero baseline and tier coverage for
// both days; anything else is skipped. Provinces are lifted to their region
// for tier lookup.
std::vector<RelaxationObservation> collect_relaxation_observations(
    const IndicatorSet& set, const TierTimeline& timeline,
    const GeoHierarchy& geo, const HolidayCalendar& cal, Day first, Day last);

// Design: intercept, one dummy per tier pair observed with week_ago != today
// (sorted by name), and a weekend/bank-holiday dummy for the current day.
// Same-tier rows carry only the intercept and possibly the weekend dummy,
// which is what lets the intercept estimate the within-tier weekly drift.
DesignMatrix build_relaxation_design(
    const std::vector<RelaxationObservation>& rows);

DesignMatrix build_relaxation_design(const IndicatorSet& set,
                                     const TierTimeline& timeline,
                                     const GeoHierarchy& geo,
                                     const HolidayCalendar& cal, Day first,
                                     Day last);

}  // namespace tierlab
