#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tierlab/calendar.hpp"
#include "tierlab/indicators.hpp"
#include "tierlab/tiers.hpp"

namespace tierlab {

// Means around a transition day. The pre window is the `window_days` days
// strictly before the date; the post window starts on the date itself.
// pre_days/post_days are the usable (present, inside any bound) day counts.
struct WindowMeans {
  double pre_mean = 0;   // normalized units
  double post_mean = 0;
  int pre_days = 0;
  int post_days = 0;
  int window_days = 0;
};

// Raw-unit window sums; what the percent math runs on. The series reference
// never enters, so percent results cannot depend on normalization.
struct WindowStats {
  double pre_sum = 0;
  double post_sum = 0;
  int pre_days = 0;
  int post_days = 0;
};

// `pre_bound` / `post_bound` clip the windows (inclusive first allowed pre
// day / last allowed post day), used to stop at neighboring transitions.
// Missing days are skipped; fewer than min(window_days, 3) usable days on
// either side throws InsufficientCoverage naming the missing days.
WindowStats window_stats(const IndicatorSeries& series, Day date,
                         int window_days, std::optional<Day> pre_bound = {},
                         std::optional<Day> post_bound = {});
WindowMeans window_means(const IndicatorSeries& series, Day date,
                         int window_days, std::optional<Day> pre_bound = {},
                         std::optional<Day> post_bound = {});

// Percentage-variation convention. PreBaseline is 100*(P-Q)/Q; PostBaseline
// divides by the post mean instead, 100*(P-Q)/P.
enum class BaselineMode { PreBaseline, PostBaseline };

struct TransitionKind {
  Tier from = Tier::Yellow;
  Tier to = Tier::Red;
  auto operator<=>(const TransitionKind&) const = default;
};

std::string transition_kind_name(TransitionKind k);  // e.g. "yellow_to_red"
TransitionKind parse_transition_kind(const std::string& s);  // "yellow:red"

struct TransitionImpact {
  TransitionKind kind;
  Direction direction = Direction::Total;
  BaselineMode baseline = BaselineMode::PreBaseline;
  int window_days = 7;
  double percent = 0;
  int replicates = 0;  // transitions entering the average
};

// Pools every matching transition across regions: P and Q are the means over
// replicates of the post / pre window means, percent per `baseline`. Windows
// are clipped at the region's neighboring transitions. Regions present in the
// timeline but absent from `set` contribute nothing. Throws
// NoMatchingTransitions when nothing matches.
TransitionImpact transition_impact_overall(const IndicatorSet& set,
                                           const TierTimeline& timeline,
                                           TransitionKind kind, Direction dir,
                                           int window_days = 7,
                                           BaselineMode baseline =
                                               BaselineMode::PreBaseline);

// Same restricted to one region (map key) at a time; regions without a
// matching transition are absent from the result.
std::map<std::string, TransitionImpact> transition_impact_regional(
    const IndicatorSet& set, const TierTimeline& timeline, TransitionKind kind,
    Direction dir, int window_days = 7,
    BaselineMode baseline = BaselineMode::PreBaseline);

// Transition kinds observed in a timeline, sorted.
std::vector<TransitionKind> observed_kinds(const TierTimeline& timeline);

// 100 * (v(d) - v(d-7)) / v(d-7), same weekday one week earlier. Throws
// MissingValue / ZeroBaseline.
double week_over_week(const IndicatorSeries& series, Day d);

// All days where both endpoints exist, ascending; zero baselines skipped.
std::vector<std::pair<Day, double>> week_over_week_series(
    const IndicatorSeries& series);

// 100 * (mean_b - mean_a) / mean_a over two inclusive day ranges. Missing
// days are skipped with the same min(len, 3) floor as window_stats.
double period_variation(const IndicatorSeries& series, Day a_first, Day a_last,
                        Day b_first, Day b_last);

// Spearman rank correlation, average ranks on ties. Throws LengthMismatch
// and DegenerateInput (n < 2 or a constant input).
double spearman(const std::vector<double>& xs, const std::vector<double>& ys);

// Spearman between two per-region maps. Key sets must match exactly
// (KeyMismatch), at least 3 regions (DegenerateInput).
double variation_vs_cases(const std::map<std::string, double>& variation,
                          const std::map<std::string, double>& cases);

}  // namespace tierlab
