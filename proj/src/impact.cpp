#include "tierlab/impact.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tierlab/errors.hpp"

namespace tierlab {

namespace {

struct SideAccum {
  double sum = 0;
  int used = 0;
  std::vector<Day> missing;
};

SideAccum accumulate_side(const IndicatorSeries& s, Day first, Day last) {
  SideAccum a;
  for (Day d = first; d <= last; d = d.next()) {
    const auto v = s.raw_at_day(d);
    if (v) {
      a.sum += *v;
      ++a.used;
    } else {
      a.missing.push_back(d);
    }
  }
  return a;
}

std::string join_days(const std::vector<Day>& days) {
  std::string out;
  for (const auto& d : days) {
    if (!out.empty()) out += ", ";
    out += format_day(d);
  }
  return out;
}

}  // namespace

WindowStats window_stats(const IndicatorSeries& series, Day date,
                         int window_days, std::optional<Day> pre_bound,
                         std::optional<Day> post_bound) {
  if (window_days < 1)
    throw InsufficientCoverage("window_days must be at least 1");
  Day pre_first = date.plus(-window_days);
  const Day pre_last = date.prev();
  Day post_last = date.plus(window_days - 1);
  const Day post_first = date;
  if (pre_bound && *pre_bound > pre_first) pre_first = *pre_bound;
  if (post_bound && *post_bound < post_last) post_last = *post_bound;

  const SideAccum pre = accumulate_side(series, pre_first, pre_last);
  const SideAccum post = accumulate_side(series, post_first, post_last);
  const int need = std::min(window_days, 3);
  if (pre.used < need || post.used < need) {
    std::string msg = "window around " + format_day(date) + " for " +
                      series.area + "/" + direction_name(series.direction) +
                      " has " + std::to_string(pre.used) + " pre and " +
                      std::to_string(post.used) + " post day(s), need " +
                      std::to_string(need);
    const auto missing = pre.missing.empty() ? post.missing : pre.missing;
    if (!missing.empty()) msg += "; missing: " + join_days(missing);
    throw InsufficientCoverage(msg);
  }
  return WindowStats{pre.sum, post.sum, pre.used, post.used};
}

WindowMeans window_means(const IndicatorSeries& series, Day date,
                         int window_days, std::optional<Day> pre_bound,
                         std::optional<Day> post_bound) {
  const WindowStats w =
      window_stats(series, date, window_days, pre_bound, post_bound);
  return WindowMeans{w.pre_sum / w.pre_days / series.reference,
                     w.post_sum / w.post_days / series.reference, w.pre_days,
                     w.post_days, window_days};
}

std::string transition_kind_name(TransitionKind k) {
  return std::string(tier_name(k.from)) + "_to_" + tier_name(k.to);
}

TransitionKind parse_transition_kind(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos)
    throw BadFile("transition kind must look like yellow:red, got '" + s + "'");
  return TransitionKind{parse_tier(s.substr(0, colon)),
                        parse_tier(s.substr(colon + 1))};
}

namespace {

struct Replicate {
  double pre_mean;   // raw units
  double post_mean;  // raw units
};

// Matching transitions of one region, windows clipped at neighbors.
std::vector<Replicate> region_replicates(const IndicatorSet& set,
                                         const TierTimeline& timeline,
                                         const std::string& region,
                                         TransitionKind kind, Direction dir,
                                         int window_days) {
  std::vector<Replicate> out;
  const IndicatorSeries* s = set.find(region, dir);
  if (!s) return out;
  const auto transitions = timeline.detect_transitions(region);
  for (size_t i = 0; i < transitions.size(); ++i) {
    const Transition& t = transitions[i];
    if (t.from != kind.from || t.to != kind.to) continue;
    std::optional<Day> pre_bound;
    if (i > 0) pre_bound = transitions[i - 1].date;
    std::optional<Day> post_bound;
    if (i + 1 < transitions.size()) post_bound = transitions[i + 1].date.prev();
    const WindowStats w =
        window_stats(*s, t.date, window_days, pre_bound, post_bound);
    out.push_back(Replicate{w.pre_sum / w.pre_days, w.post_sum / w.post_days});
  }
  return out;
}

double percent_from_pq(double p, double q, BaselineMode baseline) {
  const double denom = baseline == BaselineMode::PreBaseline ? q : p;
  if (denom == 0.0) throw ZeroBaseline("baseline window mean is zero");
  return 100.0 * (p - q) / denom;
}

}  // namespace

TransitionImpact transition_impact_overall(const IndicatorSet& set,
                                           const TierTimeline& timeline,
                                           TransitionKind kind, Direction dir,
                                           int window_days,
                                           BaselineMode baseline) {
  double p_sum = 0, q_sum = 0;
  int n = 0;
  for (const auto& region : timeline.regions()) {
    for (const auto& r :
         region_replicates(set, timeline, region, kind, dir, window_days)) {
      p_sum += r.post_mean;
      q_sum += r.pre_mean;
      ++n;
    }
  }
  if (n == 0)
    throw NoMatchingTransitions("no " + transition_kind_name(kind) +
                                " transition with series data");
  return TransitionImpact{kind, dir, baseline, window_days,
                          percent_from_pq(p_sum / n, q_sum / n, baseline), n};
}

std::map<std::string, TransitionImpact> transition_impact_regional(
    const IndicatorSet& set, const TierTimeline& timeline, TransitionKind kind,
    Direction dir, int window_days, BaselineMode baseline) {
  std::map<std::string, TransitionImpact> out;
  for (const auto& region : timeline.regions()) {
    const auto reps =
        region_replicates(set, timeline, region, kind, dir, window_days);
    if (reps.empty()) continue;
    double p_sum = 0, q_sum = 0;
    for (const auto& r : reps) {
      p_sum += r.post_mean;
      q_sum += r.pre_mean;
    }
    const int n = static_cast<int>(reps.size());
    out[region] =
        TransitionImpact{kind, dir, baseline, window_days,
                         percent_from_pq(p_sum / n, q_sum / n, baseline), n};
  }
  if (out.empty())
    throw NoMatchingTransitions("no " + transition_kind_name(kind) +
                                " transition with series data");
  return out;
}

std::vector<TransitionKind> observed_kinds(const TierTimeline& timeline) {
  std::vector<TransitionKind> kinds;
  for (const auto& t : timeline.detect_transitions()) {
    const TransitionKind k{t.from, t.to};
    if (std::find(kinds.begin(), kinds.end(), k) == kinds.end())
      kinds.push_back(k);
  }
  std::sort(kinds.begin(), kinds.end());
  return kinds;
}

double week_over_week(const IndicatorSeries& series, Day d) {
  const auto now = series.raw_at_day(d);
  const auto then = series.raw_at_day(d.plus(-7));
  if (!now || !then)
    throw MissingValue("missing value on " +
                       format_day(now ? d.plus(-7) : d) + " for " +
                       series.area);
  if (*then == 0.0)
    throw ZeroBaseline("zero value on " + format_day(d.plus(-7)));
  return 100.0 * (*now - *then) / *then;
}

std::vector<std::pair<Day, double>> week_over_week_series(
    const IndicatorSeries& series) {
  std::vector<std::pair<Day, double>> out;
  for (const Day d : series.days()) {
    const auto then = series.raw_at_day(d.plus(-7));
    if (!then || *then == 0.0) continue;
    const auto now = series.raw_at_day(d);
    out.emplace_back(d, 100.0 * (*now - *then) / *then);
  }
  return out;
}

double period_variation(const IndicatorSeries& series, Day a_first, Day a_last,
                        Day b_first, Day b_last) {
  if (a_last < a_first || b_last < b_first)
    throw InsufficientCoverage("period bounds reversed");
  const SideAccum a = accumulate_side(series, a_first, a_last);
  const SideAccum b = accumulate_side(series, b_first, b_last);
  const int need_a = std::min(static_cast<int>(a_last.n - a_first.n) + 1, 3);
  const int need_b = std::min(static_cast<int>(b_last.n - b_first.n) + 1, 3);
  if (a.used < need_a || b.used < need_b)
    throw InsufficientCoverage(
        "period for " + series.area + " too sparse; missing: " +
        join_days(a.used < need_a ? a.missing : b.missing));
  const double mean_a = a.sum / a.used;
  const double mean_b = b.sum / b.used;
  if (mean_a == 0.0) throw ZeroBaseline("first period mean is zero");
  return 100.0 * (mean_b - mean_a) / mean_a;
}

namespace {

// Average ranks, 1-based; ties share the mean of the ranks they span.
std::vector<double> average_ranks(const std::vector<double>& xs) {
  const size_t n = xs.size();
  std::vector<size_t> idx(n);
  std::iota(idx.begin(), idx.end(), size_t{0});
  std::sort(idx.begin(), idx.end(),
            [&](size_t a, size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(n);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && xs[idx[j + 1]] == xs[idx[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (size_t k = i; k <= j; ++k) ranks[idx[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size())
    throw LengthMismatch("spearman inputs of length " +
                         std::to_string(xs.size()) + " and " +
                         std::to_string(ys.size()));
  const size_t n = xs.size();
  if (n < 2) throw DegenerateInput("spearman needs at least 2 points");
  const std::vector<double> rx = average_ranks(xs);
  const std::vector<double> ry = average_ranks(ys);
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (size_t i = 0; i < n; ++i) {
    const double dx = rx[i] - mx;
    const double dy = ry[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw DegenerateInput("constant input has no rank correlation");
  return sxy / std::sqrt(sxx * syy);
}

double variation_vs_cases(const std::map<std::string, double>& variation,
                          const std::map<std::string, double>& cases) {
  if (variation.size() != cases.size())
    throw KeyMismatch("region sets differ in size");
  std::vector<double> xs, ys;
  xs.reserve(variation.size());
  for (const auto& [region, v] : variation) {
    const auto it = cases.find(region);
    if (it == cases.end())
      throw KeyMismatch("region " + region + " has no cases value");
    xs.push_back(v);
    ys.push_back(it->second);
  }
  if (xs.size() < 3)
    throw DegenerateInput("need at least 3 regions, got " +
                          std::to_string(xs.size()));
  return spearman(xs, ys);
}

}  // namespace tierlab
