#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tierlab/calendar.hpp"
#include "tierlab/impact.hpp"
#include "tierlab/indicators.hpp"
#include "tierlab/ols.hpp"
#include "tierlab/tiers.hpp"

namespace tierlab {

struct MonthKey {
  int year = 2020;
  int month = 1;
  auto operator<=>(const MonthKey&) const = default;
};

std::string month_key_name(MonthKey m);          // "2020-09"
MonthKey parse_month_key(const std::string& s);  // accepts "2020-09", "2020-9"

// One monthly indicator (gdp, energy, mobility, ...), index units.
struct MonthlySeries {
  std::string name;
  std::map<MonthKey, double> values;
};

// CSV with header "series,year,month,value"; '#' comments allowed.
std::map<std::string, MonthlySeries> load_monthly(const std::string& path);

// Rescales so that the base month equals 100 exactly. Throws
// MissingBasePeriod when the base month is absent or zero.
MonthlySeries normalize_monthly(const MonthlySeries& s, MonthKey base);

// GDP on energy: gdp_t = a0 + a1 * energy_t + a2 * energy_t^2, over months
// present in both series inside [from, to]. Fewer than 6 overlapping months
// throws InsufficientOverlap; a constant energy series surfaces as
// RankDeficient from the solver. Term names: (Intercept), energy, energy_sq.
OlsFit fit_gdp_energy(const MonthlySeries& gdp, const MonthlySeries& energy,
                      MonthKey from, MonthKey to);

// Energy on mobility: energy_t = b0 + b1 * mobility_t; needs 3 overlapping
// months. Term names: (Intercept), mobility.
OlsFit fit_energy_mobility(const MonthlySeries& energy,
                           const MonthlySeries& mobility, MonthKey from,
                           MonthKey to);

enum class NowcastKind { Observed, ForecastEq1, ForecastChain };
const char* nowcast_kind_name(NowcastKind k);

struct NowcastRow {
  MonthKey month;
  NowcastKind kind = NowcastKind::Observed;
  double value = 0;
  // 95% half-width; absent on observed rows
  std::optional<double> half_width;
  // energy input of the forecast: observed (Eq1) or predicted (chain)
  std::optional<double> energy_used;
};

// One row per requested month: observed GDP wins, then ForecastEq1 from
// observed energy, then ForecastChain from mobility through predicted
// energy. No input at all throws NoInputForMonth.
//
// ForecastChain evaluates the GDP equation at the predicted energy e_hat, so
// its point equals ForecastEq1's at that energy. Its variance adds the
// energy-equation prediction variance, scaled by the local slope
// (a1 + 2 a2 e_hat)^2, to the GDP equation's mean-response variance
// (first-order propagation); the t multiplier uses the GDP fit's residual df.
std::vector<NowcastRow> nowcast_gdp(const OlsFit& gdp_energy,
                                    const OlsFit& energy_mobility,
                                    const MonthlySeries& gdp,
                                    const MonthlySeries& energy,
                                    const MonthlySeries& mobility,
                                    const std::vector<MonthKey>& months);

// Daily regional GDP index: each region's daily Total mobility is rescaled
// so its base-month mean is 100 (MissingBasePeriod when uncovered), then fed
// through both equations. Returns region -> daily GDP-hat series.
std::map<std::string, IndicatorSeries> regional_daily_gdp(
    const OlsFit& gdp_energy, const OlsFit& energy_mobility,
    const IndicatorSet& regional_mobility, int base_year, int base_month);

struct GdpImpact {
  TransitionKind kind;
  double percent_per_day = 0;  // window percent change / window length
  int regions = 0;
  int replicates = 0;
};

// Per transition kind: replicate value = percent change of GDP-hat window
// means across the transition divided by window_days; replicates average
// within a region, regions combine with `weights` renormalized over the
// participating regions. Regions without transitions never enter (their
// weight is simply not drawn). Throws MissingWeight.
std::map<TransitionKind, GdpImpact> transition_gdp_impact(
    const std::map<std::string, IndicatorSeries>& gdp_daily,
    const TierTimeline& timeline,
    const std::map<std::string, double>& weights, int window_days = 7);

// Region weight file, header "region,weight", weight in percent (shares of
// national GDP). Values are divided by 100 on load.
std::map<std::string, double> load_weights(const std::string& path);

struct CorrelationMatrix {
  std::vector<std::string> names;
  std::vector<double> r;        // k*k, row-major, Pearson
  std::vector<int> n_overlap;   // k*k pairwise month counts

  double at(std::size_t i, std::size_t j) const {
    return r[i * names.size() + j];
  }
};

// Pairwise-complete Pearson correlations between monthly series; any pair
// with fewer than 3 common months throws InsufficientOverlap.
CorrelationMatrix correlation_matrix(
    const std::vector<const MonthlySeries*>& series);

}  // namespace tierlab
