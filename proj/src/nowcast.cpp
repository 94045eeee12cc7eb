#include "tierlab/nowcast.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "tierlab/errors.hpp"
#include "tierlab/io_util.hpp"
#include "tierlab/student_t.hpp"

namespace tierlab {

std::string month_key_name(MonthKey m) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d", m.year, m.month);
  return buf;
}

MonthKey parse_month_key(const std::string& s) {
  const auto dash = s.find('-');
  if (dash == std::string::npos)
    throw BadDate("expected YYYY-MM, got '" + s + "'");
  MonthKey m;
  try {
    m.year = std::stoi(s.substr(0, dash));
    m.month = std::stoi(s.substr(dash + 1));
  } catch (const std::exception&) {
    throw BadDate("expected YYYY-MM, got '" + s + "'");
  }
  if (m.month < 1 || m.month > 12)
    throw BadDate("month out of range in '" + s + "'");
  return m;
}

std::map<std::string, MonthlySeries> load_monthly(const std::string& path) {
  std::istringstream in(slurp(path));
  std::string line;
  std::size_t line_no = 0;
  if (!read_header(in, line, line_no) ||
      split_csv(line) !=
          std::vector<std::string>{"series", "year", "month", "value"})
    throw HeaderMismatch("monthly file " + path +
                         ": expected header series,year,month,value");
  std::map<std::string, MonthlySeries> out;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto f = split_csv(line);
    if (f.size() != 4)
      throw BadFile(path + ":" + std::to_string(line_no) +
                    ": expected 4 fields");
    MonthKey m{std::stoi(f[1]), std::stoi(f[2])};
    if (m.month < 1 || m.month > 12)
      throw BadFile(path + ":" + std::to_string(line_no) + ": bad month");
    auto& s = out[f[0]];
    s.name = f[0];
    s.values[m] = std::stod(f[3]);
  }
  return out;
}

MonthlySeries normalize_monthly(const MonthlySeries& s, MonthKey base) {
  const auto it = s.values.find(base);
  if (it == s.values.end() || it->second == 0.0)
    throw MissingBasePeriod("series " + s.name + " has no usable value in " +
                            month_key_name(base));
  MonthlySeries out;
  out.name = s.name;
  const double b = it->second;
  for (const auto& [m, v] : s.values) out.values[m] = 100.0 * v / b;
  return out;
}

namespace {

std::vector<MonthKey> overlap_months(const MonthlySeries& a,
                                     const MonthlySeries& b, MonthKey from,
                                     MonthKey to) {
  std::vector<MonthKey> out;
  for (const auto& [m, _] : a.values)
    if (m >= from && m <= to && b.values.count(m)) out.push_back(m);
  return out;
}

}  // namespace

OlsFit fit_gdp_energy(const MonthlySeries& gdp, const MonthlySeries& energy,
                      MonthKey from, MonthKey to) {
  const auto months = overlap_months(gdp, energy, from, to);
  if (months.size() < 6)
    throw InsufficientOverlap("gdp/energy overlap of " +
                              std::to_string(months.size()) +
                              " months, need 6");
  DesignMatrix d;
  d.names = {DesignMatrix::kIntercept, "energy", "energy_sq"};
  for (const MonthKey m : months) {
    const double e = energy.values.at(m);
    d.add_row(gdp.values.at(m), {1.0, e, e * e});
  }
  return ols_fit(d);
}

OlsFit fit_energy_mobility(const MonthlySeries& energy,
                           const MonthlySeries& mobility, MonthKey from,
                           MonthKey to) {
  const auto months = overlap_months(energy, mobility, from, to);
  if (months.size() < 3)
    throw InsufficientOverlap("energy/mobility overlap of " +
                              std::to_string(months.size()) +
                              " months, need 3");
  DesignMatrix d;
  d.names = {DesignMatrix::kIntercept, "mobility"};
  for (const MonthKey m : months)
    d.add_row(energy.values.at(m), {1.0, mobility.values.at(m)});
  return ols_fit(d);
}

const char* nowcast_kind_name(NowcastKind k) {
  switch (k) {
    case NowcastKind::Observed: return "observed";
    case NowcastKind::ForecastEq1: return "forecast_eq1";
    case NowcastKind::ForecastChain: return "forecast_chain";
  }
  return "?";
}

namespace {

double gdp_point(const OlsFit& fit1, double e) {
  return fit1.terms[0].coef + fit1.terms[1].coef * e +
         fit1.terms[2].coef * e * e;
}

}  // namespace

std::vector<NowcastRow> nowcast_gdp(const OlsFit& gdp_energy,
                                    const OlsFit& energy_mobility,
                                    const MonthlySeries& gdp,
                                    const MonthlySeries& energy,
                                    const MonthlySeries& mobility,
                                    const std::vector<MonthKey>& months) {
  std::vector<NowcastRow> out;
  const double tq = student_t_quantile(0.975, gdp_energy.df_residual);
  for (const MonthKey m : months) {
    NowcastRow row;
    row.month = m;
    if (const auto g = gdp.values.find(m); g != gdp.values.end()) {
      row.kind = NowcastKind::Observed;
      row.value = g->second;
    } else if (const auto e = energy.values.find(m); e != energy.values.end()) {
      row.kind = NowcastKind::ForecastEq1;
      const double ev = e->second;
      row.energy_used = ev;
      row.value = gdp_point(gdp_energy, ev);
      row.half_width = tq * std::sqrt(mean_response_variance(
                                gdp_energy, {1.0, ev, ev * ev}));
    } else if (const auto mo = mobility.values.find(m);
               mo != mobility.values.end()) {
      row.kind = NowcastKind::ForecastChain;
      const double mv = mo->second;
      const double e_hat =
          energy_mobility.terms[0].coef + energy_mobility.terms[1].coef * mv;
      row.energy_used = e_hat;
      row.value = gdp_point(gdp_energy, e_hat);
      const double var1 = mean_response_variance(gdp_energy,
                                                 {1.0, e_hat, e_hat * e_hat});
      const double var2 =
          mean_response_variance(energy_mobility, {1.0, mv}) +
          energy_mobility.resid_se * energy_mobility.resid_se;
      const double slope =
          gdp_energy.terms[1].coef + 2.0 * gdp_energy.terms[2].coef * e_hat;
      row.half_width = tq * std::sqrt(var1 + slope * slope * var2);
    } else {
      throw NoInputForMonth("no gdp, energy or mobility for " +
                            month_key_name(m));
    }
    out.push_back(row);
  }
  return out;
}

std::map<std::string, IndicatorSeries> regional_daily_gdp(
    const OlsFit& gdp_energy, const OlsFit& energy_mobility,
    const IndicatorSet& regional_mobility, int base_year, int base_month) {
  std::map<std::string, IndicatorSeries> out;
  const double b0 = energy_mobility.terms[0].coef;
  const double b1 = energy_mobility.terms[1].coef;
  for (const auto& [key, series] : regional_mobility.series) {
    if (key.direction != Direction::Total) continue;
    if (key.area == regional_mobility.country) continue;
    // base-month mean, raw units
    double sum = 0;
    int cnt = 0;
    for (const auto& [t, v] : series.points) {
      const Day d = t.day();
      if (d.year() == base_year && d.month() == base_month) {
        sum += v;
        ++cnt;
      }
    }
    if (cnt == 0)
      throw MissingBasePeriod("region " + key.area + " has no days in " +
                              std::to_string(base_year) + "-" +
                              std::to_string(base_month));
    const double base = sum / cnt;
    if (base == 0.0)
      throw MissingBasePeriod("region " + key.area + " base-month mean is 0");
    IndicatorSeries g;
    g.area = key.area;
    g.direction = Direction::Total;
    g.bucket = series.bucket;
    g.reference = 1.0;
    for (const auto& [t, v] : series.points) {
      const double idx = 100.0 * v / base;
      const double e_hat = b0 + b1 * idx;
      g.points[t] = gdp_point(gdp_energy, e_hat);
    }
    out[key.area] = std::move(g);
  }
  return out;
}

std::map<TransitionKind, GdpImpact> transition_gdp_impact(
    const std::map<std::string, IndicatorSeries>& gdp_daily,
    const TierTimeline& timeline, const std::map<std::string, double>& weights,
    int window_days) {
  // region -> kind -> replicate percent-per-day values
  std::map<TransitionKind, std::map<std::string, std::vector<double>>> by_kind;
  for (const auto& [region, series] : gdp_daily) {
    if (!timeline.has_region(region)) continue;
    const auto transitions = timeline.detect_transitions(region);
    for (size_t i = 0; i < transitions.size(); ++i) {
      const Transition& t = transitions[i];
      std::optional<Day> pre_bound;
      if (i > 0) pre_bound = transitions[i - 1].date;
      std::optional<Day> post_bound;
      if (i + 1 < transitions.size())
        post_bound = transitions[i + 1].date.prev();
      const WindowStats w =
          window_stats(series, t.date, window_days, pre_bound, post_bound);
      const double pre = w.pre_sum / w.pre_days;
      const double post = w.post_sum / w.post_days;
      if (pre == 0.0) throw ZeroBaseline("GDP level zero before transition");
      const double pct_per_day = 100.0 * (post - pre) / pre / window_days;
      by_kind[TransitionKind{t.from, t.to}][region].push_back(pct_per_day);
    }
  }
  std::map<TransitionKind, GdpImpact> out;
  for (const auto& [kind, regions] : by_kind) {
    double wsum = 0;
    for (const auto& [region, _] : regions) {
      const auto it = weights.find(region);
      if (it == weights.end())
        throw MissingWeight("region " + region + " has no GDP weight");
      wsum += it->second;
    }
    GdpImpact imp;
    imp.kind = kind;
    for (const auto& [region, reps] : regions) {
      double mean = 0;
      for (double v : reps) mean += v;
      mean /= reps.size();
      imp.percent_per_day += weights.at(region) / wsum * mean;
      imp.replicates += static_cast<int>(reps.size());
    }
    imp.regions = static_cast<int>(regions.size());
    out[kind] = imp;
  }
  return out;
}

std::map<std::string, double> load_weights(const std::string& path) {
  std::istringstream in(slurp(path));
  std::string line;
  std::size_t line_no = 0;
  if (!read_header(in, line, line_no) ||
      split_csv(line) != std::vector<std::string>{"region", "weight"})
    throw HeaderMismatch("weights file " + path +
                         ": expected header region,weight");
  std::map<std::string, double> out;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto f = split_csv(line);
    if (f.size() != 2)
      throw BadFile(path + ":" + std::to_string(line_no) +
                    ": expected 2 fields");
    out[f[0]] = std::stod(f[1]) / 100.0;
  }
  return out;
}

CorrelationMatrix correlation_matrix(
    const std::vector<const MonthlySeries*>& series) {
  const std::size_t k = series.size();
  CorrelationMatrix cm;
  cm.names.reserve(k);
  for (const auto* s : series) cm.names.push_back(s->name);
  cm.r.assign(k * k, 1.0);
  cm.n_overlap.assign(k * k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    cm.n_overlap[i * k + i] = static_cast<int>(series[i]->values.size());
    for (std::size_t j = i + 1; j < k; ++j) {
      std::vector<double> xs, ys;
      for (const auto& [m, v] : series[i]->values) {
        const auto it = series[j]->values.find(m);
        if (it != series[j]->values.end()) {
          xs.push_back(v);
          ys.push_back(it->second);
        }
      }
      if (xs.size() < 3)
        throw InsufficientOverlap("series " + cm.names[i] + " and " +
                                  cm.names[j] + " share only " +
                                  std::to_string(xs.size()) + " months");
      const std::size_t n = xs.size();
      double mx = 0, my = 0;
      for (std::size_t t = 0; t < n; ++t) {
        mx += xs[t];
        my += ys[t];
      }
      mx /= n;
      my /= n;
      double sxy = 0, sxx = 0, syy = 0;
      for (std::size_t t = 0; t < n; ++t) {
        sxy += (xs[t] - mx) * (ys[t] - my);
        sxx += (xs[t] - mx) * (xs[t] - mx);
        syy += (ys[t] - my) * (ys[t] - my);
      }
      if (sxx == 0.0 || syy == 0.0)
        throw DegenerateInput("constant series " +
                              (sxx == 0.0 ? cm.names[i] : cm.names[j]));
      const double r = sxy / std::sqrt(sxx * syy);
      cm.r[i * k + j] = r;
      cm.r[j * k + i] = r;
      cm.n_overlap[i * k + j] = static_cast<int>(n);
      cm.n_overlap[j * k + i] = static_cast<int>(n);
    }
  }
  return cm;
}

}  // namespace tierlab
