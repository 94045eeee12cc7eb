// Command-line front end. Subcommands mirror the library modules: synth,
// indicators, transitions, impact, wow, compare, relax, nowcast, gdp-impact,
// corr. Exit codes: 0 ok, 1 bad input, 2 internal failure.

#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tierlab/calendar.hpp"
#include "tierlab/errors.hpp"
#include "tierlab/geo.hpp"
#include "tierlab/impact.hpp"
#include "tierlab/indicators.hpp"
#include "tierlab/io_util.hpp"
#include "tierlab/nowcast.hpp"
#include "tierlab/odm.hpp"
#include "tierlab/relaxation.hpp"
#include "tierlab/reports.hpp"
#include "tierlab/synth.hpp"
#include "tierlab/tiers.hpp"

namespace {

using namespace tierlab;

// stdout unless an output path is given ("-" also means stdout)
void emit(const std::string& out, const std::string& content) {
  if (out.empty() || out == "-") {
    std::cout << content;
    return;
  }
  write_atomic(out, content);
}

const MonthlySeries& pick_series(
    const std::map<std::string, MonthlySeries>& monthly,
    const std::string& name) {
  const auto it = monthly.find(name);
  if (it == monthly.end())
    throw BadFile("monthly input has no series named " + name);
  return it->second;
}

std::vector<MonthKey> month_range(MonthKey a, MonthKey b) {
  if (b < a) throw InvalidConfig("month range end precedes start");
  std::vector<MonthKey> out;
  for (; a <= b; a = a.month == 12 ? MonthKey{a.year + 1, 1}
                                   : MonthKey{a.year, a.month + 1})
    out.push_back(a);
  return out;
}

// column index in a CSV header, by name
std::size_t column_of(const std::vector<std::string>& header,
                      const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw HeaderMismatch("no column named " + name);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"movement indicators under tiered restrictions"};
  app.require_subcommand(1);

  std::string fmt_name = "table";
  std::string out_path;
  const auto add_output = [&](CLI::App* sc) {
    sc->add_option("--format", fmt_name, "table, csv or json")
        ->capture_default_str();
    sc->add_option("-o,--out", out_path, "output file (default stdout)");
  };

  // ---- synth ----
  struct {
    std::string scenario, out_odm, out_manifest;
    std::optional<std::uint64_t> seed;
    std::optional<double> noise_cv;
  } syn;
  {
    auto* sc = app.add_subcommand("synth", "generate a synthetic ODM dataset");
    sc->add_option("--scenario", syn.scenario, "scenario .ini file")
        ->required();
    sc->add_option("--out-odm", syn.out_odm, "ODM CSV output path")
        ->required();
    sc->add_option("--out-manifest", syn.out_manifest,
                   "ground-truth manifest JSON output path")
        ->required();
    sc->add_option("--seed", syn.seed, "override the scenario seed");
    sc->add_option("--noise-cv", syn.noise_cv, "override the scenario noise");
    sc->callback([&] {
      Scenario scen = load_scenario(syn.scenario);
      if (syn.seed) scen.config.seed = *syn.seed;
      if (syn.noise_cv) scen.config.noise_cv = *syn.noise_cv;
      const SynthResult res = gen_synthetic(scen);
      write_atomic(syn.out_odm, odm_to_csv(res.records));
      write_atomic(syn.out_manifest, manifest_to_json(res.manifest));
      std::cerr << res.records.size() << " records, "
                << res.manifest.flow_count << " flows\n";
    });
  }

  // ---- indicators ----
  struct {
    std::string odm, areas, level = "region", bucket = "day";
    std::string reference = "auto", rejects;
    std::optional<int> hour_first, hour_last;
  } ind;
  {
    auto* sc = app.add_subcommand(
        "indicators", "aggregate ODM records into per-area series");
    sc->add_option("--odm", ind.odm, "ODM CSV input")->required();
    sc->add_option("--areas", ind.areas, "area registry CSV")->required();
    sc->add_option("--level", ind.level, "aggregation level")
        ->capture_default_str();
    sc->add_option("--bucket", ind.bucket, "output bucket (day or hour)")
        ->capture_default_str();
    sc->add_option("--hour-first", ind.hour_first,
                   "first hour kept (hourly input only)");
    sc->add_option("--hour-last", ind.hour_last,
                   "one past the last hour kept");
    sc->add_option("--reference", ind.reference,
                   "auto (first-week mean), none, or a number")
        ->capture_default_str();
    sc->add_option("--rejects", ind.rejects,
                   "write rejected input lines to this CSV");
    sc->add_option("-o,--out", out_path, "output file (default stdout)");
    sc->callback([&] {
      const GeoHierarchy geo = GeoHierarchy::load(resolve_data_path(ind.areas));
      const OdmParseResult parsed =
          parse_odm_file(resolve_data_path(ind.odm), geo);
      std::optional<HourWindow> window;
      if (ind.hour_first || ind.hour_last)
        window = HourWindow{ind.hour_first.value_or(0),
                            ind.hour_last.value_or(24)};
      IndicatorSet set =
          aggregate_indicators(parsed.records, geo, parse_level(ind.level),
                               parse_bucket(ind.bucket), window);
      if (ind.reference == "auto")
        normalize(set, default_reference(set));
      else if (ind.reference != "none")
        normalize(set, std::stod(ind.reference));
      if (!ind.rejects.empty())
        write_atomic(ind.rejects, rejects_to_csv(parsed.rejects));
      emit(out_path, series_to_csv(set));
      std::cerr << parsed.records.size() << " records in, "
                << parsed.rejects.size() << " rejected\n";
    });
  }

  // ---- transitions ----
  struct {
    std::string timeline, region;
  } tr;
  {
    auto* sc = app.add_subcommand("transitions", "list tier changes");
    sc->add_option("--timeline", tr.timeline, "tier timeline CSV")->required();
    sc->add_option("--region", tr.region, "restrict to one region");
    add_output(sc);
    sc->callback([&] {
      const TierTimeline tl = TierTimeline::load(resolve_data_path(tr.timeline));
      const auto ts = tr.region.empty() ? tl.detect_transitions()
                                        : tl.detect_transitions(tr.region);
      emit(out_path, render_transitions(ts, parse_report_format(fmt_name)));
    });
  }

  // ---- impact ----
  struct {
    std::string indicators, timeline, kind, direction = "total";
    std::string baseline = "pre";
    int window = 7;
    bool regional = false;
  } imp;
  {
    auto* sc = app.add_subcommand(
        "impact", "movement change around matching tier changes");
    sc->add_option("--indicators", imp.indicators, "indicator CSV")->required();
    sc->add_option("--timeline", imp.timeline, "tier timeline CSV")->required();
    sc->add_option("--kind", imp.kind, "tier change, e.g. yellow:red")
        ->required();
    sc->add_option("--direction", imp.direction, "series direction")
        ->capture_default_str();
    sc->add_option("--window", imp.window, "days on each side")
        ->capture_default_str();
    sc->add_option("--baseline", imp.baseline, "pre or post")
        ->capture_default_str();
    sc->add_flag("--regional", imp.regional, "add per-region rows");
    add_output(sc);
    sc->callback([&] {
      const IndicatorSet set =
          series_from_file(resolve_data_path(imp.indicators));
      const TierTimeline tl =
          TierTimeline::load(resolve_data_path(imp.timeline));
      const TransitionKind kind = parse_transition_kind(imp.kind);
      const Direction dir = parse_direction(imp.direction);
      const BaselineMode mode = imp.baseline == "post"
                                    ? BaselineMode::PostBaseline
                                    : BaselineMode::PreBaseline;
      const TransitionImpact overall = transition_impact_overall(
          set, tl, kind, dir, imp.window, mode);
      std::map<std::string, TransitionImpact> regional;
      if (imp.regional)
        regional = transition_impact_regional(set, tl, kind, dir, imp.window,
                                              mode);
      emit(out_path,
           render_impact(overall, regional, parse_report_format(fmt_name)));
    });
  }

  // ---- wow ----
  struct {
    std::string indicators, area, direction = "total";
  } ww;
  {
    auto* sc = app.add_subcommand("wow", "week-over-week percent changes");
    sc->add_option("--indicators", ww.indicators, "indicator CSV")->required();
    sc->add_option("--area", ww.area, "area code")->required();
    sc->add_option("--direction", ww.direction, "series direction")
        ->capture_default_str();
    add_output(sc);
    sc->callback([&] {
      const IndicatorSet set =
          series_from_file(resolve_data_path(ww.indicators));
      const Direction dir = parse_direction(ww.direction);
      const auto rows = week_over_week_series(set.at(ww.area, dir));
      emit(out_path,
           render_wow(ww.area, dir, rows, parse_report_format(fmt_name)));
    });
  }

  // ---- compare ----
  struct {
    std::string table, x = "variation_percent", y = "cases";
  } cmp;
  {
    auto* sc = app.add_subcommand(
        "compare", "rank correlation between two per-region columns");
    sc->add_option("--table", cmp.table,
                   "CSV with a region column plus the two compared columns")
        ->required();
    sc->add_option("--x", cmp.x, "first column name")->capture_default_str();
    sc->add_option("--y", cmp.y, "second column name")->capture_default_str();
    add_output(sc);
    sc->callback([&] {
      const std::string text = slurp(resolve_data_path(cmp.table));
      std::istringstream in(text);
      std::string line;
      std::vector<std::string> header;
      std::vector<CompareRow> rows;
      std::map<std::string, double> xs, ys;
      while (std::getline(in, line)) {
        if (trim(line).empty() || trim(line)[0] == '#') continue;
        const auto fields = split_csv(line);
        if (header.empty()) {
          header = fields;
          continue;
        }
        CompareRow r;
        r.region = fields.at(column_of(header, "region"));
        r.variation = std::stod(fields.at(column_of(header, cmp.x)));
        r.cases = std::stod(fields.at(column_of(header, cmp.y)));
        xs[r.region] = r.variation;
        ys[r.region] = r.cases;
        rows.push_back(std::move(r));
      }
      const double rho = variation_vs_cases(xs, ys);
      emit(out_path, render_compare(rows, rho, parse_report_format(fmt_name)));
    });
  }

  // ---- relax ----
  struct {
    std::string indicators, timeline, areas, holidays, first, last;
  } rx;
  {
    auto* sc = app.add_subcommand(
        "relax", "regress weekly movement ratios on tier changes");
    sc->add_option("--indicators", rx.indicators,
                   "province-level indicator CSV")
        ->required();
    sc->add_option("--timeline", rx.timeline, "tier timeline CSV")->required();
    sc->add_option("--areas", rx.areas, "area registry CSV")->required();
    sc->add_option("--holidays", rx.holidays, "bank holiday list");
    sc->add_option("--first", rx.first, "first day considered")->required();
    sc->add_option("--last", rx.last, "last day considered")->required();
    add_output(sc);
    sc->callback([&] {
      const IndicatorSet set =
          series_from_file(resolve_data_path(rx.indicators));
      const TierTimeline tl = TierTimeline::load(resolve_data_path(rx.timeline));
      const GeoHierarchy geo = GeoHierarchy::load(resolve_data_path(rx.areas));
      HolidayCalendar cal;
      if (!rx.holidays.empty())
        cal = HolidayCalendar::load(resolve_data_path(rx.holidays));
      const DesignMatrix d = build_relaxation_design(
          set, tl, geo, cal, parse_day(rx.first), parse_day(rx.last));
      const OlsFit fit = ols_fit(d);
      emit(out_path, render_fit("weekly movement ratio vs tier changes", fit,
                                parse_report_format(fmt_name)));
    });
  }

  // ---- nowcast ----
  struct {
    std::string monthly, gdp = "gdp", energy = "energy", mobility = "mobility";
    std::string fit_from, fit_to, fit2_from, fit2_to, from, to;
  } nc;
  {
    auto* sc = app.add_subcommand(
        "nowcast", "monthly GDP from energy and mobility");
    sc->add_option("--monthly", nc.monthly, "monthly series CSV")->required();
    sc->add_option("--gdp", nc.gdp, "GDP series name")->capture_default_str();
    sc->add_option("--energy", nc.energy, "energy series name")
        ->capture_default_str();
    sc->add_option("--mobility", nc.mobility, "mobility series name")
        ->capture_default_str();
    sc->add_option("--fit-from", nc.fit_from, "GDP/energy fit window start")
        ->required();
    sc->add_option("--fit-to", nc.fit_to, "GDP/energy fit window end")
        ->required();
    sc->add_option("--fit2-from", nc.fit2_from,
                   "energy/mobility fit window start (default --fit-from)");
    sc->add_option("--fit2-to", nc.fit2_to,
                   "energy/mobility fit window end (default --fit-to)");
    sc->add_option("--from", nc.from, "first reported month")->required();
    sc->add_option("--to", nc.to, "last reported month")->required();
    add_output(sc);
    sc->callback([&] {
      const auto monthly = load_monthly(resolve_data_path(nc.monthly));
      const MonthlySeries& gdp = pick_series(monthly, nc.gdp);
      const MonthlySeries& energy = pick_series(monthly, nc.energy);
      const MonthlySeries& mobility = pick_series(monthly, nc.mobility);
      const OlsFit fit1 = fit_gdp_energy(gdp, energy,
                                         parse_month_key(nc.fit_from),
                                         parse_month_key(nc.fit_to));
      const OlsFit fit2 = fit_energy_mobility(
          energy, mobility,
          parse_month_key(nc.fit2_from.empty() ? nc.fit_from : nc.fit2_from),
          parse_month_key(nc.fit2_to.empty() ? nc.fit_to : nc.fit2_to));
      const auto rows = nowcast_gdp(
          fit1, fit2, gdp, energy, mobility,
          month_range(parse_month_key(nc.from), parse_month_key(nc.to)));
      emit(out_path, render_nowcast(rows, parse_report_format(fmt_name)));
    });
  }

  // ---- gdp-impact ----
  struct {
    std::string indicators, timeline, weights, monthly;
    std::string gdp = "gdp", energy = "energy", mobility = "mobility";
    std::string fit_from, fit_to, fit2_from, fit2_to, base;
    int window = 7;
  } gi;
  {
    auto* sc = app.add_subcommand(
        "gdp-impact", "GDP cost per day of each tier change");
    sc->add_option("--indicators", gi.indicators,
                   "region-level indicator CSV")
        ->required();
    sc->add_option("--timeline", gi.timeline, "tier timeline CSV")->required();
    sc->add_option("--weights", gi.weights, "regional GDP weight CSV")
        ->required();
    sc->add_option("--monthly", gi.monthly, "monthly series CSV")->required();
    sc->add_option("--gdp", gi.gdp, "GDP series name")->capture_default_str();
    sc->add_option("--energy", gi.energy, "energy series name")
        ->capture_default_str();
    sc->add_option("--mobility", gi.mobility, "mobility series name")
        ->capture_default_str();
    sc->add_option("--fit-from", gi.fit_from, "GDP/energy fit window start")
        ->required();
    sc->add_option("--fit-to", gi.fit_to, "GDP/energy fit window end")
        ->required();
    sc->add_option("--fit2-from", gi.fit2_from,
                   "energy/mobility fit window start (default --fit-from)");
    sc->add_option("--fit2-to", gi.fit2_to,
                   "energy/mobility fit window end (default --fit-to)");
    sc->add_option("--base-month", gi.base,
                   "month whose regional mean mobility indexes to 100")
        ->required();
    sc->add_option("--window", gi.window, "days on each side")
        ->capture_default_str();
    add_output(sc);
    sc->callback([&] {
      const IndicatorSet set =
          series_from_file(resolve_data_path(gi.indicators));
      const TierTimeline tl = TierTimeline::load(resolve_data_path(gi.timeline));
      const auto weights = load_weights(resolve_data_path(gi.weights));
      const auto monthly = load_monthly(resolve_data_path(gi.monthly));
      const OlsFit fit1 = fit_gdp_energy(pick_series(monthly, gi.gdp),
                                         pick_series(monthly, gi.energy),
                                         parse_month_key(gi.fit_from),
                                         parse_month_key(gi.fit_to));
      const OlsFit fit2 = fit_energy_mobility(
          pick_series(monthly, gi.energy), pick_series(monthly, gi.mobility),
          parse_month_key(gi.fit2_from.empty() ? gi.fit_from : gi.fit2_from),
          parse_month_key(gi.fit2_to.empty() ? gi.fit_to : gi.fit2_to));
      const MonthKey base = parse_month_key(gi.base);
      const auto daily =
          regional_daily_gdp(fit1, fit2, set, base.year, base.month);
      const auto impacts = transition_gdp_impact(daily, tl, weights, gi.window);
      emit(out_path,
           render_gdp_impact(impacts, parse_report_format(fmt_name)));
    });
  }

  // ---- corr ----
  struct {
    std::string monthly;
    std::vector<std::string> series;
  } cr;
  {
    auto* sc = app.add_subcommand(
        "corr", "pairwise correlations between monthly series");
    sc->add_option("--monthly", cr.monthly, "monthly series CSV")->required();
    sc->add_option("--series", cr.series,
                   "series names (default: all, sorted)")
        ->delimiter(',');
    add_output(sc);
    sc->callback([&] {
      const auto monthly = load_monthly(resolve_data_path(cr.monthly));
      std::vector<std::string> names = cr.series;
      if (names.empty())
        for (const auto& [name, _] : monthly) names.push_back(name);
      std::vector<const MonthlySeries*> series;
      for (const auto& name : names)
        series.push_back(&pick_series(monthly, name));
      emit(out_path,
           render_corr(correlation_matrix(series),
                       parse_report_format(fmt_name)));
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
