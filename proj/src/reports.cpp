#include "tierlab/reports.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "tierlab/errors.hpp"

namespace tierlab {
namespace {

using json = nlohmann::ordered_json;

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

// full-precision form for CSV so files round-trip
std::string fmt_full(double v) { return fmt(v, "%.17g"); }

const char* baseline_name(BaselineMode b) {
  return b == BaselineMode::PreBaseline ? "pre" : "post";
}

const char* stars(double p) {
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  if (p < 0.1) return ".";
  return "";
}

// Right-aligns every column but the first.
std::string layout(const std::vector<std::vector<std::string>>& rows) {
  std::size_t cols = 0;
  for (const auto& r : rows) cols = std::max(cols, r.size());
  std::vector<std::size_t> width(cols, 0);
  for (const auto& r : rows)
    for (std::size_t j = 0; j < r.size(); ++j)
      width[j] = std::max(width[j], r[j].size());
  std::string out;
  for (const auto& r : rows) {
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (j) out += "  ";
      const int pad = static_cast<int>(width[j] - r[j].size());
      if (j == 0) {
        out += r[j];
        if (j + 1 < r.size()) out.append(pad, ' ');
      } else {
        out.append(pad, ' ');
        out += r[j];
      }
    }
    out += '\n';
  }
  return out;
}

json json_doc(const char* kind) {
  json j;
  j["schema_version"] = 1;
  j["kind"] = kind;
  return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json impact_json(const TransitionImpact& im) {
  json j;
  j["kind"] = transition_kind_name(im.kind);
  j["direction"] = direction_name(im.direction);
  j["baseline"] = baseline_name(im.baseline);
  j["window_days"] = im.window_days;
  j["percent"] = im.percent;
  j["replicates"] = im.replicates;
  return j;
}

}  // namespace

ReportFormat parse_report_format(const std::string& s) {
  if (s == "table") return ReportFormat::Table;
  if (s == "csv") return ReportFormat::Csv;
  if (s == "json") return ReportFormat::Json;
  throw InvalidConfig("unknown report format: " + s +
                      " (expected table, csv or json)");
}

std::string render_transitions(const std::vector<Transition>& ts,
                               ReportFormat f) {
  if (f == ReportFormat::Json) {
    json j = json_doc("transitions");
    json arr = json::array();
    for (const auto& t : ts) {
      json r;
      r["region"] = t.region;
      r["date"] = format_day(t.date);
      r["from"] = tier_name(t.from);
      r["to"] = tier_name(t.to);
      arr.push_back(std::move(r));
    }
    j["transitions"] = std::move(arr);
    return dump(j);
  }
  if (f == ReportFormat::Csv) {
    std::string out = "region,date,from,to\n";
    for (const auto& t : ts)
      out += t.region + "," + format_day(t.date) + "," + tier_name(t.from) +
             "," + tier_name(t.to) + "\n";
    return out;
  }
  std::vector<std::vector<std::string>> rows{{"region", "date", "from", "to"}};
  for (const auto& t : ts)
    rows.push_back({t.region, format_day(t.date), tier_name(t.from),
                    tier_name(t.to)});
  return layout(rows);
}

std::string render_impact(const TransitionImpact& overall,
                          const std::map<std::string, TransitionImpact>& regional,
                          ReportFormat f) {
  if (f == ReportFormat::Json) {
    json j = json_doc("transition_impact");
    j["overall"] = impact_json(overall);
    json reg = json::object();
    for (const auto& [region, im] : regional) reg[region] = impact_json(im);
    j["regional"] = std::move(reg);
    return dump(j);
  }
  if (f == ReportFormat::Csv) {
    std::string out =
        "scope,kind,direction,baseline,window_days,percent,replicates\n";
    const auto line = [&](const std::string& scope, const TransitionImpact& im) {
      out += scope + "," + transition_kind_name(im.kind) + "," +
             direction_name(im.direction) + "," + baseline_name(im.baseline) +
             "," + std::to_string(im.window_days) + "," + fmt_full(im.percent) +
             "," + std::to_string(im.replicates) + "\n";
    };
    line("overall", overall);
    for (const auto& [region, im] : regional) line(region, im);
    return out;
  }
  std::vector<std::vector<std::string>> rows{
      {"scope", "kind", "dir", "baseline", "window", "percent", "repl"}};
  const auto row = [&](const std::string& scope, const TransitionImpact& im) {
    rows.push_back({scope, transition_kind_name(im.kind),
                    direction_name(im.direction), baseline_name(im.baseline),
                    std::to_string(im.window_days), fmt(im.percent, "%+.2f"),
                    std::to_string(im.replicates)});
  };
  row("overall", overall);
  for (const auto& [region, im] : regional) row(region, im);
  return layout(rows);
}

std::string render_wow(const std::string& area, Direction dir,
                       const std::vector<std::pair<Day, double>>& rows,
                       ReportFormat f) {
  if (f == ReportFormat::Json) {
    json j = json_doc("week_over_week");
    j["area"] = area;
    j["direction"] = direction_name(dir);
    json arr = json::array();
    for (const auto& [d, pct] : rows) {
      json r;
      r["date"] = format_day(d);
      r["percent"] = pct;
      arr.push_back(std::move(r));
    }
    j["values"] = std::move(arr);
    return dump(j);
  }
  if (f == ReportFormat::Csv) {
    std::string out = "area,direction,date,percent\n";
    for (const auto& [d, pct] : rows)
      out += area + "," + std::string(direction_name(dir)) + "," +
             format_day(d) + "," + fmt_full(pct) + "\n";
    return out;
  }
  std::vector<std::vector<std::string>> t{{"date", "percent"}};
  for (const auto& [d, pct] : rows)
    t.push_back({format_day(d), fmt(pct, "%+.2f")});
  return std::string(area) + " " + direction_name(dir) +
         " week-over-week\n" + layout(t);
}

std::string render_compare(const std::vector<CompareRow>& rows, double rho,
                           ReportFormat f) {
  if (f == ReportFormat::Json) {
    json j = json_doc("variation_vs_cases");
    j["spearman_rho"] = rho;
    json arr = json::array();
    for (const auto& r : rows) {
      json x;
      x["region"] = r.region;
      x["variation_percent"] = r.variation;
      x["cases"] = r.cases;
      arr.push_back(std::move(x));
    }
    j["regions"] = std::move(arr);
    return dump(j);
  }
  if (f == ReportFormat::Csv) {
    std::string out = "# spearman_rho = " + fmt_full(rho) + "\n";
    out += "region,variation_percent,cases\n";
    for (const auto& r : rows)
      out += r.region + "," + fmt_full(r.variation) + "," + fmt_full(r.cases) +
             "\n";
    return out;
  }
  std::vector<std::vector<std::string>> t{{"region", "variation%", "cases"}};
  for (const auto& r : rows)
    t.push_back({r.region, fmt(r.variation, "%+.1f"), fmt(r.cases, "%.0f")});
  return layout(t) + "spearman rho = " + fmt(rho) + "\n";
}

std::string render_fit(const std::string& title, const OlsFit& fit,
                       ReportFormat f) {
  if (f == ReportFormat::Json) {
    json j = json_doc("regression_fit");
    j["title"] = title;
    json terms = json::array();
    for (const auto& t : fit.terms) {
      json x;
      x["name"] = t.name;
      x["coef"] = t.coef;
      x["se"] = t.se;
      x["t"] = t.t_stat;
      x["p"] = t.p_value;
      terms.push_back(std::move(x));
    }
    j["terms"] = std::move(terms);
    j["n"] = fit.n;
    j["df_residual"] = fit.df_residual;
    j["r2"] = fit.r2;
    j["adj_r2"] = fit.adj_r2;
    j["resid_se"] = fit.resid_se;
    j["f_stat"] = fit.f_stat;
    j["f_df1"] = fit.f_df1;
    j["f_df2"] = fit.f_df2;
    return dump(j);
  }
  if (f == ReportFormat::Csv) {
    std::string out = "term,coef,se,t,p\n";
    for (const auto& t : fit.terms)
      out += t.name + "," + fmt_full(t.coef) + "," + fmt_full(t.se) + "," +
             fmt_full(t.t_stat) + "," + fmt_full(t.p_value) + "\n";
    return out;
  }
  std::vector<std::vector<std::string>> rows{
      {"term", "coef", "se", "t", "p", ""}};
  for (const auto& t : fit.terms)
    rows.push_back({t.name, fmt(t.coef, "%.5g"), fmt(t.se, "%.4g"),
                    fmt(t.t_stat, "%.3f"),
                    t.p_value < 2e-16 ? "<2e-16" : fmt(t.p_value, "%.4g"),
                    stars(t.p_value)});
  std::ostringstream out;
  if (!title.empty()) out << title << "\n\n";
  out << layout(rows);
  out << "---\nsignif. codes: 0 '***' 0.001 '**' 0.01 '*' 0.05 '.' 0.1\n";
  out << "n = " << fit.n << ", residual SE = " << fmt(fit.resid_se, "%.4g")
      << " on " << fit.df_residual << " df\n";
  out << "R^2 = " << fmt(fit.r2, "%.4g") << ", adjusted R^2 = "
      << fmt(fit.adj_r2, "%.4g");
  if (fit.f_df1 > 0)
    out << ", F(" << fit.f_df1 << ", " << fit.f_df2
        << ") = " << fmt(fit.f_stat, "%.4g");
  out << "\n";
  return out.str();
}

std::string render_nowcast(const std::vector<NowcastRow>& rows,
                           ReportFormat f) {
  if (f == ReportFormat::Json) {
    json j = json_doc("nowcast");
    json arr = json::array();
    for (const auto& r : rows) {
      json x;
      x["month"] = month_key_name(r.month);
      x["source"] = nowcast_kind_name(r.kind);
      x["value"] = r.value;
      if (r.half_width) x["half_width_95"] = *r.half_width;
      if (r.energy_used) x["energy_used"] = *r.energy_used;
      arr.push_back(std::move(x));
    }
    j["months"] = std::move(arr);
    return dump(j);
  }
  if (f == ReportFormat::Csv) {
    std::string out = "month,source,value,half_width_95,energy_used\n";
    for (const auto& r : rows) {
      out += month_key_name(r.month) + "," + nowcast_kind_name(r.kind) + "," +
             fmt_full(r.value) + ",";
      if (r.half_width) out += fmt_full(*r.half_width);
      out += ",";
      if (r.energy_used) out += fmt_full(*r.energy_used);
      out += "\n";
    }
    return out;
  }
  std::vector<std::vector<std::string>> t{
      {"month", "source", "value", "ci95", "energy"}};
  for (const auto& r : rows)
    t.push_back({month_key_name(r.month), nowcast_kind_name(r.kind),
                 fmt(r.value, "%.2f"),
                 r.half_width ? "+/-" + fmt(*r.half_width, "%.2f") : "",
                 r.energy_used ? fmt(*r.energy_used, "%.2f") : ""});
  return layout(t);
}

std::string render_gdp_impact(const std::map<TransitionKind, GdpImpact>& rows,
                              ReportFormat f) {
  if (f == ReportFormat::Json) {
    json j = json_doc("gdp_impact");
    json arr = json::array();
    for (const auto& [kind, im] : rows) {
      json x;
      x["kind"] = transition_kind_name(kind);
      x["percent_per_day"] = im.percent_per_day;
      x["regions"] = im.regions;
      x["replicates"] = im.replicates;
      arr.push_back(std::move(x));
    }
    j["impacts"] = std::move(arr);
    return dump(j);
  }
  if (f == ReportFormat::Csv) {
    std::string out = "kind,percent_per_day,regions,replicates\n";
    for (const auto& [kind, im] : rows)
      out += transition_kind_name(kind) + "," + fmt_full(im.percent_per_day) +
             "," + std::to_string(im.regions) + "," +
             std::to_string(im.replicates) + "\n";
    return out;
  }
  std::vector<std::vector<std::string>> t{
      {"kind", "%/day", "regions", "repl"}};
  for (const auto& [kind, im] : rows)
    t.push_back({transition_kind_name(kind), fmt(im.percent_per_day, "%+.3f"),
                 std::to_string(im.regions), std::to_string(im.replicates)});
  return layout(t);
}

std::string render_corr(const CorrelationMatrix& m, ReportFormat f) {
  const std::size_t k = m.names.size();
  if (f == ReportFormat::Json) {
    json j = json_doc("correlation_matrix");
    j["names"] = m.names;
    json r = json::array();
    json n = json::array();
    for (std::size_t i = 0; i < k; ++i) {
      json rrow = json::array(), nrow = json::array();
      for (std::size_t jj = 0; jj < k; ++jj) {
        rrow.push_back(m.r[i * k + jj]);
        nrow.push_back(m.n_overlap[i * k + jj]);
      }
      r.push_back(std::move(rrow));
      n.push_back(std::move(nrow));
    }
    j["r"] = std::move(r);
    j["n_overlap"] = std::move(n);
    return dump(j);
  }
  if (f == ReportFormat::Csv) {
    std::string out = "series";
    for (const auto& name : m.names) out += "," + name;
    out += "\n";
    for (std::size_t i = 0; i < k; ++i) {
      out += m.names[i];
      for (std::size_t jj = 0; jj < k; ++jj)
        out += "," + fmt_full(m.r[i * k + jj]);
      out += "\n";
    }
    return out;
  }
  std::vector<std::vector<std::string>> t;
  std::vector<std::string> head{""};
  head.insert(head.end(), m.names.begin(), m.names.end());
  t.push_back(head);
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<std::string> row{m.names[i]};
    for (std::size_t jj = 0; jj < k; ++jj)
      row.push_back(fmt(m.r[i * k + jj], "%.3f"));
    t.push_back(row);
  }
  return layout(t);
}

}  // namespace tierlab
