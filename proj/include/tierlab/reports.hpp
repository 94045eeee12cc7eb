#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tierlab/calendar.hpp"
#include "tierlab/impact.hpp"
#include "tierlab/nowcast.hpp"
#include "tierlab/ols.hpp"
#include "tierlab/tiers.hpp"

namespace tierlab {

// Every renderer supports the three formats. JSON documents carry
// schema_version 1 and a "kind" discriminator; CSV output may include '#'
// comment lines (our readers accept them); Table is for terminals.
enum class ReportFormat { Table, Csv, Json };

ReportFormat parse_report_format(const std::string& s);  // table|csv|json

std::string render_transitions(const std::vector<Transition>& ts,
                               ReportFormat f);

// Overall row plus optional per-region breakdown (keyed by region code).
std::string render_impact(const TransitionImpact& overall,
                          const std::map<std::string, TransitionImpact>& regional,
                          ReportFormat f);

std::string render_wow(const std::string& area, Direction dir,
                       const std::vector<std::pair<Day, double>>& rows,
                       ReportFormat f);

struct CompareRow {
  std::string region;
  double variation = 0;  // percent
  double cases = 0;      // per 100k inhabitants
};

std::string render_compare(const std::vector<CompareRow>& rows, double rho,
                           ReportFormat f);

// Regression summary. Table format prints one line per term with R-style
// significance marks (*** < 0.001, ** < 0.01, * < 0.05, . < 0.1) and the
// usual fit statistics footer.
std::string render_fit(const std::string& title, const OlsFit& fit,
                       ReportFormat f);

std::string render_nowcast(const std::vector<NowcastRow>& rows,
                           ReportFormat f);

std::string render_gdp_impact(const std::map<TransitionKind, GdpImpact>& rows,
                              ReportFormat f);

std::string render_corr(const CorrelationMatrix& m, ReportFormat f);

}  // namespace tierlab
