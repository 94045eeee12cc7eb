#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tierlab/calendar.hpp"

namespace tierlab {

// PreDecree covers days before the three-tier system took effect; White was
// added later for low-incidence regions. Neither takes part in the
// strictness order.
enum class Tier { PreDecree, Yellow, Orange, Red, White };

const char* tier_name(Tier t);        // lowercase, file format spelling
Tier parse_tier(const std::string& s);

// Yellow 0 < Orange 1 < Red 2; nullopt for PreDecree/White.
std::optional<int> tier_strictness(Tier t);

struct TierInterval {
  Day start;  // inclusive
  Day end;    // inclusive
  Tier tier;
};

// First day of the new tier.
struct Transition {
  std::string region;
  Day date;
  Tier from;
  Tier to;
};

// Per-region assignment: contiguous, non-overlapping intervals covering the
// region's whole declared window.
class TierTimeline {
 public:
  // CSV with header "region,start_date,end_date,tier" plus an optional
  // trailing "provenance" column (free text, kept but unused). '#' comments
  // allowed. Validates contiguity per region.
  static TierTimeline load(const std::string& path);
  static TierTimeline from_intervals(
      const std::map<std::string, std::vector<TierInterval>>& by_region);

  // Throws UnknownRegion / DayOutOfCoverage.
  Tier tier_at(const std::string& region, Day d) const;
  const TierInterval& interval_at(const std::string& region, Day d) const;

  bool has_region(const std::string& region) const {
    return by_region_.count(region) > 0;
  }
  std::vector<std::string> regions() const;

  // Inclusive coverage window of one region.
  std::pair<Day, Day> coverage(const std::string& region) const;

  const std::vector<TierInterval>& intervals(const std::string& region) const;

  // Every adjacent pair of differing intervals, date ascending; all regions
  // (sorted by code) or one.
  std::vector<Transition> detect_transitions() const;
  std::vector<Transition> detect_transitions(const std::string& region) const;

  // Days with the given tier for one region within [from, to] inclusive.
  int count_days(const std::string& region, Tier t, Day from, Day to) const;

 private:
  std::map<std::string, std::vector<TierInterval>> by_region_;
};

}  // namespace tierlab
