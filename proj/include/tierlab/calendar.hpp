#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <set>
#include <string>

namespace tierlab {

// Calendar day, UTC. Thin wrapper over a day count so it can key maps and do
// arithmetic without the chrono noise at every call site.
struct Day {
  std::int32_t n = 0;  // days since 1970-01-01

  constexpr auto operator<=>(const Day&) const = default;

  Day next() const { return Day{n + 1}; }
  Day prev() const { return Day{n - 1}; }
  Day plus(int d) const { return Day{n + d}; }

  std::chrono::sys_days sys() const {
    return std::chrono::sys_days{std::chrono::days{n}};
  }

  // 0 = Monday .. 6 = Sunday.
  int weekday_mon0() const {
    const std::chrono::weekday wd{sys()};
    return static_cast<int>(wd.iso_encoding()) - 1;
  }
  bool is_weekend() const { return weekday_mon0() >= 5; }

  int year() const;
  int month() const;
  int day_of_month() const;
};

Day make_day(int year, int month, int day);

// Parses "YYYY-MM-DD". Throws BadDate on malformed or impossible dates.
Day parse_day(const std::string& text);
std::string format_day(Day d);

// Timestamp, UTC, second resolution. ODM bucket starts live here.
struct TimePoint {
  std::int64_t sec = 0;  // seconds since 1970-01-01T00:00:00Z

  constexpr auto operator<=>(const TimePoint&) const = default;

  Day day() const {
    // floor division: negative times round toward past days
    std::int64_t d = sec >= 0 ? sec / 86400 : -((-sec + 86399) / 86400);
    return Day{static_cast<std::int32_t>(d)};
  }
  int hour() const {
    std::int64_t rem = sec - static_cast<std::int64_t>(day().n) * 86400;
    return static_cast<int>(rem / 3600);
  }
  bool at_midnight() const {
    return sec == static_cast<std::int64_t>(day().n) * 86400;
  }
};

TimePoint midnight(Day d);
TimePoint hour_start(Day d, int hour);

// Accepts "YYYY-MM-DD", "YYYY-MM-DDTHH:MM:SS", optional trailing "Z" or a
// "+HH:MM"/"-HH:MM" offset (normalized to UTC). Throws BadDate otherwise.
TimePoint parse_timestamp(const std::string& text);
// Emits "YYYY-MM-DDTHH:MM:SSZ".
std::string format_timestamp(TimePoint t);

// Bank-holiday calendar. One date per line in the source file, ISO format,
// '#' starts a comment, blank lines ignored.
class HolidayCalendar {
 public:
  HolidayCalendar() = default;
  explicit HolidayCalendar(std::set<Day> days) : days_(std::move(days)) {}

  static HolidayCalendar load(const std::string& path);

  bool is_holiday(Day d) const { return days_.count(d) > 0; }
  bool is_weekend_or_holiday(Day d) const {
    return d.is_weekend() || is_holiday(d);
  }
  const std::set<Day>& days() const { return days_; }

 private:
  std::set<Day> days_;
};

}  // namespace tierlab
