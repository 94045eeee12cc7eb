#include "tierlab/calendar.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>

#include "tierlab/errors.hpp"

namespace tierlab {

namespace {

std::chrono::year_month_day ymd_of(Day d) {
  return std::chrono::year_month_day{d.sys()};
}

bool all_digits(const std::string& s, size_t from, size_t to) {
  if (to > s.size()) return false;
  for (size_t i = from; i < to; ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

int Day::year() const { return static_cast<int>(ymd_of(*this).year()); }
int Day::month() const { return static_cast<unsigned>(ymd_of(*this).month()); }
int Day::day_of_month() const {
  return static_cast<unsigned>(ymd_of(*this).day());
}

Day make_day(int year, int month, int day) {
  const std::chrono::year_month_day ymd{std::chrono::year{year},
                                        std::chrono::month{unsigned(month)},
                                        std::chrono::day{unsigned(day)}};
  if (!ymd.ok()) throw BadDate("impossible date " + std::to_string(year) + "-" +
                               std::to_string(month) + "-" + std::to_string(day));
  const std::chrono::sys_days sd{ymd};
  return Day{static_cast<std::int32_t>(sd.time_since_epoch().count())};
}

Day parse_day(const std::string& text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-' ||
      !all_digits(text, 0, 4) || !all_digits(text, 5, 7) ||
      !all_digits(text, 8, 10))
    throw BadDate("expected YYYY-MM-DD, got '" + text + "'");
  const int y = std::stoi(text.substr(0, 4));
  const int m = std::stoi(text.substr(5, 2));
  const int d = std::stoi(text.substr(8, 2));
  return make_day(y, m, d);
}

std::string format_day(Day d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", d.year(), d.month(),
                d.day_of_month());
  return buf;
}

TimePoint midnight(Day d) {
  return TimePoint{static_cast<std::int64_t>(d.n) * 86400};
}

TimePoint hour_start(Day d, int hour) {
  return TimePoint{static_cast<std::int64_t>(d.n) * 86400 + hour * 3600LL};
}

TimePoint parse_timestamp(const std::string& text) {
  if (text.size() == 10) return midnight(parse_day(text));
  // YYYY-MM-DDTHH:MM:SS with optional Z or +HH:MM / -HH:MM
  if (text.size() < 19 || (text[10] != 'T' && text[10] != ' '))
    throw BadDate("expected ISO-8601 timestamp, got '" + text + "'");
  const Day d = parse_day(text.substr(0, 10));
  if (text[13] != ':' || text[16] != ':' || !all_digits(text, 11, 13) ||
      !all_digits(text, 14, 16) || !all_digits(text, 17, 19))
    throw BadDate("expected ISO-8601 timestamp, got '" + text + "'");
  const int hh = std::stoi(text.substr(11, 2));
  const int mm = std::stoi(text.substr(14, 2));
  const int ss = std::stoi(text.substr(17, 2));
  if (hh > 23 || mm > 59 || ss > 60)
    throw BadDate("impossible time of day in '" + text + "'");
  std::int64_t sec =
      static_cast<std::int64_t>(d.n) * 86400 + hh * 3600 + mm * 60 + ss;
  const std::string tail = text.substr(19);
  if (tail.empty() || tail == "Z") return TimePoint{sec};
  if ((tail[0] == '+' || tail[0] == '-') && tail.size() == 6 &&
      tail[3] == ':' && all_digits(tail, 1, 3) && all_digits(tail, 4, 6)) {
    const int oh = std::stoi(tail.substr(1, 2));
    const int om = std::stoi(tail.substr(4, 2));
    const std::int64_t off = oh * 3600 + om * 60;
    sec += tail[0] == '+' ? -off : off;  // normalize to UTC
    return TimePoint{sec};
  }
  throw BadDate("bad timezone suffix in '" + text + "'");
}

std::string format_timestamp(TimePoint t) {
  const Day d = t.day();
  const std::int64_t rem = t.sec - static_cast<std::int64_t>(d.n) * 86400;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ", d.year(),
                d.month(), d.day_of_month(), int(rem / 3600),
                int(rem % 3600 / 60), int(rem % 60));
  return buf;
}

HolidayCalendar HolidayCalendar::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BadFile("cannot open holiday file " + path);
  std::set<Day> days;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    // trim
    const auto b = line.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t");
    days.insert(parse_day(line.substr(b, e - b + 1)));
  }
  return HolidayCalendar{std::move(days)};
}

}  // namespace tierlab
