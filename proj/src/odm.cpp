#include "tierlab/odm.hpp"

#include <charconv>
#include <sstream>

#include "tierlab/errors.hpp"
#include "tierlab/io_util.hpp"

namespace tierlab {

const char* bucket_name(Bucket b) { return b == Bucket::Hour ? "hour" : "day"; }

Bucket parse_bucket(const std::string& s) {
  if (s == "hour") return Bucket::Hour;
  if (s == "day") return Bucket::Day;
  throw BadFile("unknown bucket '" + s + "'");
}

const char* reject_reason_name(RejectReason r) {
  switch (r) {
    case RejectReason::NegativeCount: return "NegativeCount";
    case RejectReason::BadTimestamp: return "BadTimestamp";
    case RejectReason::UnknownArea: return "UnknownArea";
    case RejectReason::BadField: return "BadField";
  }
  return "?";
}

const char* direction_name(Direction d) {
  switch (d) {
    case Direction::Internal: return "internal";
    case Direction::Inward: return "inward";
    case Direction::Outward: return "outward";
    case Direction::Total: return "total";
  }
  return "?";
}

Direction parse_direction(const std::string& s) {
  if (s == "internal") return Direction::Internal;
  if (s == "inward") return Direction::Inward;
  if (s == "outward") return Direction::Outward;
  if (s == "total") return Direction::Total;
  throw BadFile("unknown direction '" + s + "'");
}

OdmParseResult parse_odm(const std::string& csv_text, const GeoHierarchy& geo) {
  std::istringstream in(csv_text);
  std::string line;
  std::size_t line_no = 0;
  if (!read_header(in, line, line_no) ||
      split_csv(line) != std::vector<std::string>{"period_start", "bucket",
                                                  "origin", "destination",
                                                  "count"})
    throw HeaderMismatch(
        "expected ODM header period_start,bucket,origin,destination,count");
  OdmParseResult out;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto reject = [&](RejectReason r, const std::string& detail) {
      out.rejects.push_back(RejectedLine{line_no, r, line, detail});
    };
    auto f = split_csv(line);
    if (f.size() != 5) {
      reject(RejectReason::BadField, "expected 5 fields");
      continue;
    }
    OdmRecord rec;
    try {
      rec.bucket = parse_bucket(f[1]);
    } catch (const Error&) {
      reject(RejectReason::BadField, "bucket must be hour or day");
      continue;
    }
    try {
      rec.period_start = parse_timestamp(f[0]);
    } catch (const Error&) {
      reject(RejectReason::BadTimestamp, "unparseable timestamp");
      continue;
    }
    const bool aligned =
        rec.bucket == Bucket::Day
            ? rec.period_start.at_midnight()
            : rec.period_start.sec % 3600 == 0;
    if (!aligned) {
      reject(RejectReason::BadTimestamp, "not aligned to bucket boundary");
      continue;
    }
    rec.origin = f[2];
    rec.destination = f[3];
    const bool origin_ok = rec.origin == kExternalArea || geo.contains(rec.origin);
    const bool dest_ok =
        rec.destination == kExternalArea || geo.contains(rec.destination);
    if (!origin_ok || !dest_ok) {
      reject(RejectReason::UnknownArea,
             "unknown area " + (origin_ok ? rec.destination : rec.origin));
      continue;
    }
    if (rec.origin == kExternalArea && rec.destination == kExternalArea) {
      reject(RejectReason::UnknownArea, "record touches no known area");
      continue;
    }
    const std::string cs = f[4];
    std::int64_t count = 0;
    const auto [p, ec] =
        std::from_chars(cs.data(), cs.data() + cs.size(), count);
    if (ec != std::errc{} || p != cs.data() + cs.size()) {
      reject(RejectReason::BadField, "count is not an integer");
      continue;
    }
    if (count < 0) {
      reject(RejectReason::NegativeCount, "negative count");
      continue;
    }
    rec.count = count;
    out.records.push_back(std::move(rec));
  }
  return out;
}

OdmParseResult parse_odm_file(const std::string& path,
                              const GeoHierarchy& geo) {
  return parse_odm(slurp(path), geo);
}

std::string odm_to_csv(const std::vector<OdmRecord>& records) {
  std::string out = "period_start,bucket,origin,destination,count\n";
  for (const auto& r : records) {
    out += format_timestamp(r.period_start);
    out += ',';
    out += bucket_name(r.bucket);
    out += ',';
    out += r.origin;
    out += ',';
    out += r.destination;
    out += ',';
    out += std::to_string(r.count);
    out += '\n';
  }
  return out;
}

std::string rejects_to_csv(const std::vector<RejectedLine>& rejects) {
  // text is the untouched input line and may contain commas; it is the last
  // field precisely so readers can split with a field limit of 4.
  std::string out = "line_no,reason,detail,text\n";
  for (const auto& r : rejects)
    out += std::to_string(r.line_no) + "," + reject_reason_name(r.reason) +
           "," + r.detail + "," + r.text + "\n";
  return out;
}

Direction classify_direction(const OdmRecord& rec, const std::string& focal,
                             const GeoHierarchy& geo) {
  const Level focal_level = geo.level_of(focal);
  const auto side = [&](const std::string& code) -> bool {
    if (code == kExternalArea) return false;
    if (static_cast<int>(geo.level_of(code)) > static_cast<int>(focal_level))
      throw LevelMismatch("record area " + code + " is coarser than focal " +
                          focal);
    return geo.lift(code, focal_level) == focal;
  };
  const bool from_focal = side(rec.origin);
  const bool to_focal = side(rec.destination);
  if (from_focal && to_focal) return Direction::Internal;
  if (to_focal) return Direction::Inward;
  if (from_focal) return Direction::Outward;
  throw NotIncident("record " + rec.origin + "->" + rec.destination +
                    " does not touch " + focal);
}

}  // namespace tierlab
