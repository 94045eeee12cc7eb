#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tierlab/calendar.hpp"
#include "tierlab/geo.hpp"

namespace tierlab {

enum class Bucket { Hour, Day };

const char* bucket_name(Bucket b);
Bucket parse_bucket(const std::string& s);

// One origin-destination movement count for one time bucket.
struct OdmRecord {
  TimePoint period_start;
  Bucket bucket = Bucket::Day;
  std::string origin;       // area code or EXT
  std::string destination;  // area code or EXT
  std::int64_t count = 0;
};

enum class RejectReason { NegativeCount, BadTimestamp, UnknownArea, BadField };

const char* reject_reason_name(RejectReason r);

// Malformed data line, preserved verbatim for the rejects report. Rejected
// lines are never silently dropped.
struct RejectedLine {
  std::size_t line_no = 0;
  RejectReason reason = RejectReason::BadField;
  std::string text;
  std::string detail;
};

struct OdmParseResult {
  std::vector<OdmRecord> records;
  std::vector<RejectedLine> rejects;
};

// Parses ODM CSV with exact header "period_start,bucket,origin,destination,
// count". A wrong header is fatal (HeaderMismatch); individual bad lines go
// to `rejects`. Timestamps must align to their bucket boundary (midnight for
// day, minute zero for hour). Both areas must exist in `geo` or be EXT; an
// all-EXT record is rejected as UnknownArea since it touches no known area.
OdmParseResult parse_odm(const std::string& csv_text, const GeoHierarchy& geo);
OdmParseResult parse_odm_file(const std::string& path, const GeoHierarchy& geo);

std::string odm_to_csv(const std::vector<OdmRecord>& records);
std::string rejects_to_csv(const std::vector<RejectedLine>& rejects);

enum class Direction { Internal, Inward, Outward, Total };

const char* direction_name(Direction d);
Direction parse_direction(const std::string& s);

// Direction of `rec` relative to `focal` (an area at level
// geo.level_of(focal)): both endpoints lift into focal = Internal, only the
// destination = Inward, only the origin = Outward. Throws NotIncident when
// neither endpoint lifts into focal, LevelMismatch when a record area is
// coarser than focal's level. EXT endpoints never lift anywhere.
Direction classify_direction(const OdmRecord& rec, const std::string& focal,
                             const GeoHierarchy& geo);

}  // namespace tierlab
