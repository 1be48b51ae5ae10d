#include "nudgelab/domain/time.hpp"

#include <absl/time/civil_time.h>

#include "nudgelab/domain/error.hpp"

namespace nudgelab {
namespace {

absl::Time to_absl(Timestamp t) { return absl::FromUnixMillis(to_epoch_ms(t)); }

}  // namespace

Timestamp from_epoch_ms(std::int64_t ms) { return Timestamp{std::chrono::milliseconds{ms}}; }

std::int64_t to_epoch_ms(Timestamp t) { return t.time_since_epoch().count(); }

std::string format_iso8601(Timestamp t) {
  return absl::FormatTime("%Y-%m-%dT%H:%M:%E3SZ", to_absl(t), absl::UTCTimeZone());
}

std::optional<Timestamp> parse_iso8601(std::string_view text) {
  absl::Time parsed;
  std::string err;
  if (!absl::ParseTime(absl::RFC3339_full, std::string(text), &parsed, &err)) {
    return std::nullopt;
  }
  // Truncate toward negative infinity so parse(format(t)) == t.
  return from_epoch_ms(absl::ToUnixMillis(parsed));
}

DayCalendar::DayCalendar(const std::string& zone_name) : name_(zone_name) {
  if (!absl::LoadTimeZone(zone_name, &zone_)) {
    throw Error(ErrorCode::Configuration, "unknown time zone: " + zone_name);
  }
}

std::int64_t DayCalendar::day_index(Timestamp t) const {
  return absl::ToCivilDay(to_absl(t), zone_) - absl::CivilDay(1970, 1, 1);
}

std::pair<Timestamp, Timestamp> DayCalendar::day_bounds(Timestamp t) const {
  absl::CivilDay day = absl::ToCivilDay(to_absl(t), zone_);
  absl::Time start = absl::FromCivil(day, zone_);
  absl::Time end = absl::FromCivil(day + 1, zone_);
  return {from_epoch_ms(absl::ToUnixMillis(start)), from_epoch_ms(absl::ToUnixMillis(end))};
}

}  // namespace nudgelab
