#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <absl/time/time.h>

namespace nudgelab {

// Millisecond UTC instants throughout. Persisted as epoch milliseconds,
// exchanged as ISO-8601 with a trailing 'Z'.
using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

Timestamp from_epoch_ms(std::int64_t ms);
std::int64_t to_epoch_ms(Timestamp t);

// "2024-05-06T10:00:00.000Z"
std::string format_iso8601(Timestamp t);

// Accepts RFC 3339 with or without fractional seconds and any numeric
// offset; sub-millisecond digits are truncated.
std::optional<Timestamp> parse_iso8601(std::string_view text);

// Maps instants onto calendar days of one IANA time zone.
class DayCalendar {
 public:
  // Throws Error(Configuration) for names missing from the zoneinfo db.
  explicit DayCalendar(const std::string& zone_name = "UTC");

  const std::string& zone_name() const { return name_; }

  // Days since 1970-01-01 of the local calendar date containing `t`.
  std::int64_t day_index(Timestamp t) const;

  // [start, end) of the local calendar day containing `t`.
  std::pair<Timestamp, Timestamp> day_bounds(Timestamp t) const;

 private:
  std::string name_;
  absl::TimeZone zone_;
};

}  // namespace nudgelab
