#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "nudgelab/domain/types.hpp"

namespace nudgelab {

// Events export, format version 1. Comma-separated, one header row:
//   event_id,client_event_id,user_id,app_variant,popup_action,message_id,
//   post_length,post_hash,image_hash,timestamp_iso8601
// message_id is an empty field when absent. No field ever needs quoting.
inline constexpr std::string_view kEventsHeader =
    "event_id,client_event_id,user_id,app_variant,popup_action,message_id,post_length,post_hash,"
    "image_hash,timestamp_iso8601";

struct ExportRow {
  ActivityEvent event;
  AppVariant app_variant = AppVariant::V1;

  friend bool operator==(const ExportRow&, const ExportRow&) = default;
};

void write_events(std::ostream& out, std::span<const ExportRow> rows);
// Throws Error(Validation) naming source, line and field on malformed input.
std::vector<ExportRow> read_events(std::istream& in, const std::string& source_name);
std::vector<ExportRow> read_events_file(const std::filesystem::path& path);

// Roster export: every registered user, including those with no events.
//   user_id,app_variant,language,created_at_iso8601
inline constexpr std::string_view kRosterHeader = "user_id,app_variant,language,created_at_iso8601";

struct RosterRow {
  UserId user_id = 0;
  AppVariant app_variant = AppVariant::V1;
  Language language = Language::EN;
  Timestamp created_at{};

  friend bool operator==(const RosterRow&, const RosterRow&) = default;
};

void write_roster(std::ostream& out, std::span<const RosterRow> rows);
std::vector<RosterRow> read_roster(std::istream& in, const std::string& source_name);
std::vector<RosterRow> read_roster_file(const std::filesystem::path& path);

// Splits one delimited line; shared by every reader in the project.
std::vector<std::string> split_fields(const std::string& line, char delim = ',');

}  // namespace nudgelab
