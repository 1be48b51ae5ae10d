#include "nudgelab/store/export.hpp"

#include <charconv>
#include <fstream>

#include "nudgelab/domain/error.hpp"

namespace nudgelab {
namespace {

class LineError {
 public:
  LineError(const std::string& source, int line) : source_(source), line_(line) {}
  [[noreturn]] void operator()(std::string_view field, std::string_view what) const {
    throw Error(ErrorCode::Validation, source_ + ":" + std::to_string(line_) + ": field '" +
                                           std::string(field) + "': " + std::string(what));
  }

 private:
  const std::string& source_;
  int line_;
};

template <typename T>
T parse_int(const std::string& text, std::string_view field, const LineError& fail) {
  T value{};
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || p != text.data() + text.size()) {
    fail(field, "not an integer: '" + text + "'");
  }
  return value;
}

bool read_data_line(std::istream& in, std::string& line, int& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) return true;
  }
  return false;
}

void expect_header(std::istream& in, std::string_view header, const std::string& source,
                   int& line_no) {
  std::string line;
  if (!read_data_line(in, line, line_no)) {
    throw Error(ErrorCode::Validation, source + ": empty file, expected header");
  }
  if (line != header) {
    throw Error(ErrorCode::Validation,
                source + ":" + std::to_string(line_no) + ": unexpected header row");
  }
}

}  // namespace

std::vector<std::string> split_fields(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(delim, start);
    out.push_back(line.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

void write_events(std::ostream& out, std::span<const ExportRow> rows) {
  out << kEventsHeader << '\n';
  for (const auto& r : rows) {
    const auto& e = r.event;
    out << e.event_id << ',' << e.client_event_id << ',' << e.user_id << ','
        << to_string(r.app_variant) << ',' << to_code(e.popup_action) << ',';
    if (e.message_id) out << *e.message_id;
    out << ',' << e.post_length << ',' << e.post_hash.hex() << ',' << e.image_hash.hex() << ','
        << format_iso8601(e.timestamp) << '\n';
  }
}

std::vector<ExportRow> read_events(std::istream& in, const std::string& source) {
  int line_no = 0;
  expect_header(in, kEventsHeader, source, line_no);
  std::vector<ExportRow> rows;
  std::string line;
  while (read_data_line(in, line, line_no)) {
    LineError fail(source, line_no);
    auto f = split_fields(line);
    if (f.size() != 10) fail("*", "expected 10 fields, found " + std::to_string(f.size()));

    ExportRow r;
    auto& e = r.event;
    e.event_id = parse_int<EventId>(f[0], "event_id", fail);
    e.client_event_id = f[1];
    if (!is_uuid(e.client_event_id)) fail("client_event_id", "not an RFC 4122 identifier");
    e.user_id = parse_int<UserId>(f[2], "user_id", fail);
    auto variant = parse_app_variant(f[3]);
    if (!variant) fail("app_variant", "expected V1 or V2");
    r.app_variant = *variant;
    auto action = popup_action_from_code(parse_int<int>(f[4], "popup_action", fail));
    if (!action) fail("popup_action", "expected 0, 1 or 2");
    e.popup_action = *action;
    if (!f[5].empty()) e.message_id = parse_int<int>(f[5], "message_id", fail);
    e.post_length = parse_int<std::int64_t>(f[6], "post_length", fail);
    auto post_hash = ContentDigest::parse(f[7]);
    if (!post_hash) fail("post_hash", "expected 64 lowercase hex characters");
    e.post_hash = *post_hash;
    auto image_hash = ContentDigest::parse(f[8]);
    if (!image_hash) fail("image_hash", "expected 64 lowercase hex characters");
    e.image_hash = *image_hash;
    auto ts = parse_iso8601(f[9]);
    if (!ts) fail("timestamp_iso8601", "not an ISO-8601 timestamp");
    e.timestamp = *ts;
    try {
      validate_event(e);
    } catch (const Error& err) {
      fail("*", err.what());
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<ExportRow> read_events_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return read_events(in, path.string());
}

void write_roster(std::ostream& out, std::span<const RosterRow> rows) {
  out << kRosterHeader << '\n';
  for (const auto& r : rows) {
    out << r.user_id << ',' << to_string(r.app_variant) << ',' << to_string(r.language) << ','
        << format_iso8601(r.created_at) << '\n';
  }
}

std::vector<RosterRow> read_roster(std::istream& in, const std::string& source) {
  int line_no = 0;
  expect_header(in, kRosterHeader, source, line_no);
  std::vector<RosterRow> rows;
  std::string line;
  while (read_data_line(in, line, line_no)) {
    LineError fail(source, line_no);
    auto f = split_fields(line);
    if (f.size() != 4) fail("*", "expected 4 fields");
    RosterRow r;
    r.user_id = parse_int<UserId>(f[0], "user_id", fail);
    auto v = parse_app_variant(f[1]);
    if (!v) fail("app_variant", "expected V1 or V2");
    r.app_variant = *v;
    auto l = parse_language(f[2]);
    if (!l) fail("language", "expected EN or DE");
    r.language = *l;
    auto ts = parse_iso8601(f[3]);
    if (!ts) fail("created_at_iso8601", "not an ISO-8601 timestamp");
    r.created_at = *ts;
    rows.push_back(r);
  }
  return rows;
}

std::vector<RosterRow> read_roster_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return read_roster(in, path.string());
}

}  // namespace nudgelab
