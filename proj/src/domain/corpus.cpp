#include "nudgelab/domain/corpus.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "nudgelab/domain/error.hpp"

namespace nudgelab {
namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find('\t', start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
bool parse_number(const std::string& text, T& out) {
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && p == text.data() + text.size();
}

}  // namespace

const std::vector<MessageCategory>& message_categories() {
  static const std::vector<MessageCategory> categories = {
      {1, "drugs-and-alcohol-use"}, {2, "sex"},      {3, "religion-and-politics"},
      {4, "strong-sentiment"},      {5, "location"}, {6, "personal-identifiers"},
  };
  return categories;
}

std::vector<InterventionMessage> parse_corpus(std::istream& in) {
  std::vector<InterventionMessage> out;
  std::set<int> seen;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto fail = [&](const std::string& what) {
      throw Error(ErrorCode::Validation, "corpus line " + std::to_string(line_no) + ": " + what);
    };
    auto fields = split_tabs(line);
    if (!header_seen) {
      if (fields != std::vector<std::string>{"message_id", "category_id", "risk_value", "text_en",
                                             "text_de"}) {
        fail("expected header message_id, category_id, risk_value, text_en, text_de");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 5) fail("expected 5 tab-separated fields");
    InterventionMessage m;
    if (!parse_number(fields[0], m.message_id)) fail("message_id is not an integer");
    if (!parse_number(fields[1], m.category_id)) fail("category_id is not an integer");
    if (!parse_number(fields[2], m.risk_value) || m.risk_value < 0) fail("risk_value must be >= 0");
    m.text_en = fields[3];
    m.text_de = fields[4];
    if (m.message_id < 1 || m.message_id > kCorpusSize) fail("message_id out of range 1..26");
    if (m.category_id < 1 || m.category_id > kCategoryCount) fail("unknown category_id");
    if (m.text_en.empty()) fail("text_en is empty");
    if (!seen.insert(m.message_id).second) fail("duplicate message_id");
    out.push_back(std::move(m));
  }
  if (!header_seen) throw Error(ErrorCode::Validation, "corpus: missing header row");
  return out;
}

std::vector<InterventionMessage> load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open corpus file " + path.string());
  return parse_corpus(in);
}

void validate_corpus(const std::vector<InterventionMessage>& corpus) {
  if (corpus.size() != static_cast<std::size_t>(kCorpusSize)) {
    throw Error(ErrorCode::Validation,
                "corpus must contain exactly 26 messages, found " + std::to_string(corpus.size()));
  }
  std::set<int> ids;
  for (const auto& m : corpus) ids.insert(m.message_id);
  if (ids.size() != corpus.size() || *ids.begin() != 1 || *ids.rbegin() != kCorpusSize) {
    throw Error(ErrorCode::Validation, "corpus message ids must be exactly 1..26");
  }
}

}  // namespace nudgelab
