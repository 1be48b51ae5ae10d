#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "nudgelab/domain/types.hpp"

namespace nudgelab {

inline constexpr int kCategoryCount = 6;
inline constexpr int kCorpusSize = 26;

// The six fixed message categories, ids 1..6.
const std::vector<MessageCategory>& message_categories();

// Tab-separated, header row
//   message_id  category_id  risk_value  text_en  text_de
// Lines starting with '#' and blank lines are skipped. Throws
// Error(Validation) naming the line on malformed rows, duplicate ids or
// unknown categories.
std::vector<InterventionMessage> parse_corpus(std::istream& in);
std::vector<InterventionMessage> load_corpus(const std::filesystem::path& path);

// Full-corpus check used before seeding: exactly 26 messages, ids 1..26.
void validate_corpus(const std::vector<InterventionMessage>& corpus);

}  // namespace nudgelab
