#include "nudgelab/analytics/survey_scoring.hpp"

#include <charconv>
#include <fstream>
#include <map>

#include "nudgelab/domain/error.hpp"
#include "nudgelab/store/export.hpp"

namespace nudgelab::analytics {

std::optional<double> cronbach_alpha(const std::vector<std::vector<int>>& matrix) {
  const auto n = static_cast<std::int64_t>(matrix.size());
  if (n < 2) return std::nullopt;
  const auto k = static_cast<std::int64_t>(matrix.front().size());
  if (k < 2) return std::nullopt;

  // n(n-1) * variance, exact in integers: n * sum(x^2) - (sum x)^2.
  auto scaled_variance = [n](std::int64_t sum, std::int64_t sum_sq) { return n * sum_sq - sum * sum; };

  std::int64_t item_var_total = 0;
  for (std::int64_t j = 0; j < k; ++j) {
    std::int64_t sum = 0, sum_sq = 0;
    for (const auto& row : matrix) {
      sum += row[j];
      sum_sq += static_cast<std::int64_t>(row[j]) * row[j];
    }
    item_var_total += scaled_variance(sum, sum_sq);
  }
  std::int64_t sum = 0, sum_sq = 0;
  for (const auto& row : matrix) {
    std::int64_t t = 0;
    for (int v : row) t += v;
    sum += t;
    sum_sq += t * t;
  }
  const std::int64_t total_var = scaled_variance(sum, sum_sq);
  if (total_var == 0) return std::nullopt;

  return static_cast<double>(k * (total_var - item_var_total)) /
         static_cast<double>((k - 1) * total_var);
}

SurveyScores score_survey(std::span<const SurveyItemResponse> responses,
                          std::span<const ConstructScale> scales) {
  std::map<std::string, std::map<std::string, int>> answers;
  for (const auto& r : responses) {
    auto where = "participant " + r.participant_id + ", item " + r.item_id;
    if (r.value < kLikertMin || r.value > kLikertMax) {
      throw Error(ErrorCode::Validation,
                  where + ": value " + std::to_string(r.value) + " outside 1..7");
    }
    if (!answers[r.participant_id].emplace(r.item_id, r.value).second) {
      throw Error(ErrorCode::Validation, where + ": answered more than once");
    }
  }

  SurveyScores out;
  for (const auto& scale : scales) {
    std::vector<std::vector<int>> matrix;
    for (const auto& [participant, items] : answers) {
      std::vector<int> row;
      for (const auto& item : scale.item_ids) {
        auto it = items.find(item);
        if (it == items.end()) break;
        row.push_back(scale.is_reversed(item) ? reverse_item(it->second, item) : it->second);
      }
      if (row.size() != scale.item_ids.size()) continue;

      int total = 0;
      for (int v : row) total += v;
      out.scores.push_back({participant, scale.scale_id,
                            static_cast<double>(total) / static_cast<double>(row.size())});
      matrix.push_back(std::move(row));
    }
    out.reliability.push_back({scale.scale_id, cronbach_alpha(matrix),
                               static_cast<int>(scale.item_ids.size()),
                               static_cast<int>(matrix.size())});
  }
  return out;
}

std::vector<SurveyItemResponse> read_survey(std::istream& in, const std::string& source) {
  std::vector<SurveyItemResponse> out;
  std::string line;
  int line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto where = source + ":" + std::to_string(line_no);
    if (!header) {
      if (line != "participant_id,item_id,value") {
        throw Error(ErrorCode::Validation, where + ": expected header participant_id,item_id,value");
      }
      header = true;
      continue;
    }
    auto f = split_fields(line);
    if (f.size() != 3) throw Error(ErrorCode::Validation, where + ": expected 3 fields");
    if (f[0].empty()) throw Error(ErrorCode::Validation, where + ": field 'participant_id' empty");
    SurveyItemResponse r{f[0], f[1], 0};
    auto [p, ec] = std::from_chars(f[2].data(), f[2].data() + f[2].size(), r.value);
    if (f[2].empty() || ec != std::errc{} || p != f[2].data() + f[2].size()) {
      throw Error(ErrorCode::Validation, where + ": field 'value' is not an integer");
    }
    out.push_back(std::move(r));
  }
  if (!header) throw Error(ErrorCode::Validation, source + ": empty file, expected header");
  return out;
}

std::vector<SurveyItemResponse> read_survey_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return read_survey(in, path.string());
}

}  // namespace nudgelab::analytics
