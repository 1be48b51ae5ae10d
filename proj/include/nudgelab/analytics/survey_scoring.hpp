#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nudgelab/domain/survey.hpp"

namespace nudgelab::analytics {

inline constexpr double kReliabilityThreshold = 0.70;

struct SurveyItemResponse {
  std::string participant_id;
  std::string item_id;
  int value = 0;
};

struct ConstructScore {
  std::string participant_id;
  ScaleId scale_id;
  double score = 0.0;  // mean of the (reverse-coded) items, in [1, 7]
};

struct ReliabilityResult {
  ScaleId scale_id;
  std::optional<double> cronbach_alpha;  // absent when undefined
  int item_count = 0;
  int respondent_count = 0;

  // Fires exactly when alpha is defined and below 0.70.
  bool below_threshold() const {
    return cronbach_alpha && *cronbach_alpha < kReliabilityThreshold;
  }
};

struct SurveyScores {
  std::vector<ConstructScore> scores;  // by scale, then participant id
  std::vector<ReliabilityResult> reliability;
};

// Listwise per scale: a participant missing any item of a scale gets no
// score for it and does not enter its alpha. Items outside every scale are
// ignored. Throws Error(Validation) naming participant and item for values
// outside 1..7 or a repeated answer to the same item.
SurveyScores score_survey(std::span<const SurveyItemResponse> responses,
                          std::span<const ConstructScale> scales);

// Cronbach's alpha of a respondents x items matrix of integer responses.
// Computed from integer sums of squares, so identical items give exactly 1.
// Absent with fewer than 2 items or respondents, or zero total variance.
std::optional<double> cronbach_alpha(const std::vector<std::vector<int>>& matrix);

// participant_id,item_id,value with that header row.
std::vector<SurveyItemResponse> read_survey(std::istream& in, const std::string& source);
std::vector<SurveyItemResponse> read_survey_file(const std::filesystem::path& path);

}  // namespace nudgelab::analytics
