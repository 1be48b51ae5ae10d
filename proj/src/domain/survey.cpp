#include "nudgelab/domain/survey.hpp"

#include <algorithm>

#include "nudgelab/domain/error.hpp"

namespace nudgelab {

std::string_view to_string(ScaleId id) {
  switch (id) {
    case ScaleId::RSK: return "RSK";
    case ScaleId::CTRL: return "CTRL";
    case ScaleId::BEN: return "BEN";
    case ScaleId::EIPC: return "EIPC";
  }
  return "";
}

bool ConstructScale::is_reversed(std::string_view item) const {
  return std::find(reversed_items.begin(), reversed_items.end(), item) != reversed_items.end();
}

const std::vector<ConstructScale>& standard_scales() {
  static const std::vector<ConstructScale> scales = {
      {ScaleId::RSK, {"RSK1", "RSK2", "RSK3"}, {"RSK1", "RSK2"}},
      {ScaleId::CTRL, {"PC1", "PC2", "PC3"}, {}},
      {ScaleId::BEN,
       {"CON1", "CON2", "CON3", "RB1", "RB2", "RB3", "SR1", "SR2", "EN1", "EN2", "EN3"},
       {}},
      {ScaleId::EIPC, {"EIPC1", "EIPC2", "EIPC3", "EIPC4", "EIPC5", "EIPC6"}, {}},
  };
  return scales;
}

int reverse_item(int value, std::string_view item_id) {
  if (value < kLikertMin || value > kLikertMax) {
    throw Error(ErrorCode::Validation,
                "item " + std::string(item_id.empty() ? "<unnamed>" : item_id) + ": value " +
                    std::to_string(value) + " outside 1..7");
  }
  return kLikertMin + kLikertMax - value;
}

}  // namespace nudgelab
