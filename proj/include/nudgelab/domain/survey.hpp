#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace nudgelab {

enum class ScaleId { RSK, CTRL, BEN, EIPC };

std::string_view to_string(ScaleId id);

inline constexpr int kLikertMin = 1;
inline constexpr int kLikertMax = 7;

struct ConstructScale {
  ScaleId scale_id;
  std::vector<std::string> item_ids;
  std::vector<std::string> reversed_items;

  bool is_reversed(std::string_view item) const;
};

// RSK (RSK1, RSK2 reversed; RSK3 coded ascending with risk), CTRL (PC1-3),
// BEN (all 11 benefit items pooled), EIPC (EIPC1-6).
const std::vector<ConstructScale>& standard_scales();

// 8 - value on the 1..7 scale. Throws Error(Validation) naming the item
// when value is out of range.
int reverse_item(int value, std::string_view item_id = {});

}  // namespace nudgelab
