#include "nudgelab/analytics/edit_changes.hpp"

namespace nudgelab::analytics {

std::string_view to_string(ChangeKind k) {
  switch (k) {
    case ChangeKind::CaptionChanged: return "CAPTION_CHANGED";
    case ChangeKind::ImageChanged: return "IMAGE_CHANGED";
    case ChangeKind::BothChanged: return "BOTH_CHANGED";
    case ChangeKind::NoChange: return "NO_CHANGE";
    case ChangeKind::Abandoned: return "ABANDONED";
  }
  return "";
}

std::vector<EditOutcome> detect_edit_changes(std::span<const ActivityEvent> events,
                                             int pairing_window_minutes) {
  const auto window = std::chrono::minutes(pairing_window_minutes);
  std::vector<EditOutcome> out;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& edit = events[i];
    if (edit.popup_action != PopupAction::Edit) continue;

    EditOutcome o{edit.event_id, std::nullopt, ChangeKind::Abandoned};
    if (i + 1 < events.size() && events[i + 1].timestamp - edit.timestamp <= window) {
      const auto& next = events[i + 1];
      o.followup_event_id = next.event_id;
      bool caption = next.post_hash != edit.post_hash || next.post_length != edit.post_length;
      bool image = next.image_hash != edit.image_hash;
      o.change_kind = caption && image ? ChangeKind::BothChanged
                      : caption        ? ChangeKind::CaptionChanged
                      : image          ? ChangeKind::ImageChanged
                                       : ChangeKind::NoChange;
    }
    out.push_back(o);
  }
  return out;
}

}  // namespace nudgelab::analytics
