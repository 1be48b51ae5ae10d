#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "nudgelab/domain/types.hpp"

namespace nudgelab::analytics {

enum class ChangeKind { CaptionChanged, ImageChanged, BothChanged, NoChange, Abandoned };

std::string_view to_string(ChangeKind k);

struct EditOutcome {
  EventId edit_event_id = 0;
  std::optional<EventId> followup_event_id;
  ChangeKind change_kind = ChangeKind::Abandoned;
};

// Pairs each EDIT (action 0) with the user's next event when it falls
// within the window, and classifies what changed between the two
// snapshots. The caption counts as changed when its digest or its length
// differs. Input: one user's events in time order.
std::vector<EditOutcome> detect_edit_changes(std::span<const ActivityEvent> events,
                                             int pairing_window_minutes = 30);

}  // namespace nudgelab::analytics
