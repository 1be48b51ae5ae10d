#pragma once

#include <atomic>
#include <chrono>

#include "nudgelab/domain/time.hpp"

namespace nudgelab {

class Clock {
 public:
  virtual ~Clock() = default;
  virtual Timestamp now() const = 0;
};

class SystemClock final : public Clock {
 public:
  Timestamp now() const override;
};

// Test clock; starts at the given instant and only moves when told to.
class ManualClock final : public Clock {
 public:
  explicit ManualClock(Timestamp start) : ms_(to_epoch_ms(start)) {}
  Timestamp now() const override { return from_epoch_ms(ms_.load()); }
  void set(Timestamp t) { ms_.store(to_epoch_ms(t)); }
  void advance(std::chrono::milliseconds d) { ms_.fetch_add(d.count()); }

 private:
  std::atomic<std::int64_t> ms_;
};

}  // namespace nudgelab
