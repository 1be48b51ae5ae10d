#include "nudgelab/service/clock.hpp"

namespace nudgelab {

Timestamp SystemClock::now() const {
  return std::chrono::time_point_cast<std::chrono::milliseconds>(std::chrono::system_clock::now());
}

}  // namespace nudgelab
