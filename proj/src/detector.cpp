#include "hawkscan/detector.hpp"

#include <algorithm>
#include <cmath>

namespace hawkscan {

DetectionOutcome run_detector(Detector& detector, std::span<const Event> events,
                              double max_time, bool record_trajectory) {
  DetectionOutcome out;
  std::size_t k = 0;
  // Grid times are n * gamma in floating point; allow rounding at the end.
  const double limit = max_time + 1e-9 * std::max(1.0, std::abs(max_time));
  while (detector.next_time() <= limit) {
    const double t = detector.next_time();
    while (k < events.size() && events[k].t <= t) detector.observe(events[k++]);
    const StepResult r = detector.step();
    out.last_time = r.t;
    if (record_trajectory) out.trajectory.push_back(r);
    if (r.alarm) {
      out.alarmed = true;
      out.stop_time = r.t;
      out.tau_hat = r.tau_hat;
      break;
    }
  }
  out.events_seen = detector.events_seen();
  return out;
}

}  // namespace hawkscan
