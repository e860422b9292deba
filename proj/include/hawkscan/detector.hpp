#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "hawkscan/model.hpp"

namespace hawkscan {

inline constexpr double kNoTime = std::numeric_limits<double>::quiet_NaN();

// How a detection statistic is compared against its threshold.
enum class Comparison {
  kGreater,       // alarm when statistic > b
  kGreaterEqual,  // alarm when statistic >= b
};

inline bool crosses(double statistic, double threshold, Comparison rule) {
  return rule == Comparison::kGreater ? statistic > threshold
                                      : statistic >= threshold;
}

struct StepResult {
  double t = 0.0;
  double statistic = 0.0;
  double tau_hat = kNoTime;  // estimated change time, CUSUM only
  bool alarm = false;
};

struct DetectionOutcome {
  bool alarmed = false;
  double stop_time = kNoTime;  // grid time of the alarm
  double tau_hat = kNoTime;
  std::vector<StepResult> trajectory;
  std::size_t events_seen = 0;
  // Last grid time evaluated (the stopping time when alarmed).
  double last_time = 0.0;
};

// Online detector evaluated on the grid n * gamma.
//
// Callers observe every event with time <= next_time() before calling
// step(); the detector never looks past the grid time it is evaluating.
class Detector {
 public:
  virtual ~Detector() = default;

  virtual void observe(const Event& e) = 0;
  virtual StepResult step() = 0;
  // Grid time the next step() evaluates.
  virtual double next_time() const = 0;
  virtual Comparison comparison() const = 0;
  virtual std::size_t events_seen() const = 0;
};

// Replays a finished stream through the detector until it alarms or the next
// grid time would exceed max_time.
DetectionOutcome run_detector(Detector& detector, std::span<const Event> events,
                              double max_time, bool record_trajectory = true);

}  // namespace hawkscan
