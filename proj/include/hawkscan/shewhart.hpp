#pragma once

#include <deque>
#include <limits>

#include "hawkscan/detector.hpp"
#include "hawkscan/model.hpp"

namespace hawkscan {

struct ShewhartConfig {
  double window = 120.0;
  double grid = 0.1;
  double lower = 0.0;  // b1
  double upper = 0.0;  // b2
};

// Count chart: alarm at the first grid time t where the number of events in
// (t - w, t] over all nodes falls outside [lower, upper].
class ShewhartDetector final : public Detector {
 public:
  explicit ShewhartDetector(const ShewhartConfig& cfg);

  void observe(const Event& e) override;
  StepResult step() override;
  double next_time() const override {
    return static_cast<double>(n_ + 1) * cfg_.grid;
  }
  // The statistic is the count; it alarms upward when count > upper.
  Comparison comparison() const override { return Comparison::kGreater; }
  std::size_t events_seen() const override { return events_seen_; }

 private:
  ShewhartConfig cfg_;
  std::deque<double> times_;
  std::int64_t n_ = 0;
  double last_seen_ = -std::numeric_limits<double>::infinity();
  std::size_t events_seen_ = 0;
};

DetectionOutcome shewhart_run(const EventStream& stream,
                              const ShewhartConfig& cfg,
                              double max_time = std::numeric_limits<double>::infinity());

}  // namespace hawkscan
