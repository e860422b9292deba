#include "hawkscan/shewhart.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hawkscan {

ShewhartDetector::ShewhartDetector(const ShewhartConfig& cfg) : cfg_(cfg) {
  if (!(cfg.window > 0.0)) throw std::invalid_argument("window must be > 0");
  if (!(cfg.grid > 0.0) || !std::isfinite(cfg.grid)) {
    throw std::invalid_argument("grid size must be > 0");
  }
  if (!(cfg.lower >= 0.0 && cfg.lower < cfg.upper)) {
    throw std::invalid_argument("Shewhart bounds need 0 <= b1 < b2");
  }
}

void ShewhartDetector::observe(const Event& e) {
  if (e.t <= static_cast<double>(n_) * cfg_.grid && e.t > 0.0) {
    throw std::invalid_argument("event arrived after its grid cell was closed");
  }
  if (!(e.t > last_seen_)) {
    throw std::invalid_argument("events must arrive in increasing time order");
  }
  last_seen_ = e.t;
  ++events_seen_;
  if (e.t > 0.0) times_.push_back(e.t);
}

StepResult ShewhartDetector::step() {
  const double t = next_time();
  while (!times_.empty() && times_.front() <= t - cfg_.window) {
    times_.pop_front();
  }
  std::size_t count = 0;
  for (auto it = times_.begin(); it != times_.end() && *it <= t; ++it) ++count;
  const auto c = static_cast<double>(count);
  ++n_;
  return {t, c, kNoTime, c < cfg_.lower || c > cfg_.upper};
}

DetectionOutcome shewhart_run(const EventStream& stream,
                              const ShewhartConfig& cfg, double max_time) {
  ShewhartDetector det(cfg);
  return run_detector(det, stream.events, std::min(max_time, stream.horizon));
}

}  // namespace hawkscan
