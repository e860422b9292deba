#pragma once

#include <Eigen/Dense>

#include <deque>
#include <limits>
#include <span>

#include "hawkscan/detector.hpp"
#include "hawkscan/model.hpp"
#include "hawkscan/window_stats.hpp"

namespace hawkscan {

// Gradient of the window log-likelihood l_b - l_a with respect to vec(A),
// evaluated at the model's A. Coordinates are ordered row by row: index
// i * D + j holds d/d alpha_ij. Intensities use the full event history.
Eigen::VectorXd score_vector(const HawkesModel& pre,
                             std::span<const Event> events, double a,
                             double b);

struct WindowConfig {
  double window = 60.0;
  double grid = 0.1;
  double threshold = 0.0;
};

// Sliding-window score detector: u' I0^{-1} u / w on the grid, alarm when
// the statistic is >= threshold.
class ScoreDetector final : public Detector {
 public:
  // fisher_inverse is the (regularized) inverse of the Fisher information.
  ScoreDetector(const HawkesModel& pre, Eigen::MatrixXd fisher_inverse,
                const WindowConfig& cfg);

  void observe(const Event& e) override;
  StepResult step() override;
  double next_time() const override {
    return static_cast<double>(n_ + 1) * cfg_.grid;
  }
  Comparison comparison() const override { return Comparison::kGreaterEqual; }
  std::size_t events_seen() const override { return events_seen_; }

  const Eigen::VectorXd& last_score() const { return last_score_; }

 private:
  WindowConfig cfg_;
  Eigen::MatrixXd fisher_inverse_;
  WindowTracker tracker_;
  Eigen::VectorXd last_score_;
  std::int64_t n_ = 0;
  double last_seen_ = -std::numeric_limits<double>::infinity();
  std::size_t events_seen_ = 0;
};

// Inverts fisher + ridge * I and replays the stream through a score detector.
DetectionOutcome score_run(const HawkesModel& pre, const Eigen::MatrixXd& fisher,
                           const EventStream& stream, const WindowConfig& cfg,
                           double ridge = 0.0,
                           double max_time = std::numeric_limits<double>::infinity());

}  // namespace hawkscan
