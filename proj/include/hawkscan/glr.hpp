#pragma once

#include <Eigen/Dense>

#include <limits>
#include <optional>
#include <span>

#include "hawkscan/detector.hpp"
#include "hawkscan/em.hpp"
#include "hawkscan/model.hpp"
#include "hawkscan/score.hpp"
#include "hawkscan/window_stats.hpp"

namespace hawkscan {

struct GlrWindowResult {
  Eigen::MatrixXd a_hat;
  // log-likelihood of A-hat on the window with history restarted at the
  // window start, minus the pre-change log-likelihood with full history.
  double statistic = 0.0;
  int iterations = 0;
  bool converged = false;
};

// GLR statistic on the window (a, b] with mu fixed at the pre-change rates.
GlrWindowResult glr_window(const HawkesModel& pre, std::span<const Event> events,
                           double a, double b, const EmConfig& em = {});

// Sliding-window GLR detector. Each window's EM starts from the previous
// window's estimate (floored at warm_floor so that no entry is stuck at 0);
// the first window starts from em.init or 0.1. Alarm when statistic >= b.
class GlrDetector final : public Detector {
 public:
  GlrDetector(const HawkesModel& pre, const WindowConfig& cfg,
              const EmConfig& em = {}, bool warm_start = true,
              double warm_floor = 1e-3);

  void observe(const Event& e) override;
  StepResult step() override;
  double next_time() const override {
    return static_cast<double>(n_ + 1) * cfg_.grid;
  }
  Comparison comparison() const override { return Comparison::kGreaterEqual; }
  std::size_t events_seen() const override { return events_seen_; }

  // EM iterations over all windows so far, and the windows evaluated.
  long long total_iterations() const { return total_iterations_; }
  long long windows() const { return windows_; }
  long long unconverged_windows() const { return unconverged_; }
  double mean_iterations() const {
    return windows_ == 0 ? 0.0
                         : static_cast<double>(total_iterations_) /
                               static_cast<double>(windows_);
  }
  const Eigen::MatrixXd& a_hat() const { return a_hat_; }

 private:
  HawkesModel pre_;
  WindowConfig cfg_;
  EmConfig em_;
  bool warm_start_;
  double warm_floor_;
  WindowTracker tracker_;
  std::vector<Event> scratch_;
  std::optional<Eigen::MatrixXd> previous_;
  Eigen::MatrixXd a_hat_;

  std::int64_t n_ = 0;
  double last_seen_ = -std::numeric_limits<double>::infinity();
  std::size_t events_seen_ = 0;
  long long total_iterations_ = 0;
  long long windows_ = 0;
  long long unconverged_ = 0;
};

DetectionOutcome glr_run(const HawkesModel& pre, const EventStream& stream,
                         const WindowConfig& cfg, const EmConfig& em = {},
                         double max_time = std::numeric_limits<double>::infinity());

}  // namespace hawkscan
