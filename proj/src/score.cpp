#include "hawkscan/score.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hawkscan/excitation.hpp"
#include "hawkscan/fisher.hpp"

namespace hawkscan {

Eigen::VectorXd score_vector(const HawkesModel& pre,
                             std::span<const Event> events, double a,
                             double b) {
  if (!(a < b)) throw std::invalid_argument("score window must have length > 0");
  if (a < 0.0) throw std::invalid_argument("score window must start at >= 0");
  const int d = pre.dim();
  Eigen::VectorXd u = Eigen::VectorXd::Zero(d * d);

  const double lower = std::max(0.0, a - pre.max_support());
  Excitation ex(pre, 0.0);
  for (const Event& e : events) {
    if (e.t > b) break;
    if (e.t <= lower) continue;
    if (e.t > a) {
      ex.evaluate(e.t);
      const double lambda = ex.intensity(e.u);
      u.segment(e.u * d, d) += ex.row(e.u) / lambda;
    }
    ex.push(e);
  }
  for (const Event& v : events) {
    if (v.t >= b) break;
    if (v.t <= lower) continue;
    for (int i = 0; i < d; ++i) {
      const Kernel& k = pre.kernel(i, v.u);
      u(i * d + v.u) -= k.cumulative(b - v.t) - k.cumulative(a - v.t);
    }
  }
  return u;
}

ScoreDetector::ScoreDetector(const HawkesModel& pre,
                             Eigen::MatrixXd fisher_inverse,
                             const WindowConfig& cfg)
    : cfg_(cfg),
      fisher_inverse_(std::move(fisher_inverse)),
      tracker_(pre, cfg.window) {
  require_valid(pre);
  const int p = pre.dim() * pre.dim();
  if (fisher_inverse_.rows() != p || fisher_inverse_.cols() != p) {
    throw std::invalid_argument("Fisher inverse must be D^2 x D^2");
  }
  if (!(cfg.grid > 0.0) || !std::isfinite(cfg.grid)) {
    throw std::invalid_argument("grid size must be > 0");
  }
  last_score_ = Eigen::VectorXd::Zero(p);
}

void ScoreDetector::observe(const Event& e) {
  if (e.t <= static_cast<double>(n_) * cfg_.grid && e.t > 0.0) {
    throw std::invalid_argument("event arrived after its grid cell was closed");
  }
  if (!(e.t > last_seen_)) {
    throw std::invalid_argument("events must arrive in increasing time order");
  }
  last_seen_ = e.t;
  ++events_seen_;
  tracker_.push(e);
}

StepResult ScoreDetector::step() {
  const double t = next_time();
  tracker_.advance(t);
  last_score_ = tracker_.score();
  const double stat =
      last_score_.dot(fisher_inverse_ * last_score_) / cfg_.window;
  ++n_;
  return {t, stat, kNoTime, crosses(stat, cfg_.threshold, comparison())};
}

DetectionOutcome score_run(const HawkesModel& pre, const Eigen::MatrixXd& fisher,
                           const EventStream& stream, const WindowConfig& cfg,
                           double ridge, double max_time) {
  ScoreDetector det(pre, regularized_inverse(fisher, ridge), cfg);
  return run_detector(det, stream.events, std::min(max_time, stream.horizon));
}

}  // namespace hawkscan
