#include "hawkscan/glr.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hawkscan/likelihood.hpp"

namespace hawkscan {

GlrWindowResult glr_window(const HawkesModel& pre, std::span<const Event> events,
                           double a, double b, const EmConfig& em) {
  require_valid(pre);
  if (!(a < b)) throw std::invalid_argument("GLR window must have length > 0");
  const EmResult fit =
      em_mle(events, a, b, pre.common_kernel(), pre.mu(), EmConfig{em.tol, em.max_iter, em.init, false});
  GlrWindowResult out;
  out.a_hat = fit.a;
  out.iterations = fit.iterations;
  out.converged = fit.converged;
  out.statistic = fit.log_likelihood - log_likelihood(pre, events, a, b, 0.0);
  return out;
}

GlrDetector::GlrDetector(const HawkesModel& pre, const WindowConfig& cfg,
                         const EmConfig& em, bool warm_start, double warm_floor)
    : pre_(pre),
      cfg_(cfg),
      em_(em),
      warm_start_(warm_start),
      warm_floor_(warm_floor),
      tracker_(pre, cfg.window) {
  require_valid(pre);
  if (!(cfg.grid > 0.0) || !std::isfinite(cfg.grid)) {
    throw std::invalid_argument("grid size must be > 0");
  }
  if (!(warm_floor >= 0.0)) {
    throw std::invalid_argument("warm-start floor must be >= 0");
  }
  em_.fit_mu = false;
}

void GlrDetector::observe(const Event& e) {
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

StepResult GlrDetector::step() {
  const double t = next_time();
  tracker_.advance(t);
  const double start = std::max(0.0, t - cfg_.window);

  scratch_.clear();
  for (const auto& en : tracker_.entries()) scratch_.push_back(en.e);
  const WindowData data = prepare_window(scratch_, start, t,
                                         pre_.common_kernel(), pre_.dim());
  EmConfig em = em_;
  if (warm_start_ && previous_) {
    em.init = previous_->cwiseMax(warm_floor_);
  }
  const EmResult fit = em_mle(data, pre_.mu(), em);
  a_hat_ = fit.a;
  previous_ = fit.a;
  total_iterations_ += fit.iterations;
  ++windows_;
  if (!fit.converged) ++unconverged_;

  const double stat = fit.log_likelihood - tracker_.null_log_likelihood();
  ++n_;
  return {t, stat, kNoTime, crosses(stat, cfg_.threshold, comparison())};
}

DetectionOutcome glr_run(const HawkesModel& pre, const EventStream& stream,
                         const WindowConfig& cfg, const EmConfig& em,
                         double max_time) {
  GlrDetector det(pre, cfg, em);
  return run_detector(det, stream.events, std::min(max_time, stream.horizon));
}

}  // namespace hawkscan
