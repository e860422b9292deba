#include "hawkscan/cusum.hpp"

#include <cmath>
#include <stdexcept>

#include "hawkscan/likelihood.hpp"

namespace hawkscan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_pair(const HawkesModel& pre, const HawkesModel& post) {
  if (pre.dim() != post.dim()) {
    throw std::invalid_argument("pre- and post-change models differ in size");
  }
  if (pre.mu() != post.mu()) {
    throw std::invalid_argument(
        "pre- and post-change models must share base rates");
  }
}

}  // namespace

double llr_at(const HawkesModel& pre, const HawkesModel& post,
              std::span<const Event> events, double tau, double t) {
  check_pair(pre, post);
  if (tau < 0.0) throw std::invalid_argument("tau must be >= 0");
  if (tau > t) throw std::invalid_argument("tau must not exceed t");
  if (tau == t) return 0.0;
  return log_likelihood(post, events, tau, t, tau) -
         log_likelihood(pre, events, tau, t, 0.0);
}

double llr_step(const HawkesModel& pre, const HawkesModel& post,
                std::span<const Event> events, double tau, double t_from,
                double t_to, double ell) {
  check_pair(pre, post);
  if (tau > t_from) throw std::invalid_argument("tau must not exceed t_from");
  if (t_from > t_to) throw std::invalid_argument("t_from must not exceed t_to");
  const int d = pre.dim();
  for (const Event& e : events) {
    if (e.t > t_to) break;
    if (e.t > t_from) {
      const double num = conditional_intensity(post, events, e.u, e.t, tau);
      const double den = conditional_intensity(pre, events, e.u, e.t, 0.0);
      ell += std::log(num / den);
    }
  }
  for (const Event& v : events) {
    if (v.t >= t_to) break;
    if (v.t <= 0.0) continue;
    for (int i = 0; i < d; ++i) {
      const Kernel& k0 = pre.kernel(i, v.u);
      ell += pre.alpha(i, v.u) *
             (k0.cumulative(t_to - v.t) - k0.cumulative(t_from - v.t));
      if (v.t > tau) {
        const Kernel& k1 = post.kernel(i, v.u);
        ell -= post.alpha(i, v.u) *
               (k1.cumulative(t_to - v.t) - k1.cumulative(t_from - v.t));
      }
    }
  }
  return ell;
}

CusumDetector::CusumDetector(const HawkesModel& pre, const HawkesModel& post,
                             const CusumConfig& cfg)
    : pre_(pre.with_truncation(cfg.truncation)),
      post_(post.with_truncation(cfg.truncation)),
      cfg_(cfg),
      width_(cfg.truncation.value_or(kInf)) {
  require_valid(pre);
  require_valid(post);
  check_pair(pre, post);
  if (!(cfg.threshold > 0.0)) {
    throw std::invalid_argument("CUSUM threshold must be > 0");
  }
  if (!(cfg.grid > 0.0) || !std::isfinite(cfg.grid)) {
    throw std::invalid_argument("CUSUM grid size must be > 0");
  }
  if (cfg.truncation && *cfg.truncation < cfg.grid) {
    throw std::invalid_argument("truncation width must be >= grid size");
  }
  same_kernel_ = pre_.shared_kernel() && post_.shared_kernel() &&
                 pre_.common_kernel() == post_.common_kernel();
  pre_colsum_ = pre_.influence().colwise().sum().transpose();
  post_colsum_ = post_.influence().colwise().sum().transpose();
}

double CusumDetector::pre_weight(int i, int j, double x) const {
  return pre_.alpha(i, j) * pre_.kernel(i, j).density(x);
}

double CusumDetector::post_weight(int i, int j, double x) const {
  return post_.alpha(i, j) * post_.kernel(i, j).density(x);
}

// sum_i A0(i, j) [Phi_ij(to) - Phi_ij(from)]
double CusumDetector::pre_mass(int j, double from, double to) const {
  if (pre_.shared_kernel()) {
    const Kernel& k = pre_.common_kernel();
    return pre_colsum_(j) * (k.cumulative(to) - k.cumulative(from));
  }
  double m = 0.0;
  for (int i = 0; i < pre_.dim(); ++i) {
    const Kernel& k = pre_.kernel(i, j);
    m += pre_.alpha(i, j) * (k.cumulative(to) - k.cumulative(from));
  }
  return m;
}

double CusumDetector::post_mass(int j, double from, double to) const {
  if (post_.shared_kernel()) {
    const Kernel& k = post_.common_kernel();
    return post_colsum_(j) * (k.cumulative(to) - k.cumulative(from));
  }
  double m = 0.0;
  for (int i = 0; i < post_.dim(); ++i) {
    const Kernel& k = post_.kernel(i, j);
    m += post_.alpha(i, j) * (k.cumulative(to) - k.cumulative(from));
  }
  return m;
}

void CusumDetector::observe(const Event& e) {
  if (e.u < 0 || e.u >= pre_.dim()) {
    throw std::invalid_argument("event node index out of range");
  }
  const double processed = static_cast<double>(n_) * cfg_.grid;
  if (e.t <= processed && e.t > 0.0) {
    throw std::invalid_argument("event arrived after its grid cell was closed");
  }
  if (events_seen_ > 0 && !(e.t > last_seen_)) {
    throw std::invalid_argument("events must arrive in increasing time order");
  }
  last_seen_ = e.t;
  ++events_seen_;
  // An event at t = 0 lies outside every integration range (0, t].
  if (e.t > 0.0) pending_.push_back(e);
}

// Folds the log-intensity ratios at event e into every candidate with
// tau < e.t, then makes e a candidate itself.
void CusumDetector::absorb(const Event& e) {
  const double s = e.t;
  const int i = e.u;
  const double mu = pre_.mu()(i);
  const std::size_t p = window_.size();
  scratch_.resize(p);

  double lam_pre = mu;
  if (same_kernel_) {
    const Kernel& k = pre_.common_kernel();
    for (std::size_t q = 0; q < p; ++q) {
      const Candidate& c = window_[q];
      const double x = s - c.tau;
      const double phi = x <= width_ ? k.density(x) : 0.0;
      lam_pre += pre_.alpha(i, c.u) * phi;
      scratch_[q] = post_.alpha(i, c.u) * phi;
    }
  } else {
    for (std::size_t q = 0; q < p; ++q) {
      const Candidate& c = window_[q];
      const double x = s - c.tau;
      lam_pre += pre_weight(i, c.u, x);
      scratch_[q] = post_weight(i, c.u, x);
    }
  }
  if (!(lam_pre > 0.0)) {
    throw std::domain_error("non-positive pre-change intensity at an event");
  }

  double suffix = 0.0;
  for (std::size_t q = p; q-- > 0;) {
    window_[q].ell += std::log((mu + suffix) / lam_pre);
    suffix += scratch_[q];
  }
  root_.ell += std::log((mu + suffix) / lam_pre);

  window_.push_back({s, i, 0.0});
}

StepResult CusumDetector::step() {
  const double t0 = static_cast<double>(n_) * cfg_.grid;
  const double t1 = static_cast<double>(n_ + 1) * cfg_.grid;

  // Candidates that left the truncation window share every future increment.
  while (!window_.empty() && window_.front().tau < t0 - width_) {
    if (window_.front().ell > root_.ell) root_ = window_.front();
    window_.pop_front();
  }

  const std::size_t fresh = window_.size();
  while (!pending_.empty() && pending_.front().t <= t1) {
    absorb(pending_.front());
    pending_.pop_front();
  }

  // Compensator over (t0, t1]. For candidates older than the cell the
  // pre-change part is the common value P; a fresh candidate tau only
  // integrates over (tau, t1], so it also subtracts Q = pre mass on (t0, tau].
  const std::size_t p = window_.size();
  scratch_.resize(p);
  double pre_total = 0.0;
  for (std::size_t q = 0; q < p; ++q) {
    const Candidate& c = window_[q];
    pre_total += pre_mass(c.u, t0 - c.tau, t1 - c.tau);
    scratch_[q] = post_mass(c.u, t0 - c.tau, t1 - c.tau);
  }

  double suffix = 0.0;
  for (std::size_t q = p; q-- > 0;) {
    Candidate& c = window_[q];
    double pre_part = pre_total;
    if (q >= fresh) {
      for (std::size_t r = 0; r < q; ++r) {
        const Candidate& v = window_[r];
        pre_part -= pre_mass(v.u, t0 - v.tau, c.tau - v.tau);
      }
    }
    c.ell += pre_part - suffix;
    suffix += scratch_[q];
  }
  root_.ell += pre_total - suffix;

  double best = root_.ell;
  double tau_hat = root_.tau;
  for (const Candidate& c : window_) {
    if (c.ell > best) {
      best = c.ell;
      tau_hat = c.tau;
    }
  }
  ++n_;
  return {t1, best, tau_hat, crosses(best, cfg_.threshold, comparison())};
}

DetectionOutcome cusum_run(const HawkesModel& pre, const HawkesModel& post,
                           const EventStream& stream, const CusumConfig& cfg,
                           double max_time) {
  CusumConfig exact = cfg;
  exact.truncation.reset();
  CusumDetector det(pre, post, exact);
  return run_detector(det, stream.events, std::min(max_time, stream.horizon));
}

DetectionOutcome cusum_truncated_run(const HawkesModel& pre,
                                     const HawkesModel& post,
                                     const EventStream& stream,
                                     const CusumConfig& cfg, double max_time) {
  if (!cfg.truncation) {
    throw std::invalid_argument("truncated CUSUM needs a truncation width");
  }
  CusumDetector det(pre, post, cfg);
  return run_detector(det, stream.events, std::min(max_time, stream.horizon));
}

}  // namespace hawkscan
