#include "hawkscan/window_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hawkscan {

namespace {

constexpr std::size_t kRefreshEvery = 4096;

}  // namespace

CumulativeTracker::CumulativeTracker(const Kernel& kernel, int dim)
    : kernel_(kernel),
      recursive_(kernel.is_exponential() && !kernel.is_truncated()),
      mass_(kernel.mass()),
      support_(kernel.support()),
      count_(Eigen::VectorXd::Zero(dim)),
      decayed_(Eigen::VectorXd::Zero(dim)),
      value_(Eigen::VectorXd::Zero(dim)) {
  if (recursive_) beta_ = kernel.beta();
}

void CumulativeTracker::push(const Event& e) {
  if (recursive_) {
    decayed_ *= std::exp(-beta_ * (e.t - t_ref_));
    t_ref_ = e.t;
    decayed_(e.u) += 1.0;
    count_(e.u) += 1.0;
  } else {
    recent_.push_back(e);
  }
}

const Eigen::VectorXd& CumulativeTracker::value(double t) {
  if (recursive_) {
    value_ = count_ - std::exp(-beta_ * (t - t_ref_)) * decayed_;
    return value_;
  }
  while (!recent_.empty() && t - recent_.front().t >= support_) {
    count_(recent_.front().u) += 1.0;
    recent_.pop_front();
  }
  value_ = mass_ * count_;
  for (const Event& v : recent_) {
    if (v.t > t) break;
    value_(v.u) += kernel_.cumulative(t - v.t);
  }
  return value_;
}

WindowTracker::WindowTracker(const HawkesModel& pre, double window)
    : pre_(pre),
      window_(window),
      d_(pre.dim()),
      ex_(pre, 0.0),
      at_end_(pre.common_kernel(), pre.dim()),
      at_start_(pre.common_kernel(), pre.dim()),
      jump_sum_(Eigen::MatrixXd::Zero(pre.dim(), pre.dim())),
      k_end_(Eigen::VectorXd::Zero(pre.dim())),
      k_start_(Eigen::VectorXd::Zero(pre.dim())) {
  if (!(window > 0.0) || !std::isfinite(window)) {
    throw std::invalid_argument("window length must be > 0");
  }
}

void WindowTracker::push(const Event& e) {
  if (e.u < 0 || e.u >= d_) {
    throw std::invalid_argument("event node index out of range");
  }
  if (!(e.t > 0.0)) return;
  ex_.evaluate(e.t);
  const double lambda = ex_.intensity(e.u);
  if (!(lambda > 0.0)) {
    throw std::domain_error("non-positive pre-change intensity at an event");
  }
  Entry entry{e, lambda, ex_.row(e.u)};
  ex_.push(e);
  at_end_.push(e);
  lagged_.push_back(e);
  jump_sum_.row(e.u) += entry.x.transpose() / lambda;
  log_sum_ += std::log(lambda);
  entries_.push_back(std::move(entry));
}

void WindowTracker::recompute_sums() {
  jump_sum_.setZero();
  log_sum_ = 0.0;
  for (const Entry& en : entries_) {
    jump_sum_.row(en.e.u) += en.x.transpose() / en.lambda;
    log_sum_ += std::log(en.lambda);
  }
  removed_since_refresh_ = 0;
}

void WindowTracker::advance(double t) {
  if (t < end_) throw std::invalid_argument("window end must not decrease");
  end_ = t;
  const double start = t - window_;
  while (!entries_.empty() && entries_.front().e.t <= start) {
    const Entry& en = entries_.front();
    jump_sum_.row(en.e.u) -= en.x.transpose() / en.lambda;
    log_sum_ -= std::log(en.lambda);
    entries_.pop_front();
    ++removed_since_refresh_;
  }
  if (removed_since_refresh_ >= kRefreshEvery) recompute_sums();

  while (lagged_pos_ < lagged_.size() && lagged_[lagged_pos_].t <= start) {
    at_start_.push(lagged_[lagged_pos_++]);
  }
  if (lagged_pos_ > kRefreshEvery) {
    lagged_.erase(lagged_.begin(),
                  lagged_.begin() + static_cast<std::ptrdiff_t>(lagged_pos_));
    lagged_pos_ = 0;
  }
  k_end_ = at_end_.value(t);
  if (start > 0.0) {
    k_start_ = at_start_.value(start);
  } else {
    k_start_.setZero();
  }
}

Eigen::VectorXd WindowTracker::score() const {
  Eigen::VectorXd u(d_ * d_);
  const Eigen::VectorXd mass = excitation_mass();
  for (int i = 0; i < d_; ++i) {
    for (int j = 0; j < d_; ++j) u(i * d_ + j) = jump_sum_(i, j) - mass(j);
  }
  return u;
}

double WindowTracker::null_log_likelihood() const {
  const double length = std::min(window_, end_);
  const Eigen::VectorXd mass = excitation_mass();
  return log_sum_ - pre_.mu().sum() * length -
         (pre_.influence() * mass).sum();
}

}  // namespace hawkscan
