#pragma once

#include <Eigen/Dense>

#include <deque>
#include <vector>

#include "hawkscan/excitation.hpp"
#include "hawkscan/model.hpp"

namespace hawkscan {

// K_j(t) = sum over pushed node-j events v <= t of Phi~(t - v), for one
// shared kernel. Pushes must be in time order and queries non-decreasing,
// with every pushed event at or before the query time.
class CumulativeTracker {
 public:
  CumulativeTracker(const Kernel& kernel, int dim);

  void push(const Event& e);
  const Eigen::VectorXd& value(double t);

 private:
  Kernel kernel_;
  bool recursive_;
  double beta_ = 0.0;
  double mass_;
  double support_;

  Eigen::VectorXd count_;    // events whose kernel mass is fully spent
  Eigen::VectorXd decayed_;  // exponential recursion state at t_ref_
  double t_ref_ = 0.0;
  std::deque<Event> recent_;
  Eigen::VectorXd value_;
};

// Sliding-window bookkeeping shared by the score and GLR detectors.
//
// Every event is scored against the pre-change model with its full history
// (B-truncated when the model's kernel is truncated): the excitation row
// X_{u,.}(s) and the intensity lambda_{u,inf}(s) are frozen when the event
// arrives. The tracker then keeps the events of the window (t - w, t] and
// the running sums needed by the windowed statistics.
class WindowTracker {
 public:
  struct Entry {
    Event e;
    double lambda;      // pre-change intensity at the event
    Eigen::VectorXd x;  // excitation row X_{u,.}(t) at the event
  };

  // Requires a shared kernel.
  WindowTracker(const HawkesModel& pre, double window);

  // Feeds one event (time order, strictly increasing).
  void push(const Event& e);
  // Moves the window end to t (non-decreasing); all events <= t must have
  // been pushed.
  void advance(double t);

  double end() const { return end_; }
  double start() const { return end_ - window_; }
  double window() const { return window_; }
  const std::deque<Entry>& entries() const { return entries_; }

  // Score vector at A0 over the window, row-major vec(A) order.
  Eigen::VectorXd score() const;
  // Pre-change log-likelihood of the window with full history.
  double null_log_likelihood() const;
  // Per-node compensator integral of X_{.j} over the window:
  // K_j(end) - K_j(start).
  Eigen::VectorXd excitation_mass() const { return k_end_ - k_start_; }

 private:
  void recompute_sums();

  HawkesModel pre_;
  double window_;
  int d_;
  Excitation ex_;
  CumulativeTracker at_end_;
  CumulativeTracker at_start_;
  std::vector<Event> lagged_;  // events not yet pushed into at_start_
  std::size_t lagged_pos_ = 0;

  std::deque<Entry> entries_;
  double end_ = 0.0;

  Eigen::MatrixXd jump_sum_;  // sum over window of X_{u,.} / lambda on row u
  double log_sum_ = 0.0;
  std::size_t removed_since_refresh_ = 0;

  Eigen::VectorXd k_end_;
  Eigen::VectorXd k_start_;
};

}  // namespace hawkscan
