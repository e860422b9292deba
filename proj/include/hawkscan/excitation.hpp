#pragma once

#include <Eigen/Dense>

#include <deque>
#include <vector>

#include "hawkscan/model.hpp"

namespace hawkscan {

// Streaming evaluation of the excitation
//
//   X_ij(s) = sum over pushed events (v, j) with history_start < v < s of
//             phi~_ij(s - v)
//
// so that the intensity of node i is mu_i + sum_j A(i, j) X_ij(s).
//
// Events are pushed in increasing time order and evaluation times must not
// decrease. Untruncated exponential kernels use the usual decayed-sum
// recursion; every other kernel keeps only the events inside its support.
class Excitation {
 public:
  explicit Excitation(const HawkesModel& model, double history_start = 0.0);

  // Events at or before history_start are ignored.
  void push(const Event& e);

  // Excitation at s from events strictly before s. With the exponential
  // recursion every pushed event must be strictly before s.
  void evaluate(double s);

  // Per-source bound sup_{x >= s} on the excitation, valid for every time
  // >= s until the next push (includes events at s).
  void evaluate_envelope(double s);

  // X_{i.} at the last evaluation.
  const Eigen::VectorXd& row(int i) const {
    return rows_[shared_ ? 0 : static_cast<std::size_t>(i)];
  }
  double intensity(int i) const;

  double history_start() const { return history_start_; }
  const HawkesModel& model() const { return model_; }

 private:
  void prune(double s);

  HawkesModel model_;
  double history_start_;
  bool shared_;
  bool recursive_;
  double beta_ = 0.0;

  // recursive state: decayed[j] = sum exp(-beta (t_ref - v)) over node-j events
  Eigen::VectorXd decayed_;
  double t_ref_ = 0.0;

  std::deque<Event> window_;
  double support_;

  std::vector<Eigen::VectorXd> rows_;
};

}  // namespace hawkscan
