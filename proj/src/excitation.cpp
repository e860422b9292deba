#include "hawkscan/excitation.hpp"

#include <cmath>

namespace hawkscan {

Excitation::Excitation(const HawkesModel& model, double history_start)
    : model_(model),
      history_start_(history_start),
      shared_(model.shared_kernel()),
      recursive_(model.shared_kernel() && model.exponential_untruncated()),
      support_(model.max_support()) {
  const int d = model_.dim();
  if (recursive_) {
    beta_ = model_.common_kernel().beta();
    decayed_ = Eigen::VectorXd::Zero(d);
  }
  rows_.assign(shared_ ? 1 : static_cast<std::size_t>(d),
               Eigen::VectorXd::Zero(d));
}

void Excitation::push(const Event& e) {
  if (!(e.t > history_start_)) return;
  if (recursive_) {
    decayed_ *= std::exp(-beta_ * (e.t - t_ref_));
    t_ref_ = e.t;
    decayed_(e.u) += 1.0;
  } else {
    window_.push_back(e);
  }
}

void Excitation::prune(double s) {
  while (!window_.empty() && window_.front().t < s - support_) {
    window_.pop_front();
  }
}

void Excitation::evaluate(double s) {
  if (recursive_) {
    rows_[0] = (beta_ * std::exp(-beta_ * (s - t_ref_))) * decayed_;
    return;
  }
  prune(s);
  for (auto& r : rows_) r.setZero();
  for (const Event& v : window_) {
    if (!(v.t < s)) break;
    if (shared_) {
      rows_[0](v.u) += model_.common_kernel().density(s - v.t);
    } else {
      for (int i = 0; i < model_.dim(); ++i) {
        rows_[static_cast<std::size_t>(i)](v.u) +=
            model_.kernel(i, v.u).density(s - v.t);
      }
    }
  }
}

void Excitation::evaluate_envelope(double s) {
  if (recursive_) {
    rows_[0] = (beta_ * std::exp(-beta_ * (s - t_ref_))) * decayed_;
    return;
  }
  prune(s);
  for (auto& r : rows_) r.setZero();
  for (const Event& v : window_) {
    if (v.t > s) break;
    if (shared_) {
      rows_[0](v.u) += model_.common_kernel().tail_sup(s - v.t);
    } else {
      for (int i = 0; i < model_.dim(); ++i) {
        rows_[static_cast<std::size_t>(i)](v.u) +=
            model_.kernel(i, v.u).tail_sup(s - v.t);
      }
    }
  }
}

double Excitation::intensity(int i) const {
  return model_.mu()(i) + model_.influence().row(i).dot(row(i));
}

}  // namespace hawkscan
