#include "hawkscan/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hawkscan/excitation.hpp"

namespace hawkscan {

namespace {

// Index of the first event with time > t.
std::size_t first_after(std::span<const Event> events, double t) {
  auto it = std::upper_bound(
      events.begin(), events.end(), t,
      [](double value, const Event& e) { return value < e.t; });
  return static_cast<std::size_t>(it - events.begin());
}

}  // namespace

double conditional_intensity(const HawkesModel& model,
                             std::span<const Event> events, int node, double t,
                             double history_start) {
  if (history_start > t) {
    throw std::invalid_argument("history_start must not exceed t");
  }
  if (node < 0 || node >= model.dim()) {
    throw std::invalid_argument("node index out of range");
  }
  double lambda = model.mu()(node);
  for (const Event& e : events) {
    if (e.t >= t) break;
    if (e.t <= history_start) continue;
    lambda += model.alpha(node, e.u) * model.kernel(node, e.u).density(t - e.t);
  }
  return lambda;
}

double node_log_likelihood(const HawkesModel& model,
                           std::span<const Event> events, int node, double a,
                           double b, double history_start) {
  if (!(history_start <= a && a <= b)) {
    throw std::invalid_argument(
        "log-likelihood window requires history_start <= a <= b");
  }
  const double support = model.max_support();
  const double lower = std::max(history_start, a - support);
  const std::size_t start = first_after(events, lower);
  const std::size_t stop = first_after(events, b);

  double log_sum = 0.0;
  Excitation ex(model, history_start);
  for (std::size_t k = start; k < stop; ++k) {
    const Event& e = events[k];
    if (e.u == node && e.t > a) {
      ex.evaluate(e.t);
      const double lambda = ex.intensity(node);
      if (!(lambda > 0.0)) {
        throw std::domain_error("non-positive intensity at an event");
      }
      log_sum += std::log(lambda);
    }
    ex.push(e);
  }

  double compensator = model.mu()(node) * (b - a);
  for (std::size_t k = start; k < stop; ++k) {
    const Event& v = events[k];
    if (v.t >= b) break;
    const Kernel& kern = model.kernel(node, v.u);
    compensator += model.alpha(node, v.u) *
                   (kern.cumulative(b - v.t) - kern.cumulative(a - v.t));
  }
  return log_sum - compensator;
}

double log_likelihood(const HawkesModel& model, std::span<const Event> events,
                      double a, double b, double history_start) {
  double total = 0.0;
  for (int i = 0; i < model.dim(); ++i) {
    total += node_log_likelihood(model, events, i, a, b, history_start);
  }
  return total;
}

Eigen::VectorXd mean_field_intensity(const HawkesModel& model) {
  // Truncated kernels carry mass Phi(B) < 1, which scales each influence.
  Eigen::MatrixXd a = model.influence();
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) a(i, j) *= model.kernel(i, j).mass();
  }
  if (spectral_radius(a) >= 1.0) {
    throw std::domain_error("mean-field intensity requires spectral radius < 1");
  }
  const Eigen::MatrixXd system =
      Eigen::MatrixXd::Identity(a.rows(), a.cols()) - a;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
  if (!lu.isInvertible() || lu.rcond() < 1e-12) {
    throw std::domain_error("I - A is singular or ill-conditioned");
  }
  Eigen::VectorXd rates = lu.solve(model.mu());
  if ((rates.array() <= 0.0).any()) {
    throw std::domain_error("mean-field intensity has non-positive entries");
  }
  return rates;
}

double kl_mean_field(const HawkesModel& pre, const HawkesModel& post) {
  if (pre.dim() != post.dim()) {
    throw std::invalid_argument("KL divergence needs models of equal size");
  }
  const Eigen::VectorXd l0 = mean_field_intensity(pre);
  const Eigen::VectorXd l1 = mean_field_intensity(post);
  const Eigen::ArrayXd log_ratio = l1.array().log() - l0.array().log();
  return (l1.array() * log_ratio).sum() - (l1 - l0).sum();
}

}  // namespace hawkscan
