#pragma once

#include <Eigen/Dense>

#include <span>

#include "hawkscan/model.hpp"

namespace hawkscan {

// lambda_i(t) = mu_i + sum_j A(i, j) sum_{history_start < t_k < t, u_k = j}
//               phi_ij(t - t_k).
// Events at exactly t are excluded (left limit). Direct evaluation, O(n).
double conditional_intensity(const HawkesModel& model,
                             std::span<const Event> events, int node, double t,
                             double history_start = 0.0);

// Log-likelihood contribution of one node over the window (a, b]:
//   sum_{events (t_k, node) in (a, b]} log lambda_node(t_k)
//     - integral_a^b lambda_node(s) ds
// with lambda computed from history_start. The compensator uses the
// cumulative kernel, so it is exact for every supported kernel.
// Throws std::domain_error if the intensity is not positive at an event.
double node_log_likelihood(const HawkesModel& model,
                           std::span<const Event> events, int node, double a,
                           double b, double history_start = 0.0);

// Network log-likelihood: the sum of node_log_likelihood over nodes.
double log_likelihood(const HawkesModel& model, std::span<const Event> events,
                      double a, double b, double history_start = 0.0);

// Stationary mean intensity (I - A)^{-1} mu. Throws std::domain_error when
// the model is not stationary.
Eigen::VectorXd mean_field_intensity(const HawkesModel& model);

// Mean-field KL divergence rate between post- and pre-change laws:
//   lbar1' (log lbar1 - log lbar0) - 1' (lbar1 - lbar0).
double kl_mean_field(const HawkesModel& pre, const HawkesModel& post);

}  // namespace hawkscan
