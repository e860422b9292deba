#pragma once

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <vector>

#include "hawkscan/kernel.hpp"
#include "hawkscan/model.hpp"

namespace hawkscan {

struct EmConfig {
  double tol = 1e-4;  // stop when the log-likelihood gain drops below tol
  int max_iter = 1000;
  // Starting influence matrix; unset starts from 0.1 everywhere.
  std::optional<Eigen::MatrixXd> init;
  // Also update the base rates (used by the estimate command).
  bool fit_mu = false;
};

// Events of a window (a, b] with history restarted at a, preprocessed for
// EM. Events are grouped by node: x[i] holds one row per node-i event with
// the excitation X_{i,.}(t) from earlier in-window events. mass(j) is the
// kernel mass sum Phi(b - v) over node-j events v in the window.
struct WindowData {
  int dim = 0;
  double a = 0.0;
  double b = 0.0;
  std::vector<Eigen::MatrixXd> x;
  Eigen::VectorXd mass;

  std::size_t events() const {
    std::size_t n = 0;
    for (const auto& m : x) n += static_cast<std::size_t>(m.rows());
    return n;
  }
};

WindowData prepare_window(std::span<const Event> events, double a, double b,
                          const Kernel& kernel, int dim);

struct EmResult {
  Eigen::MatrixXd a;
  Eigen::VectorXd mu;
  int iterations = 0;
  bool converged = false;
  double log_likelihood = 0.0;
  // Window log-likelihood before each M-step and at the returned iterate.
  std::vector<double> trace;
};

// Window log-likelihood of (mu, A) with history restarted at data.a.
double window_log_likelihood(const WindowData& data, const Eigen::VectorXd& mu,
                             const Eigen::MatrixXd& a);

// Branching-structure EM for the influence matrix (and optionally mu) on one
// window. Never throws for non-convergence; check `converged`.
EmResult em_mle(const WindowData& data, const Eigen::VectorXd& mu,
                const EmConfig& cfg);
EmResult em_mle(std::span<const Event> events, double a, double b,
                const Kernel& kernel, const Eigen::VectorXd& mu,
                const EmConfig& cfg);

}  // namespace hawkscan
