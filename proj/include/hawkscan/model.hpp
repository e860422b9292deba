#pragma once

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hawkscan/kernel.hpp"

namespace hawkscan {

// One mark of the network process: an event at time t on node u.
struct Event {
  double t = 0.0;
  int u = 0;

  bool operator==(const Event&) const = default;
};

// Time-sorted events observed on [0, horizon].
struct EventStream {
  std::vector<Event> events;
  double horizon = 0.0;
};

// Throws std::invalid_argument unless times are strictly increasing, lie in
// [0, horizon] and nodes lie in [0, dim).
void validate_stream(const EventStream& stream, int dim);

// Multivariate Hawkes model: constant base rates mu, influence matrix A with
// A(i, j) the influence of node j on node i, and either one kernel shared by
// every edge or a row-major D x D table of per-edge kernels.
class HawkesModel {
 public:
  HawkesModel(Eigen::VectorXd mu, Eigen::MatrixXd influence, Kernel kernel);
  HawkesModel(Eigen::VectorXd mu, Eigen::MatrixXd influence,
              std::vector<Kernel> edge_kernels);

  int dim() const { return static_cast<int>(mu_.size()); }
  const Eigen::VectorXd& mu() const { return mu_; }
  const Eigen::MatrixXd& influence() const { return influence_; }
  double alpha(int i, int j) const { return influence_(i, j); }

  bool shared_kernel() const { return kernels_.size() == 1; }
  // Kernel on the edge j -> i.
  const Kernel& kernel(int i, int j) const {
    return shared_kernel() ? kernels_.front()
                           : kernels_[static_cast<std::size_t>(i * dim() + j)];
  }
  // The shared kernel; throws when the model carries per-edge kernels.
  const Kernel& common_kernel() const;
  const std::vector<Kernel>& kernels() const { return kernels_; }

  // Largest kernel support over all edges.
  double max_support() const;
  // True when every kernel is an untruncated exponential with one rate.
  bool exponential_untruncated() const;

  HawkesModel with_influence(Eigen::MatrixXd influence) const;
  HawkesModel with_truncation(std::optional<double> width) const;

 private:
  Eigen::VectorXd mu_;
  Eigen::MatrixXd influence_;
  std::vector<Kernel> kernels_;
};

// Pre- and post-change laws and the change time kappa. Only the influence
// matrix may differ between the two.
struct ChangeSpec {
  HawkesModel pre;
  HawkesModel post;
  double kappa = 0.0;
};

double spectral_radius(const Eigen::MatrixXd& m);

// Every violated model invariant, as human-readable diagnostics.
std::vector<std::string> validate_model(const HawkesModel& model);
// Throws std::invalid_argument listing the diagnostics of validate_model.
void require_valid(const HawkesModel& model);
void require_valid(const ChangeSpec& spec);

}  // namespace hawkscan
