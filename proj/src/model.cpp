#include "hawkscan/model.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hawkscan {

void validate_stream(const EventStream& stream, int dim) {
  double prev = -1.0;
  for (std::size_t k = 0; k < stream.events.size(); ++k) {
    const Event& e = stream.events[k];
    if (!std::isfinite(e.t) || e.t < 0.0 || e.t > stream.horizon) {
      throw std::invalid_argument("event " + std::to_string(k) +
                                  " lies outside [0, horizon]");
    }
    if (e.u < 0 || e.u >= dim) {
      throw std::invalid_argument("event " + std::to_string(k) +
                                  " has node index out of range");
    }
    if (!(e.t > prev)) {
      throw std::invalid_argument("event times must be strictly increasing "
                                  "(event " + std::to_string(k) + ")");
    }
    prev = e.t;
  }
}

HawkesModel::HawkesModel(Eigen::VectorXd mu, Eigen::MatrixXd influence,
                         Kernel kernel)
    : mu_(std::move(mu)), influence_(std::move(influence)) {
  kernels_.push_back(std::move(kernel));
  if (mu_.size() == 0 || influence_.rows() != mu_.size() ||
      influence_.cols() != mu_.size()) {
    throw std::invalid_argument("influence matrix must be D x D with D = |mu|");
  }
}

HawkesModel::HawkesModel(Eigen::VectorXd mu, Eigen::MatrixXd influence,
                         std::vector<Kernel> edge_kernels)
    : mu_(std::move(mu)),
      influence_(std::move(influence)),
      kernels_(std::move(edge_kernels)) {
  if (mu_.size() == 0 || influence_.rows() != mu_.size() ||
      influence_.cols() != mu_.size()) {
    throw std::invalid_argument("influence matrix must be D x D with D = |mu|");
  }
  const auto d = static_cast<std::size_t>(mu_.size());
  if (kernels_.size() != d * d && kernels_.size() != 1) {
    throw std::invalid_argument("per-edge kernel table must hold D * D kernels");
  }
}

const Kernel& HawkesModel::common_kernel() const {
  if (!shared_kernel()) {
    throw std::invalid_argument(
        "operation requires one kernel shared by every edge");
  }
  return kernels_.front();
}

double HawkesModel::max_support() const {
  double s = 0.0;
  for (const auto& k : kernels_) s = std::max(s, k.support());
  return s;
}

bool HawkesModel::exponential_untruncated() const {
  const Kernel& first = kernels_.front();
  return std::all_of(kernels_.begin(), kernels_.end(), [&](const Kernel& k) {
    return k.is_exponential() && !k.is_truncated() && k.beta() == first.beta();
  });
}

HawkesModel HawkesModel::with_influence(Eigen::MatrixXd influence) const {
  return HawkesModel(mu_, std::move(influence), kernels_);
}

HawkesModel HawkesModel::with_truncation(std::optional<double> width) const {
  std::vector<Kernel> ks;
  ks.reserve(kernels_.size());
  for (const auto& k : kernels_) ks.push_back(k.with_truncation(width));
  return HawkesModel(mu_, influence_, std::move(ks));
}

double spectral_radius(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

std::vector<std::string> validate_model(const HawkesModel& model) {
  std::vector<std::string> issues;
  const int d = model.dim();
  for (int i = 0; i < d; ++i) {
    if (!(model.mu()(i) > 0.0) || !std::isfinite(model.mu()(i))) {
      issues.push_back("base rate mu[" + std::to_string(i) +
                       "] must be positive");
    }
  }
  bool finite = true;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const double a = model.alpha(i, j);
      if (!std::isfinite(a)) {
        finite = false;
        issues.push_back("influence a[" + std::to_string(i) + "][" +
                         std::to_string(j) + "] is not finite");
      } else if (a < 0.0) {
        issues.push_back("influence a[" + std::to_string(i) + "][" +
                         std::to_string(j) + "] is negative");
      }
    }
  }
  if (finite) {
    const double rho = spectral_radius(model.influence());
    if (rho >= 1.0) {
      std::ostringstream os;
      os << "spectral radius >= 1 (" << rho << "); process is not stationary";
      issues.push_back(os.str());
    }
  }
  for (const auto& k : model.kernels()) {
    for (auto& issue : validate_kernel(k)) issues.push_back(std::move(issue));
  }
  return issues;
}

void require_valid(const HawkesModel& model) {
  const auto issues = validate_model(model);
  if (issues.empty()) return;
  std::string msg = "invalid Hawkes model:";
  for (const auto& s : issues) msg += "\n  - " + s;
  throw std::invalid_argument(msg);
}

void require_valid(const ChangeSpec& spec) {
  require_valid(spec.pre);
  require_valid(spec.post);
  if (spec.pre.dim() != spec.post.dim()) {
    throw std::invalid_argument("pre- and post-change models differ in size");
  }
  if (spec.pre.mu() != spec.post.mu()) {
    throw std::invalid_argument(
        "pre- and post-change models must share base rates");
  }
  if (!(spec.kappa >= 0.0)) {
    throw std::invalid_argument("change time must be >= 0");
  }
}

}  // namespace hawkscan
