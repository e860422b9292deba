#include "hawkscan/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace hawkscan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_truncation(std::optional<double> truncation) {
  if (truncation && !(*truncation > 0.0 && std::isfinite(*truncation))) {
    throw std::invalid_argument("kernel truncation width must be positive");
  }
}

}  // namespace

Kernel Kernel::exponential(double beta, std::optional<double> truncation) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("exponential kernel rate must be positive");
  }
  check_truncation(truncation);
  Kernel k;
  k.family_ = Family::kExponential;
  k.beta_ = beta;
  k.truncation_ = truncation;
  return k;
}

Kernel Kernel::tabulated(std::vector<double> grid, std::vector<double> values,
                         std::optional<double> truncation) {
  if (grid.size() != values.size() || grid.size() < 2) {
    throw std::invalid_argument(
        "tabulated kernel needs at least two (t, phi) samples");
  }
  if (grid.front() != 0.0) {
    throw std::invalid_argument("tabulated kernel grid must start at t = 0");
  }
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (!(grid[k] > grid[k - 1])) {
      throw std::invalid_argument("tabulated kernel grid must be increasing");
    }
  }
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("tabulated kernel values must be >= 0");
    }
  }
  check_truncation(truncation);
  Kernel k;
  k.family_ = Family::kTabulated;
  k.truncation_ = truncation;
  k.grid_ = std::move(grid);
  k.values_ = std::move(values);
  k.cum_.assign(k.grid_.size(), 0.0);
  for (std::size_t i = 1; i < k.grid_.size(); ++i) {
    k.cum_[i] = k.cum_[i - 1] + 0.5 * (k.grid_[i] - k.grid_[i - 1]) *
                                    (k.values_[i] + k.values_[i - 1]);
  }
  return k;
}

Kernel Kernel::with_truncation(std::optional<double> width) const {
  check_truncation(width);
  Kernel k = *this;
  k.truncation_ = width;
  return k;
}

double Kernel::tab_density(double t) const {
  if (t < 0.0 || t > grid_.back()) return 0.0;
  auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
  if (it == grid_.end()) return values_.back();
  const auto hi = static_cast<std::size_t>(it - grid_.begin());
  const auto lo = hi - 1;
  const double w = (t - grid_[lo]) / (grid_[hi] - grid_[lo]);
  return values_[lo] + w * (values_[hi] - values_[lo]);
}

double Kernel::tab_cumulative(double t) const {
  if (t <= 0.0) return 0.0;
  if (t >= grid_.back()) return cum_.back();
  auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
  const auto hi = static_cast<std::size_t>(it - grid_.begin());
  const auto lo = hi - 1;
  const double w = (t - grid_[lo]) / (grid_[hi] - grid_[lo]);
  const double at_t = values_[lo] + w * (values_[hi] - values_[lo]);
  return cum_[lo] + 0.5 * (t - grid_[lo]) * (values_[lo] + at_t);
}

double Kernel::density(double t) const {
  if (t < 0.0) return 0.0;
  if (truncation_ && t > *truncation_) return 0.0;
  if (family_ == Family::kExponential) return beta_ * std::exp(-beta_ * t);
  return tab_density(t);
}

double Kernel::cumulative(double t) const {
  if (t <= 0.0) return 0.0;
  if (truncation_) t = std::min(t, *truncation_);
  if (family_ == Family::kExponential) return -std::expm1(-beta_ * t);
  return tab_cumulative(t);
}

double Kernel::support() const {
  double s = family_ == Family::kExponential ? kInf : grid_.back();
  if (truncation_) s = std::min(s, *truncation_);
  return s;
}

double Kernel::tail_sup(double t) const {
  t = std::max(t, 0.0);
  const double end = support();
  if (t > end) return 0.0;
  if (family_ == Family::kExponential) return beta_ * std::exp(-beta_ * t);
  double best = std::max(tab_density(t), tab_density(end));
  for (std::size_t k = 0; k < grid_.size(); ++k) {
    if (grid_[k] > t && grid_[k] <= end) best = std::max(best, values_[k]);
  }
  return best;
}

double Kernel::untruncated_mass() const {
  return family_ == Family::kExponential ? 1.0 : cum_.back();
}

bool Kernel::operator==(const Kernel& other) const {
  return family_ == other.family_ && beta_ == other.beta_ &&
         truncation_ == other.truncation_ && grid_ == other.grid_ &&
         values_ == other.values_;
}

std::vector<std::string> validate_kernel(const Kernel& kernel) {
  std::vector<std::string> issues;
  if (kernel.family() == Kernel::Family::kTabulated) {
    const double mass = kernel.untruncated_mass();
    if (std::abs(mass - 1.0) > 1e-6) {
      std::ostringstream os;
      os.precision(10);
      os << "kernel not normalized (integral " << mass << ")";
      issues.push_back(os.str());
    }
  }
  return issues;
}

}  // namespace hawkscan
