#pragma once

#include <optional>
#include <string>
#include <vector>

namespace hawkscan {

// Normalized triggering kernel phi with cumulative Phi, optionally truncated
// at width B (phi(t) = 0 for t > B).
//
// Two families are supported: the exponential kernel beta * exp(-beta t), and
// a tabulated kernel given by samples (t_k, phi(t_k)) on a grid starting at 0.
// Tabulated kernels interpolate phi linearly between samples and vanish past
// the last grid point, so Phi is the exact integral of the interpolant.
class Kernel {
 public:
  enum class Family { kExponential, kTabulated };

  static Kernel exponential(double beta,
                            std::optional<double> truncation = std::nullopt);
  static Kernel tabulated(std::vector<double> grid, std::vector<double> values,
                          std::optional<double> truncation = std::nullopt);

  Family family() const { return family_; }
  bool is_exponential() const { return family_ == Family::kExponential; }
  bool is_truncated() const { return truncation_.has_value(); }

  // Exponential rate; only meaningful for the exponential family.
  double beta() const { return beta_; }
  std::optional<double> truncation() const { return truncation_; }
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }

  // Same kernel with a different truncation width.
  Kernel with_truncation(std::optional<double> width) const;

  // phi~(t): zero for t < 0 and for t > B.
  double density(double t) const;
  // Phi~(t) = Phi(min(t, B)), zero for t < 0.
  double cumulative(double t) const;
  // Total mass of the (possibly truncated) kernel.
  double mass() const { return cumulative(support()); }
  // Smallest T with phi~(t) = 0 for all t > T; infinity for an untruncated
  // exponential kernel.
  double support() const;
  // sup_{x >= t} phi~(x). Used as a dominating envelope by the simulator.
  double tail_sup(double t) const;

  // Trapezoid integral of the untruncated tabulated kernel (1 for the
  // exponential family).
  double untruncated_mass() const;

  bool operator==(const Kernel& other) const;

 private:
  Kernel() = default;

  double tab_density(double t) const;
  double tab_cumulative(double t) const;

  Family family_ = Family::kExponential;
  double beta_ = 1.0;
  std::optional<double> truncation_;
  std::vector<double> grid_;
  std::vector<double> values_;
  std::vector<double> cum_;  // cumulative trapezoid sums at grid nodes
};

// Phi~(t) for the given kernel.
inline double cumulative_kernel(const Kernel& kernel, double t) {
  return kernel.cumulative(t);
}

// Describes every invariant the kernel violates; empty when valid.
std::vector<std::string> validate_kernel(const Kernel& kernel);

}  // namespace hawkscan
