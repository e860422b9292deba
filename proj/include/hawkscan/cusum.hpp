#pragma once

#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "hawkscan/detector.hpp"
#include "hawkscan/model.hpp"

namespace hawkscan {

// Log-likelihood ratio of "change at tau" against "no change" up to t,
// evaluated directly:
//
//   sum_i int_tau^t log(lambda_{i,tau} / lambda_{i,inf}) dN_i
//     - sum_i int_tau^t (lambda_{i,tau} - lambda_{i,inf}) ds
//
// lambda_{i,tau} uses the post-change influence and only events after tau;
// lambda_{i,inf} uses the pre-change influence and the whole history.
double llr_at(const HawkesModel& pre, const HawkesModel& post,
              std::span<const Event> events, double tau, double t);

// One step of the cumulative-kernel recursion: given ell = ell_{t_from, tau}
// return ell_{t_to, tau}. Requires tau <= t_from <= t_to.
double llr_step(const HawkesModel& pre, const HawkesModel& post,
                std::span<const Event> events, double tau, double t_from,
                double t_to, double ell);

struct CusumConfig {
  double threshold = 0.0;
  double grid = 0.1;
  // Kernel truncation width B; unset runs the exact detector.
  std::optional<double> truncation;
};

// CUSUM detector for Hawkes networks.
//
// Candidate change times are 0 and t_k+ for every observed event (the
// supremum over a continuum of tau is attained there). At each grid time all
// candidates are advanced together: one backward pass over the retained
// events yields every candidate's post-change intensity as a suffix sum, and
// the compensator correction is likewise a suffix sum of cumulative-kernel
// increments. New candidates in the last cell start from ell = 0 at their own
// tau, which reproduces the direct evaluation.
//
// With truncation width B, events older than B no longer influence any
// intensity; candidates older than (n - 1) gamma - B all receive the same
// increment from then on and are collapsed into one running best (earliest
// on ties). Memory is then O(events in the last B time units). Without
// truncation every candidate is kept.
class CusumDetector final : public Detector {
 public:
  CusumDetector(const HawkesModel& pre, const HawkesModel& post,
                const CusumConfig& cfg);

  void observe(const Event& e) override;
  StepResult step() override;
  double next_time() const override {
    return static_cast<double>(n_ + 1) * cfg_.grid;
  }
  Comparison comparison() const override { return Comparison::kGreater; }
  std::size_t events_seen() const override { return events_seen_; }

  // Number of candidates currently held (excluding the root candidate).
  std::size_t candidates() const { return window_.size(); }

 private:
  struct Candidate {
    double tau;
    int u;
    double ell;
  };

  void absorb(const Event& e);
  double pre_weight(int i, int j, double x) const;
  double post_weight(int i, int j, double x) const;
  double pre_mass(int j, double from, double to) const;
  double post_mass(int j, double from, double to) const;

  HawkesModel pre_;
  HawkesModel post_;
  CusumConfig cfg_;
  double width_;  // truncation width, infinity when exact
  bool same_kernel_;

  Eigen::VectorXd pre_colsum_;
  Eigen::VectorXd post_colsum_;

  Candidate root_{0.0, -1, 0.0};
  std::deque<Candidate> window_;
  std::deque<Event> pending_;
  std::int64_t n_ = 0;
  double last_seen_ = 0.0;
  std::size_t events_seen_ = 0;

  std::vector<double> scratch_;
};

// Exact run (no truncation) over a recorded stream.
DetectionOutcome cusum_run(const HawkesModel& pre, const HawkesModel& post,
                           const EventStream& stream, const CusumConfig& cfg,
                           double max_time = std::numeric_limits<double>::infinity());
// Memory-efficient run; cfg.truncation must be set and >= grid.
DetectionOutcome cusum_truncated_run(
    const HawkesModel& pre, const HawkesModel& post, const EventStream& stream,
    const CusumConfig& cfg,
    double max_time = std::numeric_limits<double>::infinity());

}  // namespace hawkscan
