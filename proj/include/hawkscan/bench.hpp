#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hawkscan/detector.hpp"
#include "hawkscan/em.hpp"
#include "hawkscan/model.hpp"
#include "hawkscan/simulator.hpp"

namespace hawkscan {

enum class Method { kCusum, kScore, kGlr, kShewhart };

std::string method_name(Method m);
Method parse_method(const std::string& name);

// Everything needed to build a fresh detector for one replication.
struct DetectorSpec {
  Method method = Method::kCusum;
  std::shared_ptr<const HawkesModel> pre;
  std::shared_ptr<const HawkesModel> post;  // CUSUM only
  double grid = 0.1;
  double threshold = 0.0;
  std::optional<double> truncation;  // CUSUM only
  double window = 60.0;              // score, GLR, Shewhart
  Eigen::MatrixXd fisher_inverse;    // score only
  double lower = 0.0;                // Shewhart b1
  EmConfig em;                       // GLR only
};

std::unique_ptr<Detector> make_detector(const DetectorSpec& spec);

// Drives a detector from a live simulator until it alarms or the next grid
// time would pass max_time. The trajectory is not recorded.
DetectionOutcome run_live(Detector& detector, Simulator& sim, double max_time);

struct RunLengthStats {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t reps = 0;
  std::size_t censored = 0;
  bool censoring_flag = false;  // more than 10% of runs censored
  std::vector<double> times;    // per replication (cap when censored)
  std::vector<char> censored_runs;
};

// Average run length under the given (no-change) model. Runs are capped at
// max_time; censored runs count as max_time, which biases the mean down.
RunLengthStats arl_mc(const DetectorSpec& spec, const HawkesModel& truth,
                      std::size_t reps, std::uint64_t seed, double max_time,
                      unsigned workers = 0);

struct KappaPolicy {
  double kappa = 0.0;
  // Add a uniform offset in [0, grid) so that the change falls uniformly
  // inside a grid cell.
  bool uniform_in_cell = false;
};

struct DelayStats {
  double edd = 0.0;
  double std_error = 0.0;
  std::size_t reps = 0;
  std::size_t detected = 0;      // runs with T > kappa
  std::size_t false_alarms = 0;  // runs with T <= kappa
  std::size_t censored = 0;      // runs with no alarm by the cap
  bool low_valid_flag = false;   // fewer than half the runs have T > kappa
  std::vector<double> stop_times;
  std::vector<double> kappas;
  std::vector<char> censored_runs;
};

// Detection delay E[T - kappa | T > kappa] with the change simulated at
// kappa. Each run is capped at kappa + max_delay; censored runs count as
// max_delay.
DelayStats edd_mc(const DetectorSpec& spec, const HawkesModel& pre,
                  const HawkesModel& post, const KappaPolicy& kappa,
                  std::size_t reps, std::uint64_t seed, double max_delay,
                  unsigned workers = 0);

struct CalibrationOptions {
  double low = 0.5;    // bracket start
  double high = 20.0;  // nominal bracket end (exceeded if needed)
  double step = 0.5;   // upward step while bracketing
  double rel_tol = 0.1;
  int max_bisections = 40;
  double cap_factor = 100.0;  // run cap = cap_factor * target
  bool integer = false;       // thresholds restricted to integers
  unsigned workers = 0;
};

struct CalibrationResult {
  double threshold = 0.0;
  double arl = 0.0;
  double std_error = 0.0;
  double censored_fraction = 0.0;
  bool censoring_flag = false;
  bool within_tolerance = false;
  bool monotone = true;  // ARL estimates never decreased as b grew
  std::vector<std::pair<double, double>> history;  // (b, ARL) evaluations
};

// Threshold whose Monte Carlo ARL is within rel_tol of target. All
// thresholds are evaluated on the same replications (common random
// numbers): each replication runs once with an infinite threshold and keeps
// the record values of the statistic, from which T(b) is read off for any b.
// Starting at `low`, b is increased by `step` until the ARL reaches the
// target (the step doubles once b passes `high`), then bisected. Integer mode picks the
// integer with ARL closest to the target in log scale.
CalibrationResult calibrate_threshold(const DetectorSpec& spec,
                                      const HawkesModel& truth,
                                      double target_arl, std::size_t reps,
                                      std::uint64_t seed,
                                      const CalibrationOptions& opts = {});

// Default bracket per method (D is the network size).
CalibrationOptions default_calibration(Method m, int dim);

}  // namespace hawkscan
