#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hawkscan/bench.hpp"
#include "hawkscan/model.hpp"

namespace hawkscan {

// Settings shared by the eight-node experiments.
struct Network8Setup {
  double grid = 0.1;
  double truncation = 20.0;  // CUSUM kernel truncation used for Monte Carlo
  double window = 60.0;      // score and GLR
  double shewhart_window = 120.0;
  double fisher_window = 200.0;
  double fisher_burn_in = 100.0;
  std::size_t fisher_reps = 4000;
};

// Detector specifications on the eight-node network. The score spec carries
// the inverse of a Monte Carlo Fisher information estimated from `seed`.
DetectorSpec network8_cusum(const Network8Setup& s, const HawkesModel& post);
DetectorSpec network8_score(const Network8Setup& s, std::uint64_t seed,
                            unsigned workers = 0);
DetectorSpec network8_glr(const Network8Setup& s);
DetectorSpec network8_shewhart(const Network8Setup& s);

// Calibrated threshold and the resulting delay for one detector.
struct OperatingPoint {
  std::string label;
  CalibrationResult calibration;
  DelayStats delay;
};

// Calibrates spec to target_arl on `pre` data, then measures the delay for
// a change pre -> post at kappa. Both use `reps` replications.
OperatingPoint operating_point(const std::string& label, DetectorSpec spec,
                               const HawkesModel& pre, const HawkesModel& post,
                               double target_arl, const KappaPolicy& kappa,
                               std::size_t reps, std::uint64_t seed,
                               unsigned workers = 0);

// Largest |S_B - S_exact| over the grid up to the exact detector's alarm at
// `threshold` (or the horizon), for truncation widths 1/beta and 2/beta on
// one simulated eight-node stream with a change at kappa.
struct TruncationGap {
  double gap_b1 = 0.0;
  double gap_b2 = 0.0;
  double stop_time = 0.0;
};
TruncationGap truncation_gap(std::uint64_t seed, double kappa = 200.0,
                             double horizon = 400.0, double threshold = 6.319);

// Delay until each statistic first exceeds its own maximum over [0, kappa]
// on one stream of the fourteen-neuron replica.
struct NeuroDelays {
  double cusum = 0.0;
  double score = 0.0;
  double glr = 0.0;
};

struct ReproduceOptions {
  std::string experiment;
  std::uint64_t seed = 1;
  double scale = 1.0;  // multiplies replication counts
  std::string out_dir = ".";
  unsigned workers = 0;
};

// Names accepted by reproduce().
const std::vector<std::string>& experiment_names();

// Runs one experiment and writes its CSV files plus a JSON manifest into
// out_dir. Returns the paths written.
std::vector<std::string> reproduce(const ReproduceOptions& opts);

}  // namespace hawkscan
