#include "hawkscan/bench.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hawkscan/cusum.hpp"
#include "hawkscan/glr.hpp"
#include "hawkscan/parallel.hpp"
#include "hawkscan/rng.hpp"
#include "hawkscan/score.hpp"
#include "hawkscan/shewhart.hpp"

namespace hawkscan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double slack(double t) { return 1e-9 * std::max(1.0, std::abs(t)); }

void mean_and_se(const std::vector<double>& x, double& mean, double& se) {
  mean = 0.0;
  se = 0.0;
  if (x.empty()) return;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  if (x.size() < 2) return;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  se = std::sqrt(ss / static_cast<double>(x.size() - 1) /
                 static_cast<double>(x.size()));
}

// One replication run with an infinite threshold, extended on demand. It
// keeps the record values of the statistic, so the stopping time for any
// threshold b can be read off once the run has reached it.
class RecordRun {
 public:
  RecordRun(const DetectorSpec& spec, const HawkesModel& truth,
            std::uint64_t seed, double cap)
      : spec_(spec), truth_(truth), seed_(seed), cap_(cap) {
    spec_.threshold = kInf;
  }

  void extend(double b) {
    if (!det_) {
      det_ = make_detector(spec_);
      sim_ = std::make_unique<Simulator>(truth_, seed_);
    }
    const Comparison cmp = det_->comparison();
    while (!done_) {
      if (!records_.empty() && crosses(records_.back().second, b, cmp)) return;
      const double t = det_->next_time();
      if (t > cap_ + slack(cap_)) {
        done_ = true;
        return;
      }
      while (auto e = sim_->next(t)) det_->observe(*e);
      const StepResult r = det_->step();
      if (records_.empty() || r.statistic > records_.back().second) {
        records_.emplace_back(r.t, r.statistic);
      }
    }
  }

  // Stopping time for threshold b, or the cap when censored.
  std::pair<double, bool> stop_time(double b) const {
    const Comparison cmp = det_->comparison();
    for (const auto& [t, v] : records_) {
      if (crosses(v, b, cmp)) return {t, false};
    }
    return {cap_, true};
  }

 private:
  DetectorSpec spec_;
  const HawkesModel& truth_;
  std::uint64_t seed_;
  double cap_;
  std::unique_ptr<Detector> det_;
  std::unique_ptr<Simulator> sim_;
  std::vector<std::pair<double, double>> records_;
  bool done_ = false;
};

}  // namespace

std::string method_name(Method m) {
  switch (m) {
    case Method::kCusum:
      return "cusum";
    case Method::kScore:
      return "score";
    case Method::kGlr:
      return "glr";
    case Method::kShewhart:
      return "shewhart";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  if (name == "cusum") return Method::kCusum;
  if (name == "score") return Method::kScore;
  if (name == "glr") return Method::kGlr;
  if (name == "shewhart") return Method::kShewhart;
  throw std::invalid_argument("unknown method '" + name + "'");
}

std::unique_ptr<Detector> make_detector(const DetectorSpec& spec) {
  if (spec.method != Method::kShewhart && !spec.pre) {
    throw std::invalid_argument("detector needs a pre-change model");
  }
  switch (spec.method) {
    case Method::kCusum:
      if (!spec.post) {
        throw std::invalid_argument("CUSUM needs a post-change model");
      }
      return std::make_unique<CusumDetector>(
          *spec.pre, *spec.post,
          CusumConfig{spec.threshold, spec.grid, spec.truncation});
    case Method::kScore:
      return std::make_unique<ScoreDetector>(
          *spec.pre, spec.fisher_inverse,
          WindowConfig{spec.window, spec.grid, spec.threshold});
    case Method::kGlr:
      return std::make_unique<GlrDetector>(
          *spec.pre, WindowConfig{spec.window, spec.grid, spec.threshold},
          spec.em);
    case Method::kShewhart:
      return std::make_unique<ShewhartDetector>(
          ShewhartConfig{spec.window, spec.grid, spec.lower, spec.threshold});
  }
  throw std::invalid_argument("unknown method");
}

DetectionOutcome run_live(Detector& detector, Simulator& sim, double max_time) {
  DetectionOutcome out;
  const double limit = max_time + slack(max_time);
  while (detector.next_time() <= limit) {
    const double t = detector.next_time();
    while (auto e = sim.next(t)) detector.observe(*e);
    const StepResult r = detector.step();
    out.last_time = r.t;
    if (r.alarm) {
      out.alarmed = true;
      out.stop_time = r.t;
      out.tau_hat = r.tau_hat;
      break;
    }
  }
  out.events_seen = detector.events_seen();
  return out;
}

RunLengthStats arl_mc(const DetectorSpec& spec, const HawkesModel& truth,
                      std::size_t reps, std::uint64_t seed, double max_time,
                      unsigned workers) {
  if (reps == 0) throw std::invalid_argument("reps must be >= 1");
  if (!(max_time > 0.0)) throw std::invalid_argument("max_time must be > 0");
  RunLengthStats out;
  out.reps = reps;
  out.times.resize(reps);
  out.censored_runs.resize(reps);
  parallel_for(reps, workers, [&](std::size_t r) {
    auto det = make_detector(spec);
    Simulator sim(truth, derive_seed(seed, r));
    const DetectionOutcome o = run_live(*det, sim, max_time);
    out.times[r] = o.alarmed ? o.stop_time : max_time;
    out.censored_runs[r] = o.alarmed ? 0 : 1;
  });
  for (char c : out.censored_runs) out.censored += c ? 1 : 0;
  mean_and_se(out.times, out.mean, out.std_error);
  out.censoring_flag =
      static_cast<double>(out.censored) > 0.1 * static_cast<double>(reps);
  return out;
}

DelayStats edd_mc(const DetectorSpec& spec, const HawkesModel& pre,
                  const HawkesModel& post, const KappaPolicy& kappa,
                  std::size_t reps, std::uint64_t seed, double max_delay,
                  unsigned workers) {
  if (reps == 0) throw std::invalid_argument("reps must be >= 1");
  if (!(max_delay > 0.0)) throw std::invalid_argument("max_delay must be > 0");
  if (!(kappa.kappa >= 0.0)) throw std::invalid_argument("kappa must be >= 0");
  require_valid(ChangeSpec{pre, post, kappa.kappa});
  DelayStats out;
  out.reps = reps;
  out.stop_times.resize(reps);
  out.kappas.resize(reps);
  out.censored_runs.resize(reps);
  parallel_for(reps, workers, [&](std::size_t r) {
    const std::uint64_t s = derive_seed(seed, r);
    double k = kappa.kappa;
    if (kappa.uniform_in_cell) k += Philox(s, 1).uniform() * spec.grid;
    auto det = make_detector(spec);
    Simulator sim(ChangeSpec{pre, post, k}, s);
    const DetectionOutcome o = run_live(*det, sim, k + max_delay);
    out.kappas[r] = k;
    out.stop_times[r] = o.alarmed ? o.stop_time : k + max_delay;
    out.censored_runs[r] = o.alarmed ? 0 : 1;
  });
  std::vector<double> delays;
  for (std::size_t r = 0; r < reps; ++r) {
    if (out.censored_runs[r]) ++out.censored;
    if (out.stop_times[r] <= out.kappas[r]) {
      ++out.false_alarms;
    } else {
      delays.push_back(out.stop_times[r] - out.kappas[r]);
    }
  }
  out.detected = delays.size();
  mean_and_se(delays, out.edd, out.std_error);
  out.low_valid_flag = 2 * out.detected < reps;
  return out;
}

CalibrationOptions default_calibration(Method m, int dim) {
  CalibrationOptions o;
  const double d2 = static_cast<double>(dim) * dim;
  switch (m) {
    case Method::kCusum:
      o.low = 0.5;
      o.high = 20.0;
      o.step = 0.5;
      break;
    case Method::kScore:
      o.low = d2;
      o.high = 10.0 * d2;
      o.step = 0.25 * d2;
      break;
    case Method::kGlr:
      o.low = 1.0;
      o.high = 200.0;
      o.step = 2.0;
      break;
    case Method::kShewhart:
      o.low = 1.0;
      o.high = 1e6;
      o.step = 1.0;
      o.integer = true;
      break;
  }
  return o;
}

CalibrationResult calibrate_threshold(const DetectorSpec& spec,
                                      const HawkesModel& truth,
                                      double target_arl, std::size_t reps,
                                      std::uint64_t seed,
                                      const CalibrationOptions& opts) {
  if (reps == 0) throw std::invalid_argument("reps must be >= 1");
  if (!(target_arl > spec.grid)) {
    throw std::invalid_argument("target ARL must exceed the grid size");
  }
  if (!(opts.step > 0.0) || !(opts.low > 0.0 || opts.integer)) {
    throw std::invalid_argument("calibration bracket must be positive");
  }
  const double cap = opts.cap_factor * target_arl;
  std::vector<std::unique_ptr<RecordRun>> runs(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    runs[r] = std::make_unique<RecordRun>(spec, truth, derive_seed(seed, r), cap);
  }

  CalibrationResult res;
  struct Eval {
    double arl, se, censored;
  };
  auto eval = [&](double b) {
    parallel_for(reps, opts.workers, [&](std::size_t r) { runs[r]->extend(b); });
    std::vector<double> t(reps);
    std::size_t cens = 0;
    for (std::size_t r = 0; r < reps; ++r) {
      const auto [time, censored] = runs[r]->stop_time(b);
      t[r] = time;
      cens += censored ? 1 : 0;
    }
    Eval e{};
    mean_and_se(t, e.arl, e.se);
    e.censored = static_cast<double>(cens) / static_cast<double>(reps);
    res.history.emplace_back(b, e.arl);
    return e;
  };
  auto log_gap = [&](double arl) {
    return std::abs(std::log(std::max(arl, 1e-300) / target_arl));
  };
  auto within = [&](double arl) {
    return std::abs(arl / target_arl - 1.0) <= opts.rel_tol;
  };

  double b_lo = opts.integer ? std::max(0.0, std::floor(opts.low)) : opts.low;
  Eval e_lo = eval(b_lo);
  double b_hi = b_lo;
  Eval e_hi = e_lo;
  if (e_lo.arl >= target_arl) {
    // Bracket from below by halving (integers: stepping down).
    int guard = 0;
    while (e_lo.arl > target_arl && guard++ < 60) {
      b_hi = b_lo;
      e_hi = e_lo;
      if (opts.integer) {
        if (b_lo <= 0.0) break;
        b_lo -= 1.0;
      } else {
        b_lo *= 0.5;
      }
      e_lo = eval(b_lo);
    }
  } else {
    double st = opts.step;
    while (true) {
      const double next = b_hi + st;
      const Eval e = eval(next);
      if (next >= opts.high) st *= 2.0;
      if (e.arl >= target_arl) {
        b_lo = b_hi;
        e_lo = e_hi;
        b_hi = next;
        e_hi = e;
        break;
      }
      b_hi = next;
      e_hi = e;
      if (e.censored >= 1.0) {
        throw std::runtime_error(
            "calibration could not bracket the target ARL before the run cap");
      }
    }
  }

  if (!opts.integer) {
    for (int it = 0; it < opts.max_bisections; ++it) {
      if (within(e_hi.arl) || within(e_lo.arl)) break;
      if (b_hi - b_lo <= 1e-9 * std::max(1.0, b_hi)) break;
      const double mid = 0.5 * (b_lo + b_hi);
      const Eval e = eval(mid);
      if (e.arl >= target_arl) {
        b_hi = mid;
        e_hi = e;
      } else {
        b_lo = mid;
        e_lo = e;
      }
    }
  }
  const bool pick_hi = log_gap(e_hi.arl) <= log_gap(e_lo.arl);
  const double b = pick_hi ? b_hi : b_lo;
  const Eval& e = pick_hi ? e_hi : e_lo;
  res.threshold = b;
  res.arl = e.arl;
  res.std_error = e.se;
  res.censored_fraction = e.censored;
  res.censoring_flag = e.censored > 0.1;
  res.within_tolerance = within(e.arl);

  auto sorted = res.history;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 1; k < sorted.size(); ++k) {
    if (sorted[k].second + 1e-12 < sorted[k - 1].second) res.monotone = false;
  }
  return res;
}

}  // namespace hawkscan
