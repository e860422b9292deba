#include "hawkscan/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "hawkscan/cusum.hpp"
#include "hawkscan/fisher.hpp"
#include "hawkscan/glr.hpp"
#include "hawkscan/io.hpp"
#include "hawkscan/likelihood.hpp"
#include "hawkscan/networks.hpp"
#include "hawkscan/parallel.hpp"
#include "hawkscan/rng.hpp"
#include "hawkscan/score.hpp"
#include "hawkscan/simulator.hpp"

#ifndef HAWKSCAN_VERSION
#define HAWKSCAN_VERSION "unknown"
#endif

namespace hawkscan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t scaled(double base, double scale) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(base * scale)));
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

class Csv {
 public:
  explicit Csv(const std::string& header) { text_ = header + "\n"; }
  template <typename... T>
  void row(const T&... cells) {
    std::string line;
    ((line += (line.empty() ? "" : ",") + cell(cells)), ...);
    text_ += line + "\n";
  }
  const std::string& text() const { return text_; }

 private:
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }
  static std::string cell(double v) { return num(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(long long v) { return std::to_string(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(bool v) { return v ? "1" : "0"; }

  std::string text_;
};

class Output {
 public:
  Output(const ReproduceOptions& opts) : opts_(opts) {
    std::filesystem::create_directories(opts.out_dir);
  }
  void write(const std::string& name, const std::string& text) {
    const std::string path =
        (std::filesystem::path(opts_.out_dir) / name).string();
    write_text_file(path, text);
    files_.push_back(path);
  }
  void trajectory(const std::string& name, const DetectionOutcome& o) {
    const std::string path =
        (std::filesystem::path(opts_.out_dir) / name).string();
    write_trajectory(o, path);
    files_.push_back(path);
  }
  std::vector<std::string> finish(nlohmann::json config) {
    nlohmann::json m;
    m["experiment"] = opts_.experiment;
    m["seed"] = opts_.seed;
    m["scale"] = opts_.scale;
    m["version"] = HAWKSCAN_VERSION;
    m["config"] = config;
    char hash[20];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(fnv1a(config.dump())));
    m["config_hash"] = hash;
    nlohmann::json files = nlohmann::json::array();
    for (const auto& f : files_) {
      files.push_back(std::filesystem::path(f).filename().string());
    }
    m["files"] = files;
    write(opts_.experiment + "_manifest.json", m.dump(2) + "\n");
    return files_;
  }

 private:
  ReproduceOptions opts_;
  std::vector<std::string> files_;
};

std::shared_ptr<const HawkesModel> share(const HawkesModel& m) {
  return std::make_shared<const HawkesModel>(m);
}

double max_statistic(const DetectionOutcome& o, double until) {
  double best = -kInf;
  for (const auto& r : o.trajectory) {
    if (r.t > until) break;
    best = std::max(best, r.statistic);
  }
  return best;
}

double first_exceed_after(const DetectionOutcome& o, double kappa,
                          double level) {
  for (const auto& r : o.trajectory) {
    if (r.t > kappa && r.statistic > level) return r.t - kappa;
  }
  return kInf;
}

void operating_rows(Csv& csv, const OperatingPoint& p, double target) {
  csv.row(p.label, target, p.calibration.threshold, p.calibration.arl,
          p.calibration.std_error, p.calibration.censored_fraction,
          p.calibration.within_tolerance, p.delay.edd, p.delay.std_error,
          p.delay.detected, p.delay.false_alarms, p.delay.censored);
}

const char* kOperatingHeader =
    "detector,target_arl,threshold,arl,arl_se,censored_fraction,"
    "arl_within_tol,edd,edd_se,detected,false_alarms,censored";

// ---------------------------------------------------------------------------

std::vector<std::string> run_fig2(const ReproduceOptions& opts) {
  Output out(opts);
  const HawkesModel pre = network8_pre();
  const HawkesModel post = network8_post();
  const double kappa = 200.0;
  const double horizon = 400.0;
  const EventStream s = simulate_with_change({pre, post, kappa}, {horizon, opts.seed});
  const CusumConfig exact{kInf, 0.1, std::nullopt};
  out.trajectory("fig2_exact.csv", cusum_run(pre, post, s, exact));
  for (const auto& [name, b] : {std::pair<const char*, double>{"fig2_B1.csv", 1.0},
                                {"fig2_B2.csv", 2.0}}) {
    out.trajectory(name, cusum_truncated_run(pre, post, s, {kInf, 0.1, b}));
  }

  const std::size_t seeds = scaled(10, opts.scale);
  std::vector<TruncationGap> gaps(seeds);
  parallel_for(seeds, opts.workers, [&](std::size_t r) {
    gaps[r] = truncation_gap(derive_seed(opts.seed, r), kappa, horizon);
  });
  Csv csv("seed_index,stop_time,gap_B1,gap_B2");
  for (std::size_t r = 0; r < seeds; ++r) {
    csv.row(r, gaps[r].stop_time, gaps[r].gap_b1, gaps[r].gap_b2);
  }
  out.write("fig2_gaps.csv", csv.text());
  return out.finish({{"kappa", kappa}, {"horizon", horizon}, {"grid", 0.1},
                     {"beta", 1.0}, {"gap_seeds", seeds}, {"threshold", 6.319}});
}

std::vector<std::string> run_fig3(const ReproduceOptions& opts) {
  Output out(opts);
  const Network8Setup setup;
  const HawkesModel pre = network8_pre();
  const HawkesModel post = network8_post();
  const double kappa = 200.0;
  const double horizon = 400.0;
  const EventStream s =
      simulate_with_change({pre, post, kappa}, {horizon, opts.seed});

  Network8Setup fs = setup;
  fs.fisher_reps = scaled(static_cast<double>(setup.fisher_reps), opts.scale);
  DetectorSpec cusum = network8_cusum(setup, post);
  DetectorSpec score = network8_score(fs, derive_seed(opts.seed, 1u << 20), opts.workers);
  DetectorSpec glr = network8_glr(setup);
  for (auto* spec : {&cusum, &score, &glr}) spec->threshold = kInf;
  const char* names[] = {"fig3_cusum.csv", "fig3_score.csv", "fig3_glr.csv"};
  int k = 0;
  for (auto* spec : {&cusum, &score, &glr}) {
    auto det = make_detector(*spec);
    out.trajectory(names[k++], run_detector(*det, s.events, horizon));
  }
  return out.finish({{"kappa", kappa}, {"horizon", horizon}, {"grid", setup.grid},
                     {"window", setup.window}, {"truncation", setup.truncation},
                     {"fisher_reps", fs.fisher_reps}});
}

std::vector<std::string> run_fig4(const ReproduceOptions& opts) {
  Output out(opts);
  const Network8Setup setup;
  const HawkesModel pre = network8_pre();
  const HawkesModel post = network8_post();
  const std::size_t reps = scaled(200, opts.scale);
  const std::vector<double> targets = {200.0, 500.0};
  const KappaPolicy kappa{setup.shewhart_window + 10.0 * setup.grid, false};

  std::vector<std::pair<std::string, DetectorSpec>> specs = {
      {"cusum", network8_cusum(setup, post)},
      {"score", network8_score(setup, derive_seed(opts.seed, 1u << 20), opts.workers)},
      {"glr", network8_glr(setup)},
      {"shewhart", network8_shewhart(setup)}};
  Csv csv(kOperatingHeader);
  for (double target : targets) {
    for (const auto& [label, spec] : specs) {
      const OperatingPoint p = operating_point(label, spec, pre, post, target,
                                               kappa, reps, opts.seed, opts.workers);
      operating_rows(csv, p, target);
    }
  }
  out.write("fig4_arl_edd.csv", csv.text());
  return out.finish({{"reps", reps}, {"targets", targets}, {"kappa", kappa.kappa},
                     {"grid", setup.grid}, {"window", setup.window},
                     {"shewhart_window", setup.shewhart_window},
                     {"truncation", setup.truncation}});
}

std::vector<std::string> run_fig5(const ReproduceOptions& opts) {
  Output out(opts);
  const Network8Setup setup;
  const HawkesModel pre = network8_pre();
  const HawkesModel post = network8_post();
  const std::size_t reps = scaled(200, opts.scale);
  const double target = 500.0;
  const KappaPolicy kappa{setup.window + 10.0 * setup.grid, false};

  std::vector<std::pair<std::string, DetectorSpec>> specs;
  specs.emplace_back("cusum-exact", network8_cusum(setup, post));
  for (const auto& [name, m] : network8_misspecified()) {
    specs.emplace_back("cusum-" + name, network8_cusum(setup, m));
  }
  specs.emplace_back("score", network8_score(setup, derive_seed(opts.seed, 1u << 20),
                                             opts.workers));
  specs.emplace_back("glr", network8_glr(setup));
  Csv csv(kOperatingHeader);
  for (const auto& [label, spec] : specs) {
    operating_rows(csv,
                   operating_point(label, spec, pre, post, target, kappa, reps,
                                   opts.seed, opts.workers),
                   target);
  }
  out.write("fig5_misspec.csv", csv.text());
  return out.finish({{"reps", reps}, {"target", target}, {"kappa", kappa.kappa},
                     {"grid", setup.grid}, {"window", setup.window}});
}

std::vector<std::string> run_fig6(const ReproduceOptions& opts) {
  Output out(opts);
  const HawkesModel pre = network8_pre();
  const HawkesModel post = network8_post();
  const std::size_t reps = scaled(200, opts.scale);
  const double target = 500.0;
  const std::vector<double> grids = {0.1, 1.0, 10.0, 50.0};

  Network8Setup base;
  const DetectorSpec score0 =
      network8_score(base, derive_seed(opts.seed, 1u << 20), opts.workers);

  auto spec_for = [&](const std::string& method, double grid) {
    Network8Setup s = base;
    s.grid = grid;
    s.truncation = std::max(base.truncation, grid);
    DetectorSpec spec;
    if (method == "cusum") spec = network8_cusum(s, post);
    if (method == "glr") spec = network8_glr(s);
    if (method == "score") {
      spec = score0;
      spec.grid = grid;
    }
    return spec;
  };

  Csv fixed("detector,grid,threshold,arl,arl_se,censored");
  Csv tuned(kOperatingHeader + std::string(",grid"));
  Csv iters("grid,windows,mean_iterations");
  for (const std::string method : {"cusum", "score", "glr"}) {
    // Thresholds fixed at the values calibrated for the finest grid.
    const DetectorSpec fine = spec_for(method, grids.front());
    const CalibrationResult cal =
        calibrate_threshold(fine, pre, target, reps, opts.seed,
                            [&] {
                              auto o = default_calibration(fine.method, pre.dim());
                              o.workers = opts.workers;
                              return o;
                            }());
    for (double g : grids) {
      DetectorSpec spec = spec_for(method, g);
      spec.threshold = cal.threshold;
      const RunLengthStats arl =
          arl_mc(spec, pre, reps, opts.seed, 100.0 * target, opts.workers);
      fixed.row(method, g, cal.threshold, arl.mean, arl.std_error, arl.censored);

      const double k0 = g * std::ceil((base.window + 10.0 * base.grid) / g);
      const OperatingPoint p =
          operating_point(method, spec_for(method, g), pre, post, target,
                          {k0, true}, reps, opts.seed, opts.workers);
      tuned.row(p.label, target, p.calibration.threshold, p.calibration.arl,
                p.calibration.std_error, p.calibration.censored_fraction,
                p.calibration.within_tolerance, p.delay.edd, p.delay.std_error,
                p.delay.detected, p.delay.false_alarms, p.delay.censored, g);
    }
  }
  const double horizon = 200.0 * opts.scale + 100.0;
  for (double g : grids) {
    GlrDetector det(pre, {base.window, g, kInf});
    const EventStream s = simulate(pre, {horizon, opts.seed});
    run_detector(det, s.events, horizon, false);
    iters.row(g, static_cast<long long>(det.windows()), det.mean_iterations());
  }
  out.write("fig6_fixed_threshold_arl.csv", fixed.text());
  out.write("fig6_recalibrated_edd.csv", tuned.text());
  out.write("fig6_glr_iterations.csv", iters.text());
  return out.finish({{"reps", reps}, {"target", target}, {"grids", grids},
                     {"window", base.window}, {"iteration_horizon", horizon}});
}

std::vector<std::string> run_sec7(const ReproduceOptions& opts) {
  Output out(opts);
  const HawkesModel pre = neuro14_pre();
  const HawkesModel post = neuro14_post();
  const double window = 1000.0;
  const double grid = 5.0;
  const double kappa = 20000.0;
  const double horizon = 30000.0;
  const double truncation = 20.0 / pre.common_kernel().beta();
  const std::size_t fisher_reps = scaled(1000, opts.scale);
  const std::size_t streams = scaled(5, opts.scale);

  const Eigen::MatrixXd fisher = fisher_info_mc(
      pre, window + 500.0, window, fisher_reps, derive_seed(opts.seed, 1u << 20),
      opts.workers);
  const Eigen::MatrixXd fisher_inv = regularized_inverse(fisher, 1.0);

  std::vector<NeuroDelays> delays(streams);
  std::vector<DetectionOutcome> first(3);
  parallel_for(streams, opts.workers, [&](std::size_t r) {
    const EventStream s = simulate_with_change(
        {pre, post, kappa}, {horizon, derive_seed(opts.seed, r)});
    CusumDetector c(pre, post, {kInf, grid, truncation});
    ScoreDetector sc(pre, fisher_inv, {window, grid, kInf});
    GlrDetector gl(pre, {window, grid, kInf});
    const DetectionOutcome oc = run_detector(c, s.events, horizon);
    const DetectionOutcome os = run_detector(sc, s.events, horizon);
    const DetectionOutcome og = run_detector(gl, s.events, horizon);
    delays[r] = {first_exceed_after(oc, kappa, max_statistic(oc, kappa)),
                 first_exceed_after(os, kappa, max_statistic(os, kappa)),
                 first_exceed_after(og, kappa, max_statistic(og, kappa))};
    if (r == 0) first = {oc, os, og};
  });
  out.trajectory("sec7_cusum.csv", first[0]);
  out.trajectory("sec7_score.csv", first[1]);
  out.trajectory("sec7_glr.csv", first[2]);
  Csv csv("stream,cusum_delay,score_delay,glr_delay");
  for (std::size_t r = 0; r < streams; ++r) {
    csv.row(r, delays[r].cusum, delays[r].score, delays[r].glr);
  }
  out.write("sec7_delays.csv", csv.text());
  return out.finish({{"window", window}, {"grid", grid}, {"kappa", kappa},
                     {"horizon", horizon}, {"truncation", truncation},
                     {"fisher_reps", fisher_reps}, {"ridge", 1.0},
                     {"streams", streams}});
}

}  // namespace

DetectorSpec network8_cusum(const Network8Setup& s, const HawkesModel& post) {
  DetectorSpec spec;
  spec.method = Method::kCusum;
  spec.pre = share(network8_pre());
  spec.post = share(post);
  spec.grid = s.grid;
  spec.truncation = s.truncation;
  return spec;
}

DetectorSpec network8_score(const Network8Setup& s, std::uint64_t seed,
                            unsigned workers) {
  DetectorSpec spec;
  spec.method = Method::kScore;
  spec.pre = share(network8_pre());
  spec.grid = s.grid;
  spec.window = s.window;
  const Eigen::MatrixXd fisher =
      fisher_info_mc(*spec.pre, s.fisher_window + s.fisher_burn_in,
                     s.fisher_window, s.fisher_reps, seed, workers);
  spec.fisher_inverse = regularized_inverse(fisher, 0.0);
  return spec;
}

DetectorSpec network8_glr(const Network8Setup& s) {
  DetectorSpec spec;
  spec.method = Method::kGlr;
  spec.pre = share(network8_pre());
  spec.grid = s.grid;
  spec.window = s.window;
  return spec;
}

DetectorSpec network8_shewhart(const Network8Setup& s) {
  DetectorSpec spec;
  spec.method = Method::kShewhart;
  spec.pre = share(network8_pre());
  spec.grid = s.grid;
  spec.window = s.shewhart_window;
  spec.lower = 0.0;
  return spec;
}

OperatingPoint operating_point(const std::string& label, DetectorSpec spec,
                               const HawkesModel& pre, const HawkesModel& post,
                               double target_arl, const KappaPolicy& kappa,
                               std::size_t reps, std::uint64_t seed,
                               unsigned workers) {
  OperatingPoint p;
  p.label = label;
  CalibrationOptions o = default_calibration(spec.method, pre.dim());
  o.workers = workers;
  p.calibration = calibrate_threshold(spec, pre, target_arl, reps, seed, o);
  spec.threshold = p.calibration.threshold;
  p.delay = edd_mc(spec, pre, post, kappa, reps, derive_seed(seed, 1u << 21),
                   10.0 * target_arl, workers);
  return p;
}

TruncationGap truncation_gap(std::uint64_t seed, double kappa, double horizon,
                             double threshold) {
  const HawkesModel pre = network8_pre();
  const HawkesModel post = network8_post();
  const EventStream s = simulate_with_change({pre, post, kappa}, {horizon, seed});
  const DetectionOutcome exact = cusum_run(pre, post, s, {threshold, 0.1, std::nullopt});
  TruncationGap g;
  g.stop_time = exact.last_time;
  const double beta = pre.common_kernel().beta();
  for (int k = 1; k <= 2; ++k) {
    const DetectionOutcome tr = cusum_truncated_run(
        pre, post, s, {kInf, 0.1, k / beta}, exact.last_time);
    double gap = 0.0;
    const std::size_t n = std::min(tr.trajectory.size(), exact.trajectory.size());
    for (std::size_t i = 0; i < n; ++i) {
      gap = std::max(gap, std::abs(tr.trajectory[i].statistic -
                                   exact.trajectory[i].statistic));
    }
    (k == 1 ? g.gap_b1 : g.gap_b2) = gap;
  }
  return g;
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {
      "fig2-truncation", "fig3-trajectories", "fig4-arl-edd",
      "fig5-misspec",    "fig6-gridsize",     "sec7-neuro-replica"};
  return names;
}

std::vector<std::string> reproduce(const ReproduceOptions& opts) {
  if (!(opts.scale > 0.0)) throw std::invalid_argument("scale must be > 0");
  if (opts.experiment == "fig2-truncation") return run_fig2(opts);
  if (opts.experiment == "fig3-trajectories") return run_fig3(opts);
  if (opts.experiment == "fig4-arl-edd") return run_fig4(opts);
  if (opts.experiment == "fig5-misspec") return run_fig5(opts);
  if (opts.experiment == "fig6-gridsize") return run_fig6(opts);
  if (opts.experiment == "sec7-neuro-replica") return run_sec7(opts);
  throw std::invalid_argument("unknown experiment '" + opts.experiment + "'");
}

}  // namespace hawkscan
