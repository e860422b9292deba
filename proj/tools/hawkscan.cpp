#include <cstdio>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hawkscan/bench.hpp"
#include "hawkscan/cusum.hpp"
#include "hawkscan/em.hpp"
#include "hawkscan/experiments.hpp"
#include "hawkscan/fisher.hpp"
#include "hawkscan/glr.hpp"
#include "hawkscan/io.hpp"
#include "hawkscan/score.hpp"
#include "hawkscan/shewhart.hpp"
#include "hawkscan/simulator.hpp"

using namespace hawkscan;
using nlohmann::json;

namespace {

constexpr int kExitAlarm = 2;

struct DetectorFlags {
  std::string method = "cusum";
  std::string pre;
  std::string post;
  double b = 0.0;
  double gamma = 0.1;
  std::optional<double> truncation;
  double window = -1.0;
  std::string fisher;
  double ridge = 0.0;
  double b1 = 0.0;
  double b2 = -1.0;
};

void add_detector_flags(CLI::App* cmd, DetectorFlags& f, bool need_b) {
  cmd->add_option("--method", f.method, "cusum | score | glr | shewhart")
      ->check(CLI::IsMember({"cusum", "score", "glr", "shewhart"}));
  cmd->add_option("--pre", f.pre, "pre-change model file (JSON)");
  cmd->add_option("--post", f.post, "post-change model file (CUSUM)");
  auto* b = cmd->add_option("--b", f.b, "threshold");
  if (need_b) b->required(false);
  cmd->add_option("--gamma", f.gamma, "grid size")->capture_default_str();
  cmd->add_option("--truncation", f.truncation, "CUSUM kernel truncation width");
  cmd->add_option("--window", f.window,
                  "window length (default 60; 120 for shewhart)");
  cmd->add_option("--fisher", f.fisher, "Fisher information matrix CSV (score)");
  cmd->add_option("--ridge", f.ridge, "ridge added to the Fisher matrix");
  cmd->add_option("--b1", f.b1, "Shewhart lower count bound");
  cmd->add_option("--b2", f.b2, "Shewhart upper count bound (defaults to --b)");
}

DetectorSpec build_spec(const DetectorFlags& f) {
  DetectorSpec spec;
  spec.method = parse_method(f.method);
  spec.grid = f.gamma;
  spec.threshold = f.b;
  spec.truncation = f.truncation;
  spec.window = f.window > 0.0
                    ? f.window
                    : (spec.method == Method::kShewhart ? 120.0 : 60.0);
  if (spec.method != Method::kShewhart || !f.pre.empty()) {
    if (f.pre.empty()) throw std::invalid_argument("--pre is required");
    spec.pre = std::make_shared<const HawkesModel>(load_model(f.pre));
  }
  if (spec.method == Method::kCusum) {
    if (f.post.empty()) throw std::invalid_argument("--post is required for cusum");
    spec.post = std::make_shared<const HawkesModel>(load_model(f.post));
  }
  if (spec.method == Method::kScore) {
    if (f.fisher.empty()) {
      throw std::invalid_argument("--fisher is required for score (see 'fisher')");
    }
    spec.fisher_inverse = regularized_inverse(read_matrix_csv(f.fisher), f.ridge);
  }
  if (spec.method == Method::kShewhart) {
    spec.lower = f.b1;
    if (f.b2 >= 0.0) spec.threshold = f.b2;
  }
  return spec;
}

json outcome_json(const DetectionOutcome& o) {
  json j;
  j["alarmed"] = o.alarmed;
  j["stop_time"] = o.alarmed ? json(o.stop_time) : json(nullptr);
  j["tau_hat"] = std::isnan(o.tau_hat) ? json(nullptr) : json(o.tau_hat);
  j["events_seen"] = o.events_seen;
  j["last_time"] = o.last_time;
  return j;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Change-point detection for Hawkes networks"};
  app.set_config("--config", "", "read options from a TOML/INI file");
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "simulate an event stream");
  std::string sim_model, sim_post, sim_out;
  double sim_horizon = 0.0;
  std::optional<double> sim_kappa;
  std::uint64_t sim_seed = 1;
  std::size_t sim_max = SimConfig{}.max_events;
  sim->add_option("--model,--pre", sim_model, "model file")->required();
  sim->add_option("--post", sim_post, "post-change model file");
  sim->add_option("--kappa", sim_kappa, "change time (with --post)");
  sim->add_option("--horizon", sim_horizon, "simulation horizon")->required();
  sim->add_option("--seed", sim_seed, "random seed")->capture_default_str();
  sim->add_option("--max-events", sim_max, "event cap")->capture_default_str();
  sim->add_option("--out", sim_out, "events CSV")->required();

  // detect
  auto* det = app.add_subcommand("detect", "run a detector over an events file");
  DetectorFlags det_flags;
  std::string det_events, det_traj;
  add_detector_flags(det, det_flags, true);
  det->add_option("--events", det_events, "events CSV")->required();
  det->add_option("--emit-trajectory", det_traj, "trajectory CSV (t,S,tau_hat)");

  // calibrate
  auto* cal = app.add_subcommand("calibrate", "find the threshold for a target ARL");
  DetectorFlags cal_flags;
  double cal_target = 500.0;
  std::size_t cal_reps = 200;
  std::uint64_t cal_seed = 1;
  unsigned cal_workers = 0;
  add_detector_flags(cal, cal_flags, false);
  cal->add_option("--target-arl", cal_target)->capture_default_str();
  cal->add_option("--reps", cal_reps)->capture_default_str();
  cal->add_option("--seed", cal_seed)->capture_default_str();
  cal->add_option("--workers", cal_workers, "0 = all cores");

  // bench
  auto* bench = app.add_subcommand("bench", "Monte Carlo ARL or EDD at a threshold");
  DetectorFlags bench_flags;
  std::string bench_mode = "arl", bench_true_post;
  std::size_t bench_reps = 200;
  std::uint64_t bench_seed = 1;
  double bench_max_time = 0.0, bench_kappa = -1.0;
  bool bench_uniform = false;
  unsigned bench_workers = 0;
  std::string bench_records;
  add_detector_flags(bench, bench_flags, true);
  bench->add_option("--mode", bench_mode)->check(CLI::IsMember({"arl", "edd"}));
  bench->add_option("--true-post", bench_true_post,
                    "post-change law to simulate (edd; defaults to --post)");
  bench->add_option("--kappa", bench_kappa, "change time (edd; default w + 10 gamma)");
  bench->add_flag("--kappa-uniform", bench_uniform,
                  "draw the change uniformly inside a grid cell");
  bench->add_option("--reps", bench_reps)->capture_default_str();
  bench->add_option("--seed", bench_seed)->capture_default_str();
  bench->add_option("--max-time", bench_max_time,
                    "run cap (arl) or delay cap (edd)")->required();
  bench->add_option("--workers", bench_workers);
  bench->add_option("--records", bench_records, "per-replication CSV");

  // estimate
  auto* est = app.add_subcommand("estimate", "EM estimate of a model on a window");
  std::string est_events, est_window, est_out, est_mu;
  double est_beta = 1.0, est_tol = 1e-4;
  int est_d = 0, est_max_iter = 10000;
  bool est_fit_mu = false;
  est->add_option("--events", est_events)->required();
  est->add_option("--window", est_window, "a,b")->required();
  est->add_option("--kernel-beta", est_beta)->required();
  est->add_option("--d", est_d, "network size (default: largest node + 1)");
  est->add_option("--mu", est_mu, "fixed base rates, comma separated");
  est->add_flag("--fit-mu", est_fit_mu, "estimate base rates as well");
  est->add_option("--tol", est_tol)->capture_default_str();
  est->add_option("--max-iter", est_max_iter)->capture_default_str();
  est->add_option("--out", est_out, "model file")->required();

  // fisher
  auto* fis = app.add_subcommand("fisher", "Monte Carlo Fisher information");
  std::string fis_model, fis_out;
  double fis_window = 200.0, fis_burn = 100.0;
  std::size_t fis_reps = 4000;
  std::uint64_t fis_seed = 1;
  unsigned fis_workers = 0;
  fis->add_option("--model", fis_model)->required();
  fis->add_option("--window", fis_window)->capture_default_str();
  fis->add_option("--burn-in", fis_burn)->capture_default_str();
  fis->add_option("--reps", fis_reps)->capture_default_str();
  fis->add_option("--seed", fis_seed)->capture_default_str();
  fis->add_option("--workers", fis_workers);
  fis->add_option("--out", fis_out, "matrix CSV")->required();

  // reproduce
  auto* rep = app.add_subcommand("reproduce", "run an experiment driver");
  ReproduceOptions rep_opts;
  rep->add_option("--experiment", rep_opts.experiment)
      ->required()
      ->check(CLI::IsMember(experiment_names()));
  rep->add_option("--seed", rep_opts.seed)->capture_default_str();
  rep->add_option("--scale", rep_opts.scale)->capture_default_str();
  rep->add_option("--out-dir", rep_opts.out_dir)->capture_default_str();
  rep->add_option("--workers", rep_opts.workers);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*sim) {
      const HawkesModel pre = load_model(sim_model);
      EventStream s;
      if (!sim_post.empty()) {
        if (!sim_kappa) throw std::invalid_argument("--post needs --kappa");
        s = simulate_with_change({pre, load_model(sim_post), *sim_kappa},
                                 {sim_horizon, sim_seed, sim_max});
      } else {
        s = simulate(pre, {sim_horizon, sim_seed, sim_max});
      }
      write_events(s, sim_out);
      std::cout << json{{"events", s.events.size()}, {"horizon", sim_horizon}}.dump()
                << "\n";
      return 0;
    }
    if (*det) {
      std::vector<std::string> warnings;
      const EventStream s = parse_events(det_events, &warnings);
      for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
      const DetectorSpec spec = build_spec(det_flags);
      if (spec.pre) validate_stream(s, spec.pre->dim());
      auto d = make_detector(spec);
      const DetectionOutcome o = run_detector(*d, s.events, s.horizon);
      if (!det_traj.empty()) write_trajectory(o, det_traj);
      std::cout << outcome_json(o).dump() << "\n";
      return o.alarmed ? kExitAlarm : 0;
    }
    if (*cal) {
      const DetectorSpec spec = build_spec(cal_flags);
      CalibrationOptions o = default_calibration(
          spec.method, spec.pre ? spec.pre->dim() : 1);
      o.workers = cal_workers;
      if (!spec.pre) throw std::invalid_argument("--pre is required");
      const CalibrationResult r =
          calibrate_threshold(spec, *spec.pre, cal_target, cal_reps, cal_seed, o);
      json j{{"threshold", r.threshold},   {"arl", r.arl},
             {"arl_se", r.std_error},      {"within_tolerance", r.within_tolerance},
             {"censored_fraction", r.censored_fraction},
             {"censoring_flag", r.censoring_flag},
             {"monotone", r.monotone}};
      std::cout << j.dump() << "\n";
      if (r.censoring_flag) std::cerr << "warning: more than 10% of runs censored\n";
      return 0;
    }
    if (*bench) {
      const DetectorSpec spec = build_spec(bench_flags);
      if (!spec.pre) throw std::invalid_argument("--pre is required");
      json j;
      std::string records = "rep,stop_time,kappa,censored\n";
      char buf[128];
      if (bench_mode == "arl") {
        const RunLengthStats r = arl_mc(spec, *spec.pre, bench_reps, bench_seed,
                                        bench_max_time, bench_workers);
        j = {{"arl", r.mean}, {"arl_se", r.std_error}, {"reps", r.reps},
             {"censored", r.censored}, {"censoring_flag", r.censoring_flag}};
        for (std::size_t k = 0; k < r.reps; ++k) {
          std::snprintf(buf, sizeof buf, "%zu,%.17g,,%d\n", k, r.times[k],
                        static_cast<int>(r.censored_runs[k]));
          records += buf;
        }
        if (r.censoring_flag) std::cerr << "warning: more than 10% of runs censored\n";
      } else {
        const std::string post_path =
            bench_true_post.empty() ? bench_flags.post : bench_true_post;
        if (post_path.empty()) throw std::invalid_argument("edd needs --true-post");
        const HawkesModel truth = load_model(post_path);
        const double kappa =
            bench_kappa >= 0.0 ? bench_kappa : spec.window + 10.0 * spec.grid;
        const DelayStats r =
            edd_mc(spec, *spec.pre, truth, {kappa, bench_uniform}, bench_reps,
                   bench_seed, bench_max_time, bench_workers);
        j = {{"edd", r.edd},           {"edd_se", r.std_error},
             {"reps", r.reps},         {"detected", r.detected},
             {"false_alarms", r.false_alarms}, {"censored", r.censored},
             {"low_valid_flag", r.low_valid_flag}};
        for (std::size_t k = 0; k < r.reps; ++k) {
          std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%d\n", k,
                        r.stop_times[k], r.kappas[k],
                        static_cast<int>(r.censored_runs[k]));
          records += buf;
        }
        if (r.low_valid_flag) {
          std::cerr << "warning: fewer than half the runs alarmed after kappa\n";
        }
      }
      if (!bench_records.empty()) write_text_file(bench_records, records);
      std::cout << j.dump() << "\n";
      return 0;
    }
    if (*est) {
      std::vector<std::string> warnings;
      const EventStream s = parse_events(est_events, &warnings);
      for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
      const auto win = parse_list(est_window);
      if (win.size() != 2) throw std::invalid_argument("--window expects a,b");
      int d = est_d;
      if (d <= 0) {
        for (const Event& e : s.events) d = std::max(d, e.u + 1);
      }
      if (d <= 0) throw std::invalid_argument("cannot infer d from an empty file");
      Eigen::VectorXd mu;
      if (!est_mu.empty()) {
        const auto v = parse_list(est_mu);
        if (static_cast<int>(v.size()) != d) {
          throw std::invalid_argument("--mu must list d rates");
        }
        mu = Eigen::Map<const Eigen::VectorXd>(v.data(), d);
      } else if (est_fit_mu) {
        mu = Eigen::VectorXd::Zero(d);
        for (const Event& e : s.events) {
          if (e.t > win[0] && e.t <= win[1]) mu(e.u) += 1.0;
        }
        mu = (mu / (win[1] - win[0])).cwiseMax(1e-6);
      } else {
        throw std::invalid_argument("give --mu or --fit-mu");
      }
      EmConfig cfg;
      cfg.tol = est_tol;
      cfg.max_iter = est_max_iter;
      cfg.fit_mu = est_fit_mu;
      const Kernel k = Kernel::exponential(est_beta);
      const EmResult r = em_mle(s.events, win[0], win[1], k, mu, cfg);
      save_model(HawkesModel(r.mu, r.a, k), est_out);
      std::cout << json{{"iterations", r.iterations},
                        {"converged", r.converged},
                        {"log_likelihood", r.log_likelihood}}
                       .dump()
                << "\n";
      if (!r.converged) std::cerr << "warning: EM hit max_iter without converging\n";
      return 0;
    }
    if (*fis) {
      const HawkesModel m = load_model(fis_model);
      write_matrix_csv(fisher_info_mc(m, fis_window + fis_burn, fis_window,
                                      fis_reps, fis_seed, fis_workers),
                       fis_out);
      return 0;
    }
    if (*rep) {
      for (const auto& f : reproduce(rep_opts)) std::cout << f << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
