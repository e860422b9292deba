#include <gtest/gtest.h>

#include <cmath>

#include "hawkscan/cusum.hpp"
#include "hawkscan/likelihood.hpp"
#include "hawkscan/networks.hpp"
#include "hawkscan/simulator.hpp"
#include "oracles.hpp"

using hawkscan::CusumConfig;
using hawkscan::Event;
using hawkscan::EventStream;
using hawkscan::HawkesModel;
using hawkscan::Kernel;

namespace {

HawkesModel one_node(double mu, double alpha, double beta = 1.0) {
  return HawkesModel(Eigen::VectorXd::Constant(1, mu),
                     Eigen::MatrixXd::Constant(1, 1, alpha),
                     Kernel::exponential(beta));
}

// max over tau in {0} U {t_k < t} of llr_at, earliest tau on ties.
std::pair<double, double> brute_force(const HawkesModel& pre,
                                      const HawkesModel& post,
                                      const std::vector<Event>& ev, double t) {
  double best = hawkscan::llr_at(pre, post, ev, 0.0, t);
  double arg = 0.0;
  for (const auto& e : ev) {
    if (e.t >= t) break;
    const double v = hawkscan::llr_at(pre, post, ev, e.t, t);
    if (v > best) {
      best = v;
      arg = e.t;
    }
  }
  return {best, arg};
}

void expect_matches_brute_force(const HawkesModel& pre, const HawkesModel& post,
                                const EventStream& s, double grid,
                                double tol = 1e-9) {
  CusumConfig cfg;
  cfg.threshold = 1e300;
  cfg.grid = grid;
  const auto out = hawkscan::cusum_run(pre, post, s, cfg);
  ASSERT_FALSE(out.trajectory.empty());
  for (std::size_t n = 0; n < out.trajectory.size(); n += 7) {
    const auto& r = out.trajectory[n];
    const auto [best, arg] = brute_force(pre, post, s.events, r.t);
    ASSERT_NEAR(r.statistic, best, tol * std::max(1.0, std::abs(best))) << "t=" << r.t;
    if (best > 1e-9) {
      EXPECT_DOUBLE_EQ(r.tau_hat, arg) << "t=" << r.t;
    }
  }
}

}  // namespace

TEST(LlrAt, TrivialCases) {
  const HawkesModel pre = one_node(0.5, 0.0);
  const HawkesModel post = one_node(0.5, 0.5);
  const std::vector<Event> ev{{1.0, 0}, {2.0, 0}};
  EXPECT_EQ(hawkscan::llr_at(pre, post, ev, 3.0, 3.0), 0.0);
  EXPECT_NEAR(hawkscan::llr_at(post, post, ev, 0.7, 3.0), 0.0, 1e-14);
  EXPECT_THROW(hawkscan::llr_at(pre, post, ev, 4.0, 3.0), std::invalid_argument);
  EXPECT_THROW(hawkscan::llr_at(pre, one_node(0.6, 0.5), ev, 1.0, 3.0),
               std::invalid_argument);
}

TEST(LlrAt, MatchesQuadratureOracle) {
  const std::vector<double> t{1.0, 2.0};
  const std::vector<Event> ev{{1.0, 0}, {2.0, 0}};
  const double got =
      hawkscan::llr_at(one_node(0.5, 0.0), one_node(0.5, 0.5), ev, 0.5, 3.0);
  const double post = oracle::loglik_1d_quadrature(0.5, 0.5, 1.0, t, 0.5, 3.0, 1e-4, 0.5);
  const double pre = oracle::loglik_1d_quadrature(0.5, 0.0, 1.0, t, 0.5, 3.0);
  EXPECT_NEAR(got, post - pre, 1e-8);
}

TEST(LlrStep, ChainsToDirectValue) {
  Eigen::MatrixXd a0(2, 2), a1(2, 2);
  a0 << 0.2, 0.1, 0.0, 0.3;
  a1 << 0.2, 0.5, 0.3, 0.3;
  const HawkesModel pre(Eigen::Vector2d(0.6, 0.4), a0, Kernel::exponential(1.5));
  const HawkesModel post(Eigen::Vector2d(0.6, 0.4), a1, Kernel::exponential(1.5));
  const auto s = hawkscan::simulate(pre, {40.0, 12});
  const double tau = s.events[5].t;
  ASSERT_LT(tau, 12.0);
  double ell = 0.0;
  double t = tau;
  for (double next = 12.0; next <= 40.0; next += 3.7) {
    ell = hawkscan::llr_step(pre, post, s.events, tau, t, next, ell);
    t = next;
    EXPECT_NEAR(ell, hawkscan::llr_at(pre, post, s.events, tau, t), 1e-10);
  }
}

TEST(LlrStep, NoEventsAndEqualModelsLeaveValue) {
  const HawkesModel m = one_node(0.5, 0.3);
  const std::vector<Event> ev{{1.0, 0}};
  EXPECT_NEAR(hawkscan::llr_step(m, m, ev, 0.5, 2.0, 2.1, 1.25), 1.25, 1e-15);
}

TEST(LlrStep, SingleEventByHand) {
  // tau = 0.5, step (1.5, 2.5] contains the event at 2.0.
  const HawkesModel pre = one_node(0.5, 0.0);
  const HawkesModel post = one_node(0.5, 0.5);
  const std::vector<Event> ev{{1.0, 0}, {2.0, 0}};
  const double lam_post = 0.5 + 0.5 * std::exp(-1.0);
  // Both events after tau add post-change mass over the step.
  const double comp = 0.5 * ((std::exp(-0.5) - std::exp(-1.5)) +
                             (1.0 - std::exp(-0.5)));
  const double want = std::log(lam_post / 0.5) - comp;
  EXPECT_NEAR(hawkscan::llr_step(pre, post, ev, 0.5, 1.5, 2.5, 0.0), want, 1e-14);
}

TEST(Cusum, DenseScanNeverBeatsEventCandidates) {
  const HawkesModel pre = one_node(0.5, 0.1);
  const HawkesModel post = one_node(0.5, 0.6);
  const auto s = hawkscan::simulate_with_change({pre, post, 5.0}, {15.0, 3});
  const double t = 15.0;
  const double best = brute_force(pre, post, s.events, t).first;
  for (double tau = 0.0; tau < t; tau += 1e-2) {
    EXPECT_LE(hawkscan::llr_at(pre, post, s.events, tau, t), best + 1e-9);
  }
}

TEST(Cusum, MatchesBruteForceOneNode) {
  const HawkesModel pre = one_node(0.5, 0.0);
  const HawkesModel post = one_node(0.5, 0.5);
  const auto s = hawkscan::simulate_with_change({pre, post, 20.0}, {60.0, 1});
  expect_matches_brute_force(pre, post, s, 0.1);
}

TEST(Cusum, MatchesBruteForceNetworkCoarseGrid) {
  const HawkesModel pre = hawkscan::network8_pre();
  const HawkesModel post = hawkscan::network8_post();
  const auto s = hawkscan::simulate_with_change({pre, post, 15.0}, {30.0, 2});
  expect_matches_brute_force(pre, post, s, 1.3);
}

TEST(Cusum, MatchesBruteForceTabulatedKernel) {
  const Kernel tri = Kernel::tabulated({0.0, 1.0, 2.0}, {0.0, 1.0, 0.0});
  const HawkesModel pre(Eigen::VectorXd::Constant(1, 0.5),
                        Eigen::MatrixXd::Constant(1, 1, 0.1), tri);
  const HawkesModel post(Eigen::VectorXd::Constant(1, 0.5),
                         Eigen::MatrixXd::Constant(1, 1, 0.6), tri);
  const auto s = hawkscan::simulate_with_change({pre, post, 10.0}, {40.0, 9});
  expect_matches_brute_force(pre, post, s, 0.5);
}

TEST(LlrAt, EqualModelsDifferOnlyThroughForgottenHistory) {
  // lambda_tau drops events before tau, so equal models give 0 only when
  // no event precedes tau.
  const HawkesModel m = hawkscan::network8_pre();
  const auto s = hawkscan::simulate(m, {50.0, 4});
  EXPECT_NEAR(hawkscan::llr_at(m, m, s.events, 0.0, 50.0), 0.0, 1e-12);
  EXPECT_NEAR(hawkscan::llr_at(m, m, s.events, s.events.front().t * 0.5, 50.0),
              0.0, 1e-12);
  EXPECT_NE(hawkscan::llr_at(m, m, s.events, 25.0, 50.0), 0.0);
}

TEST(Cusum, EqualModelsStayQuiet) {
  const HawkesModel m = hawkscan::network8_pre();
  CusumConfig cfg;
  cfg.threshold = 3.0;
  const auto out = hawkscan::cusum_run(m, m, hawkscan::simulate(m, {100.0, 4}), cfg);
  EXPECT_FALSE(out.alarmed);
  for (const auto& r : out.trajectory) EXPECT_GE(r.statistic, 0.0);
}

TEST(Cusum, OneNodeEqualPoissonModelsGiveZero) {
  const HawkesModel m = one_node(0.5, 0.0);
  CusumConfig cfg;
  cfg.threshold = 1e-6;
  const auto out = hawkscan::cusum_run(m, m, hawkscan::simulate(m, {50.0, 4}), cfg);
  EXPECT_FALSE(out.alarmed);
  for (const auto& r : out.trajectory) EXPECT_NEAR(r.statistic, 0.0, 1e-12);
}

TEST(Cusum, StatisticIsNonnegativeAndStopsAboveThreshold) {
  const HawkesModel pre = one_node(0.5, 0.0);
  const HawkesModel post = one_node(0.5, 0.5);
  const auto s = hawkscan::simulate_with_change({pre, post, 50.0}, {400.0, 6});
  CusumConfig cfg;
  cfg.threshold = 5.0;
  const auto out = hawkscan::cusum_run(pre, post, s, cfg);
  ASSERT_TRUE(out.alarmed);
  for (std::size_t k = 0; k + 1 < out.trajectory.size(); ++k) {
    EXPECT_GE(out.trajectory[k].statistic, 0.0);
    EXPECT_LE(out.trajectory[k].statistic, 5.0);
  }
  EXPECT_GT(out.trajectory.back().statistic, 5.0);
  EXPECT_DOUBLE_EQ(out.stop_time, out.trajectory.back().t);
  EXPECT_NEAR(std::fmod(out.stop_time + 1e-9, 0.1), 0.0, 1e-6);
  EXPECT_LE(out.tau_hat, out.stop_time);
}

TEST(Cusum, TruncationAtHorizonEqualsExact) {
  const HawkesModel pre = hawkscan::network8_pre();
  const HawkesModel post = hawkscan::network8_post();
  const auto s = hawkscan::simulate_with_change({pre, post, 40.0}, {80.0, 7});
  CusumConfig cfg;
  cfg.threshold = 1e300;
  const auto exact = hawkscan::cusum_run(pre, post, s, cfg);
  cfg.truncation = 80.0;
  const auto trunc = hawkscan::cusum_truncated_run(pre, post, s, cfg);
  ASSERT_EQ(exact.trajectory.size(), trunc.trajectory.size());
  for (std::size_t k = 0; k < exact.trajectory.size(); ++k) {
    EXPECT_NEAR(exact.trajectory[k].statistic, trunc.trajectory[k].statistic, 1e-9);
  }
}

TEST(Cusum, TruncatedMatchesBruteForceOnTruncatedModels) {
  // With truncated kernels in the models themselves the detector is exact.
  const HawkesModel pre = hawkscan::network8_pre().with_truncation(2.0);
  const HawkesModel post = hawkscan::network8_post().with_truncation(2.0);
  const auto s = hawkscan::simulate_with_change({pre, post, 15.0}, {30.0, 5});
  CusumConfig cfg;
  cfg.threshold = 1e300;
  cfg.grid = 0.7;
  cfg.truncation = 2.0;
  const auto out = hawkscan::cusum_truncated_run(pre, post, s, cfg);
  for (const auto& r : out.trajectory) {
    EXPECT_NEAR(r.statistic, brute_force(pre, post, s.events, r.t).first, 1e-9);
  }
}

TEST(Cusum, SlopeAfterChangeExceedsMeanFieldKl) {
  // The mean-field KL is a lower bound on the post-change drift.
  const HawkesModel pre = one_node(0.5, 0.0);
  const HawkesModel post = one_node(0.5, 0.5);
  const double kl = hawkscan::kl_mean_field(pre, post);
  const auto s = hawkscan::simulate_with_change({pre, post, 200.0}, {3200.0, 10});
  CusumConfig cfg;
  cfg.threshold = 1e300;
  cfg.truncation = 30.0;
  const auto out = hawkscan::cusum_truncated_run(pre, post, s, cfg);
  const auto at = [&](double t) {
    return out.trajectory[static_cast<std::size_t>(std::lround(t / 0.1)) - 1].statistic;
  };
  EXPECT_LT(at(200.0), 10.0);
  const double slope = (at(3200.0) - at(1200.0)) / 2000.0;
  EXPECT_GT(slope, kl);
  EXPECT_LT(slope, 2.0 * kl);
}

TEST(Cusum, RejectsBadConfig) {
  const HawkesModel m = one_node(0.5, 0.3);
  CusumConfig cfg;
  cfg.threshold = 0.0;
  EXPECT_THROW(hawkscan::CusumDetector(m, m, cfg), std::invalid_argument);
  cfg.threshold = 1.0;
  cfg.grid = 0.0;
  EXPECT_THROW(hawkscan::CusumDetector(m, m, cfg), std::invalid_argument);
  cfg.grid = 0.5;
  cfg.truncation = 0.1;
  EXPECT_THROW(hawkscan::CusumDetector(m, m, cfg), std::invalid_argument);
  cfg.truncation.reset();
  EXPECT_THROW(hawkscan::cusum_truncated_run(m, m, EventStream{{}, 1.0}, cfg),
               std::invalid_argument);
}

TEST(Cusum, RejectsLateEvents) {
  const HawkesModel m = one_node(0.5, 0.3);
  CusumConfig cfg;
  cfg.threshold = 1.0;
  hawkscan::CusumDetector det(m, m, cfg);
  det.step();
  EXPECT_THROW(det.observe({0.05, 0}), std::invalid_argument);
  det.observe({0.15, 0});
  EXPECT_THROW(det.observe({0.12, 0}), std::invalid_argument);
}
