#include <gtest/gtest.h>

#include <cmath>

#include "hawkscan/glr.hpp"
#include "hawkscan/likelihood.hpp"
#include "hawkscan/networks.hpp"
#include "hawkscan/rng.hpp"
#include "hawkscan/simulator.hpp"

using hawkscan::EmConfig;
using hawkscan::Event;
using hawkscan::HawkesModel;
using hawkscan::Kernel;
using hawkscan::WindowConfig;

namespace {

HawkesModel two_node(double a00, double a01, double a10, double a11) {
  Eigen::MatrixXd a(2, 2);
  a << a00, a01, a10, a11;
  return HawkesModel(Eigen::Vector2d(0.5, 0.6), a, Kernel::exponential(1.0));
}

}  // namespace

TEST(GlrWindow, EmptyWindowGivesBoundaryEstimate) {
  const HawkesModel pre = two_node(0.3, 0.1, 0.1, 0.3);
  const std::vector<Event> ev{{1.0, 0}, {1.5, 1}, {2.0, 0}};
  const double a = 3.0, b = 10.0;
  const auto r = hawkscan::glr_window(pre, ev, a, b);
  EXPECT_EQ(r.a_hat.maxCoeff(), 0.0);
  double excess = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (const auto& e : ev) {
      excess += pre.alpha(i, e.u) * (std::exp(-(a - e.t)) - std::exp(-(b - e.t)));
    }
  }
  EXPECT_NEAR(r.statistic, excess, 1e-10);
  EXPECT_GT(r.statistic, 0.0);
}

TEST(GlrWindow, RecoversPostChangeInfluence) {
  const HawkesModel post = two_node(0.2, 0.5, 0.0, 0.3);
  const auto s = hawkscan::simulate(post, {4000.0, 31});
  EmConfig em;
  em.tol = 1e-8;
  const auto r = hawkscan::glr_window(two_node(0.1, 0.1, 0.1, 0.1), s.events, 0.0, 4000.0, em);
  EXPECT_TRUE(r.converged);
  EXPECT_LT((r.a_hat - post.influence()).cwiseAbs().maxCoeff(), 0.1);
}

TEST(GlrWindow, NonnegativeWithoutPreWindowHistory) {
  const HawkesModel pre = two_node(0.3, 0.1, 0.1, 0.3);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto s = hawkscan::simulate(pre, {60.0, seed});
    EmConfig em;
    em.init = pre.influence();
    const auto r = hawkscan::glr_window(pre, s.events, 0.0, 60.0, em);
    EXPECT_GE(r.statistic, -em.tol);
  }
}

TEST(GlrWindow, PostChangeWindowsScoreHigher) {
  const HawkesModel pre = two_node(0.3, 0.0, 0.0, 0.3);
  const HawkesModel post = two_node(0.3, 0.4, 0.4, 0.3);
  const double w = 500.0;
  double pre_sum = 0.0;
  int below = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto s0 = hawkscan::simulate(pre, {w + 50.0, seed});
    const auto s1 = hawkscan::simulate_with_change({pre, post, 50.0}, {w + 50.0, seed});
    const double g0 = hawkscan::glr_window(pre, s0.events, 50.0, w + 50.0).statistic / w;
    const double g1 = hawkscan::glr_window(pre, s1.events, 50.0, w + 50.0).statistic / w;
    pre_sum += g0;
    if (g0 < g1) ++below;
  }
  EXPECT_EQ(below, 10);
  EXPECT_GT(pre_sum / 10.0, -0.01);
  EXPECT_LT(pre_sum / 10.0, 0.05);
}

TEST(GlrDetector, TracksColdWindowFits) {
  const HawkesModel pre = two_node(0.3, 0.1, 0.1, 0.3);
  const auto s = hawkscan::simulate(pre, {80.0, 2});
  WindowConfig cfg;
  cfg.window = 30.0;
  cfg.grid = 5.0;
  cfg.threshold = 1e300;
  EmConfig em;
  em.tol = 1e-10;
  em.max_iter = 100000;
  const auto out = hawkscan::glr_run(pre, s, cfg, em);
  ASSERT_EQ(out.trajectory.size(), 16u);
  for (const auto& r : out.trajectory) {
    const double a = std::max(0.0, r.t - 30.0);
    const auto cold = hawkscan::glr_window(pre, s.events, a, r.t, em);
    EXPECT_NEAR(r.statistic, cold.statistic, 1e-3) << r.t;
  }
}

TEST(GlrDetector, HugeThresholdNeverAlarmsAndCountsIterations) {
  const HawkesModel m = hawkscan::network8_pre();
  WindowConfig cfg;
  cfg.threshold = 1e9;
  hawkscan::GlrDetector det(m, cfg);
  const auto s = hawkscan::simulate(m, {30.0, 1});
  const auto out = hawkscan::run_detector(det, s.events, 30.0);
  EXPECT_FALSE(out.alarmed);
  EXPECT_EQ(det.windows(), 300);
  EXPECT_GT(det.mean_iterations(), 0.0);
  EXPECT_TRUE((det.a_hat().array() >= 0.0).all());
}
