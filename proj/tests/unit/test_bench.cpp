#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "hawkscan/bench.hpp"
#include "hawkscan/networks.hpp"

using hawkscan::DetectorSpec;
using hawkscan::HawkesModel;
using hawkscan::Method;

namespace {

DetectorSpec one_node_cusum(double b, double grid = 0.1) {
  DetectorSpec spec;
  spec.method = Method::kCusum;
  spec.pre = std::make_shared<HawkesModel>(hawkscan::single_node_pre());
  spec.post = std::make_shared<HawkesModel>(hawkscan::single_node_post());
  spec.grid = grid;
  spec.threshold = b;
  spec.truncation = 20.0;
  return spec;
}

}  // namespace

TEST(Bench, MethodNamesRoundTrip) {
  for (Method m : {Method::kCusum, Method::kScore, Method::kGlr, Method::kShewhart}) {
    EXPECT_EQ(hawkscan::parse_method(hawkscan::method_name(m)), m);
  }
  EXPECT_THROW(hawkscan::parse_method("page"), std::invalid_argument);
}

TEST(Bench, TinyThresholdAlarmsAtFirstGridTimes) {
  DetectorSpec spec;
  spec.method = Method::kShewhart;
  spec.pre = std::make_shared<HawkesModel>(hawkscan::network8_pre());
  spec.window = 120.0;
  spec.threshold = 1e-9;
  const auto r = hawkscan::arl_mc(spec, *spec.pre, 50, 1, 1000.0);
  EXPECT_LT(r.mean, 0.5);
  EXPECT_GE(r.mean, 0.1);
}

TEST(Bench, CusumArlGrowsExponentially) {
  const auto r2 = hawkscan::arl_mc(one_node_cusum(2.0), hawkscan::single_node_pre(), 500, 3, 1e5);
  const auto r3 = hawkscan::arl_mc(one_node_cusum(3.0), hawkscan::single_node_pre(), 500, 3, 1e5);
  const double ratio = r3.mean / r2.mean;
  EXPECT_GE(ratio, 2.0);
  EXPECT_LE(ratio, 4.0);
  EXPECT_EQ(r2.censored, 0u);
}

TEST(Bench, ResultsIndependentOfWorkerCount) {
  const auto spec = one_node_cusum(2.5);
  const auto a = hawkscan::arl_mc(spec, hawkscan::single_node_pre(), 40, 9, 1e4, 1);
  const auto b = hawkscan::arl_mc(spec, hawkscan::single_node_pre(), 40, 9, 1e4, 3);
  EXPECT_EQ(a.times, b.times);
  EXPECT_EQ(a.mean, b.mean);
  const auto e1 = hawkscan::edd_mc(spec, hawkscan::single_node_pre(),
                                   hawkscan::single_node_post(), {30.0, true}, 40, 2, 1e3, 1);
  const auto e4 = hawkscan::edd_mc(spec, hawkscan::single_node_pre(),
                                   hawkscan::single_node_post(), {30.0, true}, 40, 2, 1e3, 4);
  EXPECT_EQ(e1.stop_times, e4.stop_times);
  EXPECT_EQ(e1.kappas, e4.kappas);
}

TEST(Bench, CensoringIsFlagged) {
  const auto r = hawkscan::arl_mc(one_node_cusum(8.0), hawkscan::single_node_pre(), 20, 4, 5.0);
  EXPECT_EQ(r.censored, 20u);
  EXPECT_TRUE(r.censoring_flag);
  EXPECT_DOUBLE_EQ(r.mean, 5.0);
  for (char c : r.censored_runs) EXPECT_TRUE(c);
}

TEST(Bench, EddConditioningAccounts) {
  const auto spec = one_node_cusum(1.5);
  const auto d = hawkscan::edd_mc(spec, hawkscan::single_node_pre(),
                                  hawkscan::single_node_post(), {40.0, false}, 100, 5, 2e3);
  EXPECT_EQ(d.detected + d.false_alarms, d.reps);
  EXPECT_GT(d.false_alarms, 0u);
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t r = 0; r < d.reps; ++r) {
    if (d.stop_times[r] > d.kappas[r]) {
      sum += d.stop_times[r] - d.kappas[r];
      ++n;
    }
  }
  EXPECT_EQ(n, d.detected);
  EXPECT_NEAR(d.edd, sum / static_cast<double>(n), 1e-9);
}

TEST(Bench, UndetectableChangeIsSlow) {
  const auto spec = one_node_cusum(4.0);
  const auto real = hawkscan::edd_mc(spec, hawkscan::single_node_pre(),
                                     hawkscan::single_node_post(), {10.0, false}, 100, 6, 1e4);
  const auto none = hawkscan::edd_mc(spec, hawkscan::single_node_pre(),
                                     hawkscan::single_node_pre(), {10.0, false}, 100, 6, 1e4);
  EXPECT_GT(none.edd, 4.0 * real.edd);
}

TEST(Bench, UniformKappaStaysInCell) {
  const auto d = hawkscan::edd_mc(one_node_cusum(3.0), hawkscan::single_node_pre(),
                                  hawkscan::single_node_post(), {30.0, true}, 50, 7, 1e3);
  bool moved = false;
  for (double k : d.kappas) {
    EXPECT_GE(k, 30.0);
    EXPECT_LT(k, 30.1);
    if (k != 30.0) moved = true;
  }
  EXPECT_TRUE(moved);
}

TEST(Calibration, ThresholdIncreasesWithTarget) {
  hawkscan::CalibrationOptions opts;
  opts.low = 0.5;
  opts.step = 0.5;
  double prev = 0.0;
  for (double target : {20.0, 200.0, 2000.0}) {
    const auto c = hawkscan::calibrate_threshold(one_node_cusum(1.0, 1.0),
                                                 hawkscan::single_node_pre(), target, 60, 11, opts);
    EXPECT_TRUE(c.within_tolerance) << target;
    EXPECT_NEAR(c.arl, target, 0.1 * target);
    EXPECT_GT(c.threshold, prev);
    prev = c.threshold;
  }
}

TEST(Calibration, TargetNearGridGivesSmallThreshold) {
  hawkscan::CalibrationOptions opts;
  opts.low = 1e-3;
  opts.step = 0.05;
  const auto c = hawkscan::calibrate_threshold(one_node_cusum(1.0, 1.0),
                                               hawkscan::single_node_pre(), 3.0, 60, 2, opts);
  EXPECT_LT(c.threshold, 0.5);
}

TEST(Calibration, IntegerModeForCounts) {
  DetectorSpec spec;
  spec.method = Method::kShewhart;
  spec.pre = std::make_shared<HawkesModel>(hawkscan::single_node_pre());
  spec.window = 20.0;
  spec.grid = 0.5;
  auto opts = hawkscan::default_calibration(Method::kShewhart, 1);
  EXPECT_TRUE(opts.integer);
  const auto c = hawkscan::calibrate_threshold(spec, *spec.pre, 200.0, 60, 1, opts);
  EXPECT_EQ(c.threshold, std::round(c.threshold));
  EXPECT_GT(c.threshold, 10.0);
}
