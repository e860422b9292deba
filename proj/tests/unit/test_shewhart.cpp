#include <gtest/gtest.h>

#include "hawkscan/shewhart.hpp"

using hawkscan::EventStream;
using hawkscan::ShewhartConfig;

TEST(Shewhart, EmptyStreamNeverAlarms) {
  ShewhartConfig cfg;
  cfg.upper = 3.0;
  const auto out = hawkscan::shewhart_run(EventStream{{}, 500.0}, cfg);
  EXPECT_FALSE(out.alarmed);
  EXPECT_EQ(out.trajectory.size(), 5000u);
}

TEST(Shewhart, AlarmsWhenCountExceedsUpper) {
  EventStream s;
  for (int k = 0; k < 6; ++k) s.events.push_back({10.0 + 0.25 * k, k % 2});
  s.horizon = 50.0;
  ShewhartConfig cfg;
  cfg.window = 5.0;
  cfg.grid = 0.1;
  cfg.upper = 4.0;
  const auto out = hawkscan::shewhart_run(s, cfg);
  ASSERT_TRUE(out.alarmed);
  // The fifth event lands at 11.0, the first grid time with count 5.
  EXPECT_NEAR(out.stop_time, 11.0, 1e-9);
  EXPECT_DOUBLE_EQ(out.trajectory.back().statistic, 5.0);
}

TEST(Shewhart, AlarmsWhenCountFallsBelowLower) {
  EventStream s;
  for (int k = 1; k <= 20; ++k) s.events.push_back({0.5 * k, 0});
  s.horizon = 30.0;
  ShewhartConfig cfg;
  cfg.window = 2.0;
  cfg.grid = 0.5;
  cfg.lower = 2.0;
  cfg.upper = 100.0;
  const auto out = hawkscan::shewhart_run(s, cfg);
  ASSERT_TRUE(out.alarmed);
  // Counts are below 2 in the first cells; only the window-trimmed start counts.
  EXPECT_NEAR(out.stop_time, 0.5, 1e-12);
}

TEST(Shewhart, WindowCountIsHalfOpen) {
  EventStream s{{{1.0, 0}, {3.0, 0}}, 10.0};
  ShewhartConfig cfg;
  cfg.window = 2.0;
  cfg.grid = 1.0;
  cfg.upper = 10.0;
  const auto out = hawkscan::shewhart_run(s, cfg);
  // (t - 2, t]: t=1 ->1, t=2 ->1, t=3 ->1 (event at 1 left), t=4 ->1, t=5 ->0.
  const double want[] = {1, 1, 1, 1, 0, 0};
  for (int k = 0; k < 6; ++k) {
    EXPECT_DOUBLE_EQ(out.trajectory[static_cast<std::size_t>(k)].statistic, want[k]);
  }
}

TEST(Shewhart, RejectsBadBounds) {
  ShewhartConfig cfg;
  cfg.lower = 3.0;
  cfg.upper = 3.0;
  EXPECT_THROW(hawkscan::ShewhartDetector det(cfg), std::invalid_argument);
  cfg.lower = -1.0;
  EXPECT_THROW(hawkscan::ShewhartDetector det(cfg), std::invalid_argument);
}
