#include <gtest/gtest.h>

#include <cmath>

#include "hawkscan/likelihood.hpp"
#include "hawkscan/networks.hpp"
#include "hawkscan/score.hpp"
#include "hawkscan/simulator.hpp"
#include "hawkscan/window_stats.hpp"

using hawkscan::HawkesModel;
using hawkscan::Kernel;

namespace {

void check_tracker(const HawkesModel& m, double horizon, double w, std::uint64_t seed) {
  const auto s = hawkscan::simulate(m, {horizon, seed});
  hawkscan::WindowTracker tr(m, w);
  std::size_t k = 0;
  for (double t = 1.0; t <= horizon; t += 1.0) {
    while (k < s.events.size() && s.events[k].t <= t) tr.push(s.events[k++]);
    tr.advance(t);
    if (std::fmod(t, 17.0) != 0.0) continue;
    const double a = std::max(0.0, t - w);
    const Eigen::VectorXd u = hawkscan::score_vector(m, s.events, a, t);
    EXPECT_LT((tr.score() - u).cwiseAbs().maxCoeff(), 1e-8 * std::max(1.0, u.norm()));
    const double ll = hawkscan::log_likelihood(m, s.events, a, t);
    EXPECT_NEAR(tr.null_log_likelihood(), ll, 1e-8 * std::max(1.0, std::abs(ll)));
  }
}

}  // namespace

TEST(WindowTracker, MatchesDirectEvaluationExponential) {
  check_tracker(hawkscan::network8_pre(), 400.0, 60.0, 1);
}

TEST(WindowTracker, MatchesDirectEvaluationTruncated) {
  check_tracker(hawkscan::network8_pre().with_truncation(3.0), 300.0, 40.0, 2);
}

TEST(WindowTracker, MatchesDirectEvaluationTabulated) {
  const Kernel tri = Kernel::tabulated({0.0, 1.0, 2.0}, {0.0, 1.0, 0.0});
  Eigen::MatrixXd a(2, 2);
  a << 0.2, 0.3, 0.1, 0.3;
  check_tracker(HawkesModel(Eigen::Vector2d(0.5, 0.4), a, tri), 300.0, 25.0, 3);
}

TEST(CumulativeTracker, SumsCumulativeKernel) {
  const Kernel k = Kernel::exponential(0.8);
  hawkscan::CumulativeTracker tr(k, 2);
  const std::vector<hawkscan::Event> ev{{0.5, 0}, {1.0, 1}, {2.5, 0}};
  for (const auto& e : ev) tr.push(e);
  const Eigen::VectorXd v = tr.value(4.0);
  EXPECT_NEAR(v(0), k.cumulative(3.5) + k.cumulative(1.5), 1e-14);
  EXPECT_NEAR(v(1), k.cumulative(3.0), 1e-14);
}
