#include <gtest/gtest.h>

#include <cmath>

#include "hawkscan/likelihood.hpp"
#include "hawkscan/model.hpp"
#include "oracles.hpp"

using hawkscan::Event;
using hawkscan::HawkesModel;
using hawkscan::Kernel;

namespace {

HawkesModel one_node(double mu, double alpha, double beta = 1.0) {
  return HawkesModel(Eigen::VectorXd::Constant(1, mu),
                     Eigen::MatrixXd::Constant(1, 1, alpha),
                     Kernel::exponential(beta));
}

bool mentions(const std::vector<std::string>& issues, const std::string& s) {
  for (const auto& i : issues) {
    if (i.find(s) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST(Intensity, EmptyHistoryGivesBaseRate) {
  const HawkesModel m = one_node(0.7, 0.3);
  EXPECT_DOUBLE_EQ(hawkscan::conditional_intensity(m, {}, 0, 4.0), 0.7);
}

TEST(Intensity, HandExamples) {
  const HawkesModel m = one_node(0.5, 0.4);
  const std::vector<Event> ev{{1.0, 0}, {2.0, 0}};
  const double full = hawkscan::conditional_intensity(m, ev, 0, 3.0, 0.0);
  EXPECT_NEAR(full, 0.5 + 0.4 * (std::exp(-2.0) + std::exp(-1.0)), 1e-14);
  EXPECT_NEAR(full, 0.70129, 5e-6);
  const double late = hawkscan::conditional_intensity(m, ev, 0, 3.0, 1.5);
  EXPECT_NEAR(late, 0.64715, 5e-6);
}

TEST(Intensity, EventAtEvaluationTimeIsExcluded) {
  const HawkesModel m = one_node(0.5, 0.4);
  const std::vector<Event> ev{{1.0, 0}, {2.0, 0}};
  EXPECT_NEAR(hawkscan::conditional_intensity(m, ev, 0, 2.0),
              0.5 + 0.4 * std::exp(-1.0), 1e-14);
}

TEST(Intensity, CrossExcitationUsesSourceColumn) {
  Eigen::MatrixXd a(2, 2);
  a << 0.0, 0.6, 0.1, 0.0;
  const HawkesModel m(Eigen::Vector2d(0.2, 0.3), a, Kernel::exponential(2.0));
  const std::vector<Event> ev{{1.0, 1}};
  EXPECT_NEAR(hawkscan::conditional_intensity(m, ev, 0, 1.5),
              0.2 + 0.6 * 2.0 * std::exp(-1.0), 1e-14);
  EXPECT_DOUBLE_EQ(hawkscan::conditional_intensity(m, ev, 1, 1.5), 0.3);
}

TEST(MeanField, Examples) {
  const HawkesModel poisson(Eigen::Vector2d(0.3, 0.9), Eigen::MatrixXd::Zero(2, 2),
                            Kernel::exponential(1.0));
  EXPECT_TRUE(hawkscan::mean_field_intensity(poisson).isApprox(
      Eigen::Vector2d(0.3, 0.9)));
  EXPECT_NEAR(hawkscan::mean_field_intensity(one_node(0.5, 0.5))(0), 1.0, 1e-14);
}

TEST(MeanField, RejectsNonStationary) {
  EXPECT_THROW(hawkscan::mean_field_intensity(one_node(0.5, 1.0)),
               std::domain_error);
}

TEST(Kl, ZeroForIdenticalModels) {
  const HawkesModel m = one_node(0.5, 0.3);
  EXPECT_DOUBLE_EQ(hawkscan::kl_mean_field(m, m), 0.0);
}

TEST(Kl, OneNodeExample) {
  const double kl = hawkscan::kl_mean_field(one_node(0.5, 0.0), one_node(0.5, 0.5));
  EXPECT_NEAR(kl, std::log(2.0) - 0.5, 1e-14);
  EXPECT_NEAR(kl, 0.19315, 5e-6);
}

TEST(Kl, NonnegativeAndAsymmetric) {
  const HawkesModel a = one_node(0.5, 0.1);
  const HawkesModel b = one_node(0.5, 0.6);
  const double ab = hawkscan::kl_mean_field(a, b);
  const double ba = hawkscan::kl_mean_field(b, a);
  EXPECT_GT(ab, 0.0);
  EXPECT_GT(ba, 0.0);
  EXPECT_GT(std::abs(ab - ba), 1e-3);
}

TEST(Validate, StationaryBoundary) {
  EXPECT_TRUE(hawkscan::validate_model(one_node(0.5, 0.99)).empty());
  const auto issues = hawkscan::validate_model(one_node(0.5, 1.0));
  ASSERT_FALSE(issues.empty());
  EXPECT_TRUE(mentions(issues, "spectral radius >= 1"));
}

TEST(Validate, TwoNodeCycle) {
  Eigen::MatrixXd a(2, 2);
  a << 0.0, 0.9, 0.9, 0.0;
  const HawkesModel m(Eigen::Vector2d(1.0, 1.0), a, Kernel::exponential(1.0));
  EXPECT_NEAR(hawkscan::spectral_radius(a), 0.9, 1e-12);
  EXPECT_TRUE(hawkscan::validate_model(m).empty());
}

TEST(Validate, NegativeEntries) {
  Eigen::MatrixXd a(2, 2);
  a << 0.1, -0.2, 0.0, 0.1;
  const HawkesModel m(Eigen::Vector2d(-1.0, 1.0), a, Kernel::exponential(1.0));
  const auto issues = hawkscan::validate_model(m);
  EXPECT_TRUE(mentions(issues, "mu[0]"));
  EXPECT_TRUE(mentions(issues, "negative"));
  EXPECT_THROW(hawkscan::require_valid(m), std::invalid_argument);
}

TEST(Validate, ShapeMismatchThrows) {
  EXPECT_THROW(HawkesModel(Eigen::Vector2d(1.0, 1.0), Eigen::MatrixXd::Zero(3, 3),
                           Kernel::exponential(1.0)),
               std::invalid_argument);
}

TEST(Stream, ValidateRejectsDisorder) {
  hawkscan::EventStream s{{{1.0, 0}, {0.5, 0}}, 2.0};
  EXPECT_THROW(hawkscan::validate_stream(s, 1), std::invalid_argument);
  hawkscan::EventStream bad_node{{{1.0, 3}}, 2.0};
  EXPECT_THROW(hawkscan::validate_stream(bad_node, 2), std::invalid_argument);
}
