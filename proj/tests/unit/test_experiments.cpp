#include <gtest/gtest.h>

#include <filesystem>

#include "hawkscan/experiments.hpp"
#include "hawkscan/io.hpp"

namespace fs = std::filesystem;

namespace {

std::vector<std::string> run(const std::string& exp, const std::string& dir,
                             unsigned workers) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  hawkscan::ReproduceOptions opts;
  opts.experiment = exp;
  opts.seed = 3;
  opts.scale = 0.1;
  opts.out_dir = dir;
  opts.workers = workers;
  return hawkscan::reproduce(opts);
}

}  // namespace

TEST(Reproduce, OutputIsIndependentOfWorkerCount) {
  const auto base = fs::temp_directory_path() / "hawkscan_repro";
  const auto a = run("fig2-truncation", (base / "a").string(), 1);
  const auto b = run("fig2-truncation", (base / "b").string(), 2);
  ASSERT_EQ(a.size(), b.size());
  ASSERT_FALSE(a.empty());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(fs::path(a[k]).filename(), fs::path(b[k]).filename());
    EXPECT_EQ(hawkscan::read_text_file(a[k]), hawkscan::read_text_file(b[k])) << a[k];
  }
  fs::remove_all(base);
}

TEST(Reproduce, UnknownExperimentIsRejected) {
  hawkscan::ReproduceOptions opts;
  opts.experiment = "fig9";
  EXPECT_THROW(hawkscan::reproduce(opts), std::invalid_argument);
}

TEST(Reproduce, TruncationGapOrdering) {
  const auto g = hawkscan::truncation_gap(1);
  EXPECT_GT(g.gap_b1, g.gap_b2);
  EXPECT_GT(g.stop_time, 0.0);
}
