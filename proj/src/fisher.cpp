#include "hawkscan/fisher.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "hawkscan/parallel.hpp"
#include "hawkscan/rng.hpp"
#include "hawkscan/score.hpp"
#include "hawkscan/simulator.hpp"

namespace hawkscan {

Eigen::MatrixXd fisher_info_mc(const HawkesModel& model, double sim_length,
                               double window, std::size_t reps,
                               std::uint64_t seed, unsigned workers) {
  require_valid(model);
  if (!(window > 0.0) || !(sim_length >= window)) {
    throw std::invalid_argument("Fisher estimate needs 0 < window <= sim_length");
  }
  if (reps == 0) throw std::invalid_argument("Fisher estimate needs reps >= 1");
  const int p = model.dim() * model.dim();
  std::vector<Eigen::VectorXd> scores(reps);
  parallel_for(reps, workers, [&](std::size_t r) {
    const EventStream s =
        simulate(model, {sim_length, derive_seed(seed, r), SimConfig{}.max_events});
    scores[r] = score_vector(model, s.events, sim_length - window, sim_length);
  });
  Eigen::MatrixXd info = Eigen::MatrixXd::Zero(p, p);
  for (const auto& u : scores) info.selfadjointView<Eigen::Lower>().rankUpdate(u);
  info = info.selfadjointView<Eigen::Lower>();
  return info / (static_cast<double>(reps) * window);
}

Eigen::MatrixXd regularized_inverse(const Eigen::MatrixXd& m, double ridge) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix must be square");
  if (!(ridge >= 0.0)) throw std::invalid_argument("ridge must be >= 0");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw std::invalid_argument("matrix must be symmetric");
  }
  const auto n = m.rows();
  const Eigen::MatrixXd shifted = m + ridge * Eigen::MatrixXd::Identity(n, n);
  Eigen::LLT<Eigen::MatrixXd> llt(shifted);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument(
        "matrix + ridge * I is not positive definite; increase the ridge");
  }
  return llt.solve(Eigen::MatrixXd::Identity(n, n));
}

}  // namespace hawkscan
