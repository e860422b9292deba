#pragma once

#include <Eigen/Dense>

#include <cstdint>

#include "hawkscan/model.hpp"

namespace hawkscan {

// Monte Carlo Fisher information per unit time at the model's A:
// (1 / (reps * w)) * sum of u u' where u is the score over the last window
// [sim_length - w, sim_length] of an independent simulation per replication.
Eigen::MatrixXd fisher_info_mc(const HawkesModel& model, double sim_length,
                               double window, std::size_t reps,
                               std::uint64_t seed, unsigned workers = 0);

// (m + ridge * I)^{-1} via a Cholesky factorization. Throws
// std::invalid_argument when m + ridge * I is not positive definite.
Eigen::MatrixXd regularized_inverse(const Eigen::MatrixXd& m, double ridge);

}  // namespace hawkscan
