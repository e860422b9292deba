#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hawkscan/model.hpp"

namespace hawkscan {

// Eight-node test network with exponential kernels (beta = 1). Base rates
// lie between 0.5 and 1. After the change two edges appear: node 2 -> node 1
// and node 1 -> node 3 (1-based labels), both with influence 0.4.
HawkesModel network8_pre();
HawkesModel network8_post();

// CUSUM post-change hypotheses that differ from network8_post():
// "half", "double" (the new edges at 50% / 200%), "one-edge" (only 2 -> 1),
// "four-edges" (2 -> 1, 1 -> 3, 6 -> 1, 1 -> 7, each 0.4).
std::vector<std::pair<std::string, HawkesModel>> network8_misspecified();

// Single-node model used for the first-order delay checks: mu = 0.5,
// alpha 0 before and 0.5 after the change, beta = 1.
HawkesModel single_node_pre();
HawkesModel single_node_post();

// Fourteen-neuron replica for the spike-train experiment: sparse weak
// coupling before the change, a new excitatory assembly among neurons
// 1-5 afterwards. Base rates and the kernel rate are in events and decay
// per millisecond.
HawkesModel neuro14_pre();
HawkesModel neuro14_post();

}  // namespace hawkscan
