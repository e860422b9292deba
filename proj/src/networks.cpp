#include "hawkscan/networks.hpp"

namespace hawkscan {

namespace {

Eigen::VectorXd network8_mu() {
  Eigen::VectorXd mu(8);
  mu << 1.0, 0.9, 0.8, 0.5, 0.6, 0.7, 0.75, 0.55;
  return mu;
}

// A(i, j) is the influence of node j on node i; labels below are 1-based.
Eigen::MatrixXd network8_a() {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(8, 8);
  a(1, 0) = 0.3;   // 1 -> 2
  a(3, 2) = 0.25;  // 3 -> 4
  a(4, 3) = 0.2;   // 4 -> 5
  a(5, 4) = 0.3;   // 5 -> 6
  a(6, 5) = 0.2;   // 6 -> 7
  a(7, 6) = 0.25;  // 7 -> 8
  a(0, 7) = 0.2;   // 8 -> 1
  a(3, 3) = 0.2;   // 4 -> 4
  a(7, 7) = 0.2;   // 8 -> 8
  return a;
}

}  // namespace

HawkesModel network8_pre() {
  return HawkesModel(network8_mu(), network8_a(), Kernel::exponential(1.0));
}

HawkesModel network8_post() {
  Eigen::MatrixXd a = network8_a();
  a(0, 1) = 0.4;  // 2 -> 1
  a(2, 0) = 0.4;  // 1 -> 3
  return HawkesModel(network8_mu(), a, Kernel::exponential(1.0));
}

std::vector<std::pair<std::string, HawkesModel>> network8_misspecified() {
  const Kernel k = Kernel::exponential(1.0);
  std::vector<std::pair<std::string, HawkesModel>> out;
  for (const auto& [name, scale] :
       {std::pair<const char*, double>{"half", 0.5}, {"double", 2.0}}) {
    Eigen::MatrixXd a = network8_a();
    a(0, 1) = 0.4 * scale;
    a(2, 0) = 0.4 * scale;
    out.emplace_back(name, HawkesModel(network8_mu(), a, k));
  }
  {
    Eigen::MatrixXd a = network8_a();
    a(0, 1) = 0.4;
    out.emplace_back("one-edge", HawkesModel(network8_mu(), a, k));
  }
  {
    Eigen::MatrixXd a = network8_a();
    a(0, 1) = 0.4;  // 2 -> 1
    a(2, 0) = 0.4;  // 1 -> 3
    a(0, 5) = 0.4;  // 6 -> 1
    a(6, 0) = 0.4;  // 1 -> 7
    out.emplace_back("four-edges", HawkesModel(network8_mu(), a, k));
  }
  return out;
}

HawkesModel single_node_pre() {
  return HawkesModel(Eigen::VectorXd::Constant(1, 0.5),
                     Eigen::MatrixXd::Zero(1, 1), Kernel::exponential(1.0));
}

HawkesModel single_node_post() {
  return HawkesModel(Eigen::VectorXd::Constant(1, 0.5),
                     Eigen::MatrixXd::Constant(1, 1, 0.5),
                     Kernel::exponential(1.0));
}

namespace {

constexpr int kNeurons = 14;

Eigen::VectorXd neuro_mu() {
  Eigen::VectorXd mu(kNeurons);
  for (int i = 0; i < kNeurons; ++i) mu(i) = 0.008 + 0.001 * (i % 5);
  return mu;
}

Eigen::MatrixXd neuro_a() {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(kNeurons, kNeurons);
  for (int i = 0; i < kNeurons; ++i) {
    a((i + 1) % kNeurons, i) = 0.2;
    a((i + 5) % kNeurons, i) = 0.1;
  }
  return a;
}

}  // namespace

HawkesModel neuro14_pre() {
  return HawkesModel(neuro_mu(), neuro_a(), Kernel::exponential(0.1));
}

HawkesModel neuro14_post() {
  Eigen::MatrixXd a = neuro_a();
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      if (i != j) a(i, j) += 0.12;
    }
  }
  return HawkesModel(neuro_mu(), a, Kernel::exponential(0.1));
}

}  // namespace hawkscan
