#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <vector>

#include "hawkscan/excitation.hpp"
#include "hawkscan/model.hpp"

namespace hawkscan {

struct SimConfig {
  double horizon = 0.0;
  std::uint64_t seed = 0;
  std::size_t max_events = 10'000'000;
};

// Streaming Ogata-thinning sampler.
//
// Candidates are the points of a unit-rate Poisson process on
// time x [0, inf) per node, stored in horizontal layers of height mu_i and
// generated block by block from dedicated counter-based substreams. A
// candidate (t, y) on node i is accepted when y < lambda_i(t). Only layers
// below the current dominating rate are materialized; the rate is recomputed
// after every accepted event and is non-increasing in between.
//
// Because the candidate set is a fixed function of the seed, two models run
// with the same seed see the same candidates: runs are reproducible, and a
// model with elementwise larger influence accepts a superset of events.
class Simulator {
 public:
  Simulator(const HawkesModel& model, std::uint64_t seed,
            std::size_t max_events = SimConfig{}.max_events);
  // Pre-change law up to kappa; afterwards the post-change law whose
  // excitation only counts events after kappa.
  Simulator(const ChangeSpec& spec, std::uint64_t seed,
            std::size_t max_events = SimConfig{}.max_events);

  // Next event with time <= until, or nullopt if there is none; the sampler
  // can be resumed later with a larger bound.
  std::optional<Event> next(double until);

  std::size_t events_emitted() const { return emitted_; }

 private:
  struct Candidate {
    double t;
    double y;
    int node;
    bool block_end;
    bool operator>(const Candidate& o) const { return t > o.t; }
  };

  void start();
  void generate_layers(int node, int from_layer, int to_layer, double after);
  int layers_needed(int node) const;
  bool post_regime(double t) const { return t > kappa_; }

  HawkesModel pre_;
  std::optional<HawkesModel> post_;
  double kappa_ = std::numeric_limits<double>::infinity();
  std::uint64_t seed_;
  std::size_t max_events_;

  Excitation pre_ex_;
  std::optional<Excitation> post_ex_;
  bool switched_ = false;

  std::vector<double> height_;      // layer height per node
  std::vector<double> block_len_;   // block length per node
  std::vector<double> bound_;       // dominating rate per node
  std::vector<int> layers_;         // layers materialized in current block
  std::vector<std::int64_t> block_;  // current block index per node

  std::priority_queue<Candidate, std::vector<Candidate>, std::greater<>> queue_;
  std::size_t emitted_ = 0;
};

EventStream simulate(const HawkesModel& model, const SimConfig& cfg);
EventStream simulate_with_change(const ChangeSpec& spec, const SimConfig& cfg);

// Count of node's events in (a, b] divided by b - a.
double empirical_rate(const EventStream& stream, int node, double a, double b);

}  // namespace hawkscan
