#include "hawkscan/simulator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "hawkscan/rng.hpp"

namespace hawkscan {

namespace {

constexpr double kPointsPerBlock = 4.0;
constexpr int kMaxLayers = 1 << 12;
constexpr std::int64_t kMaxBlocks = std::int64_t{1} << 36;
constexpr int kMaxNodes = 1 << 15;

std::uint64_t substream(int node, int layer, std::int64_t block) {
  return (static_cast<std::uint64_t>(node) << 48) |
         (static_cast<std::uint64_t>(layer) << 36) |
         static_cast<std::uint64_t>(block);
}

}  // namespace

Simulator::Simulator(const HawkesModel& model, std::uint64_t seed,
                     std::size_t max_events)
    : pre_(model), seed_(seed), max_events_(max_events), pre_ex_(model, 0.0) {
  require_valid(model);
  start();
}

Simulator::Simulator(const ChangeSpec& spec, std::uint64_t seed,
                     std::size_t max_events)
    : pre_(spec.pre),
      post_(spec.post),
      kappa_(spec.kappa),
      seed_(seed),
      max_events_(max_events),
      pre_ex_(spec.pre, 0.0) {
  require_valid(spec);
  post_ex_.emplace(spec.post, spec.kappa);
  start();
}

void Simulator::start() {
  const int d = pre_.dim();
  if (d > kMaxNodes) throw std::invalid_argument("too many nodes to simulate");
  if (max_events_ == 0) throw std::invalid_argument("max_events must be > 0");
  const auto n = static_cast<std::size_t>(d);
  height_.resize(n);
  block_len_.resize(n);
  bound_.resize(n);
  layers_.assign(n, 1);
  block_.assign(n, 0);
  for (int i = 0; i < d; ++i) {
    const auto k = static_cast<std::size_t>(i);
    height_[k] = pre_.mu()(i);
    block_len_[k] = kPointsPerBlock / height_[k];
    bound_[k] = pre_.mu()(i);
    generate_layers(i, 0, 1, -1.0);
    queue_.push({block_len_[k], 0.0, i, true});
  }
}

int Simulator::layers_needed(int node) const {
  const auto k = static_cast<std::size_t>(node);
  const double ratio = bound_[k] / height_[k];
  const double layers = std::max(1.0, std::ceil(ratio));
  if (layers > kMaxLayers) {
    throw std::runtime_error(
        "dominating rate exploded during simulation (near-critical model?)");
  }
  return static_cast<int>(layers);
}

void Simulator::generate_layers(int node, int from_layer, int to_layer,
                                double after) {
  const auto k = static_cast<std::size_t>(node);
  const std::int64_t m = block_[k];
  if (m >= kMaxBlocks) throw std::runtime_error("simulation horizon too long");
  const double begin = static_cast<double>(m) * block_len_[k];
  const double end = static_cast<double>(m + 1) * block_len_[k];
  const double h = height_[k];
  for (int layer = from_layer; layer < to_layer; ++layer) {
    Philox gen(seed_, substream(node, layer, m));
    double t = begin;
    while (true) {
      t += gen.exponential() / h;
      if (t >= end) break;
      const double y = (layer + gen.uniform()) * h;
      if (t > after) queue_.push({t, y, node, false});
    }
  }
}

std::optional<Event> Simulator::next(double until) {
  while (!queue_.empty()) {
    const Candidate c = queue_.top();
    if (c.t > until) return std::nullopt;
    queue_.pop();
    const auto ni = static_cast<std::size_t>(c.node);

    if (c.block_end) {
      ++block_[ni];
      layers_[ni] = layers_needed(c.node);
      generate_layers(c.node, 0, layers_[ni], c.t);
      queue_.push({static_cast<double>(block_[ni] + 1) * block_len_[ni], 0.0,
                   c.node, true});
      continue;
    }

    if (!switched_ && post_regime(c.t)) {
      // Post-change excitation starts empty at kappa.
      switched_ = true;
      for (int i = 0; i < pre_.dim(); ++i) {
        bound_[static_cast<std::size_t>(i)] = pre_.mu()(i);
      }
    }

    if (c.y >= bound_[ni]) continue;
    Excitation& ex = switched_ ? *post_ex_ : pre_ex_;
    if (c.y >= pre_.mu()(c.node)) {
      ex.evaluate(c.t);
      if (!(c.y < ex.intensity(c.node))) continue;
    }

    const Event e{c.t, c.node};
    pre_ex_.push(e);
    if (post_ex_) post_ex_->push(e);
    if (++emitted_ > max_events_) {
      throw std::runtime_error("simulation exceeded max_events (" +
                               std::to_string(max_events_) +
                               "); the model may be near-critical");
    }

    ex.evaluate_envelope(e.t);
    for (int i = 0; i < pre_.dim(); ++i) {
      const auto k = static_cast<std::size_t>(i);
      bound_[k] = ex.intensity(i);
      const int need = layers_needed(i);
      if (need > layers_[k]) {
        generate_layers(i, layers_[k], need, e.t);
        layers_[k] = need;
      }
    }
    return e;
  }
  return std::nullopt;
}

EventStream simulate(const HawkesModel& model, const SimConfig& cfg) {
  if (!(cfg.horizon > 0.0)) throw std::invalid_argument("horizon must be > 0");
  Simulator sim(model, cfg.seed, cfg.max_events);
  EventStream out;
  out.horizon = cfg.horizon;
  while (auto e = sim.next(cfg.horizon)) out.events.push_back(*e);
  return out;
}

EventStream simulate_with_change(const ChangeSpec& spec, const SimConfig& cfg) {
  if (!(cfg.horizon > 0.0)) throw std::invalid_argument("horizon must be > 0");
  if (spec.kappa >= cfg.horizon) {
    // The change is never observed.
    return simulate(spec.pre, cfg);
  }
  Simulator sim(spec, cfg.seed, cfg.max_events);
  EventStream out;
  out.horizon = cfg.horizon;
  while (auto e = sim.next(cfg.horizon)) out.events.push_back(*e);
  return out;
}

double empirical_rate(const EventStream& stream, int node, double a, double b) {
  if (!(a < b)) throw std::invalid_argument("empirical_rate needs a < b");
  std::size_t count = 0;
  for (const Event& e : stream.events) {
    if (e.u == node && e.t > a && e.t <= b) ++count;
  }
  return static_cast<double>(count) / (b - a);
}

}  // namespace hawkscan
