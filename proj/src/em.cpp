#include "hawkscan/em.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hawkscan {

namespace {

constexpr double kDefaultInit = 0.1;

}  // namespace

WindowData prepare_window(std::span<const Event> events, double a, double b,
                          const Kernel& kernel, int dim) {
  if (!(a < b)) throw std::invalid_argument("EM window must have length > 0");
  if (dim <= 0) throw std::invalid_argument("dimension must be positive");
  WindowData data;
  data.dim = dim;
  data.a = a;
  data.b = b;
  data.mass = Eigen::VectorXd::Zero(dim);

  std::vector<Event> in;
  std::vector<Eigen::Index> count(static_cast<std::size_t>(dim), 0);
  for (const Event& e : events) {
    if (e.t > b) break;
    if (e.t <= a) continue;
    if (e.u < 0 || e.u >= dim) {
      throw std::invalid_argument("event node index out of range");
    }
    in.push_back(e);
    ++count[static_cast<std::size_t>(e.u)];
  }
  data.x.resize(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) {
    data.x[static_cast<std::size_t>(i)] =
        Eigen::MatrixXd::Zero(count[static_cast<std::size_t>(i)], dim);
  }
  std::vector<Eigen::Index> fill(static_cast<std::size_t>(dim), 0);

  if (kernel.is_exponential() && !kernel.is_truncated()) {
    const double beta = kernel.beta();
    Eigen::RowVectorXd decayed = Eigen::RowVectorXd::Zero(dim);
    double t_ref = a;
    for (const Event& e : in) {
      decayed *= std::exp(-beta * (e.t - t_ref));
      t_ref = e.t;
      const auto u = static_cast<std::size_t>(e.u);
      data.x[u].row(fill[u]++) = beta * decayed;
      decayed(e.u) += 1.0;
    }
  } else {
    const double support = kernel.support();
    std::size_t first = 0;
    for (std::size_t k = 0; k < in.size(); ++k) {
      const Event& e = in[k];
      while (first < k && in[first].t < e.t - support) ++first;
      const auto u = static_cast<std::size_t>(e.u);
      auto row = data.x[u].row(fill[u]++);
      for (std::size_t q = first; q < k; ++q) {
        row(in[q].u) += kernel.density(e.t - in[q].t);
      }
    }
  }
  for (const Event& e : in) data.mass(e.u) += kernel.cumulative(b - e.t);
  return data;
}

double window_log_likelihood(const WindowData& data, const Eigen::VectorXd& mu,
                             const Eigen::MatrixXd& a) {
  double ll = -mu.sum() * (data.b - data.a) - (a * data.mass).sum();
  for (int i = 0; i < data.dim; ++i) {
    const auto& x = data.x[static_cast<std::size_t>(i)];
    if (x.rows() == 0) continue;
    const Eigen::ArrayXd lambda =
        (x * a.row(i).transpose()).array() + mu(i);
    if (!(lambda > 0.0).all()) {
      throw std::domain_error("non-positive intensity at an event");
    }
    ll += lambda.log().sum();
  }
  return ll;
}

EmResult em_mle(const WindowData& data, const Eigen::VectorXd& mu,
                const EmConfig& cfg) {
  const int d = data.dim;
  if (!(cfg.tol > 0.0)) throw std::invalid_argument("EM tolerance must be > 0");
  if (cfg.max_iter < 1) throw std::invalid_argument("EM max_iter must be >= 1");
  if (mu.size() != d) throw std::invalid_argument("mu has the wrong size");
  if ((mu.array() <= 0.0).any()) {
    throw std::invalid_argument("base rates must be > 0");
  }

  EmResult res;
  res.mu = mu;
  if (cfg.init) {
    if (cfg.init->rows() != d || cfg.init->cols() != d) {
      throw std::invalid_argument("EM initial matrix has the wrong size");
    }
    if ((cfg.init->array() < 0.0).any()) {
      throw std::invalid_argument("EM initial matrix must be >= 0");
    }
    res.a = *cfg.init;
  } else {
    res.a = Eigen::MatrixXd::Constant(d, d, kDefaultInit);
  }

  const double length = data.b - data.a;
  Eigen::MatrixXd offspring(d, d);
  Eigen::VectorXd background(d);
  Eigen::ArrayXd lambda;
  double previous = -std::numeric_limits<double>::infinity();
  while (true) {
    // E-step: expected parent counts, accumulated with the log-likelihood.
    double ll = -res.mu.sum() * length - (res.a * data.mass).sum();
    for (int i = 0; i < d; ++i) {
      const auto& x = data.x[static_cast<std::size_t>(i)];
      if (x.rows() == 0) {
        offspring.row(i).setZero();
        background(i) = 0.0;
        continue;
      }
      lambda = (x * res.a.row(i).transpose()).array() + res.mu(i);
      ll += lambda.log().sum();
      lambda = lambda.inverse();
      offspring.row(i) = (x.transpose() * lambda.matrix()).transpose();
      background(i) = lambda.sum();
    }
    res.trace.push_back(ll);
    res.log_likelihood = ll;
    if (ll - previous < cfg.tol) {
      res.converged = true;
      break;
    }
    if (res.iterations >= cfg.max_iter) break;
    previous = ll;

    // M-step.
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        res.a(i, j) = data.mass(j) > 0.0
                          ? res.a(i, j) * offspring(i, j) / data.mass(j)
                          : 0.0;
      }
      if (cfg.fit_mu) {
        res.mu(i) = std::max(res.mu(i) * background(i) / length, 1e-12);
      }
    }
    ++res.iterations;
  }
  return res;
}

EmResult em_mle(std::span<const Event> events, double a, double b,
                const Kernel& kernel, const Eigen::VectorXd& mu,
                const EmConfig& cfg) {
  return em_mle(prepare_window(events, a, b, kernel, static_cast<int>(mu.size())),
                mu, cfg);
}

}  // namespace hawkscan
