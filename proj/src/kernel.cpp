#include "lbo/kernel.hpp"

#include <algorithm>
#include <stdexcept>

namespace lbo {

namespace {

int post_decision_length(const SystemParams& params, QueueState state, Action action) {
  params.validate();
  if (state < 0 || state > params.buffer_size)
    throw std::invalid_argument("queue state outside [0, buffer_size]");
  if (action == Action::Breakout && state == params.buffer_size)
    throw std::invalid_argument("breakout is infeasible at a full buffer");
  return state + (action == Action::Breakout ? 1 : 0);
}

}  // namespace

Eigen::VectorXd epoch_distribution(const SystemParams& params, int post_decision_len) {
  const int states = params.buffer_size + 1;
  Eigen::VectorXd row = Eigen::VectorXd::Zero(states);
  if (post_decision_len == 0) {
    row(0) = 1.0;  // nothing can depart from an empty queue
    return row;
  }

  const double p = params.arrival_prob;
  const double q = params.departure_prob;

  // departures(d) = P{Binomial(n, q) = d} for the current gap length n,
  // advanced in place one slot at a time. Only d < post_decision_len is
  // tracked; larger counts empty the queue and land in row(0).
  Eigen::VectorXd departures = Eigen::VectorXd::Zero(post_decision_len);
  departures(0) = 1.0;

  double gap_pmf = p;     // p (1-p)^{n-1}
  double tail = 1.0 - p;  // (1-p)^n, the mass of gaps longer than n
  for (;;) {
    for (int d = post_decision_len - 1; d >= 1; --d)
      departures(d) = (1.0 - q) * departures(d) + q * departures(d - 1);
    departures(0) *= 1.0 - q;

    for (int d = 0; d < post_decision_len; ++d)
      row(post_decision_len - d) += gap_pmf * departures(d);

    if (tail < params.tail_mass) break;
    gap_pmf *= 1.0 - p;
    tail *= 1.0 - p;
  }

  // Empty-queue boundary: the remainder covers both truncated gap mass
  // and departure counts >= post_decision_len.
  row(0) = std::max(0.0, 1.0 - row.tail(states - 1).sum());
  return row;
}

Eigen::VectorXd transition_row(const SystemParams& params, QueueState state,
                               Action action) {
  return epoch_distribution(params, post_decision_length(params, state, action));
}

Eigen::MatrixXd transition_kernel(const SystemParams& params) {
  params.validate();
  const int states = params.buffer_size + 1;
  Eigen::MatrixXd kernel(states, states);
  for (int len = 0; len < states; ++len)
    kernel.row(len) = epoch_distribution(params, len).transpose();
  return kernel;
}

QueueState sample_epoch(const SystemParams& params, QueueState state, Action action,
                        Rng& rng) {
  int len = post_decision_length(params, state, action);
  const long gap = rng.geometric1(params.arrival_prob);
  for (long slot = 0; slot < gap && len > 0; ++slot)
    if (rng.bernoulli(params.departure_prob)) --len;
  return std::min(len, params.buffer_size);
}

}  // namespace lbo
