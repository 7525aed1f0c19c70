#include "lbo/solver.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <stdexcept>

#include "lbo/delay.hpp"
#include "lbo/kernel.hpp"

namespace lbo {

MdpTensors assemble_tensors(const SystemParams& params, const DelayModel& model) {
  params.validate();
  model.validate();
  MdpTensors tensors;
  tensors.kernel = transition_kernel(params);
  tensors.breakout_reward = backhaul_success_probs(params) * params.reward_unit;
  tensors.core_reward = core_success_prob(params, model) * params.reward_unit;
  tensors.tie_break = params.tie_break;
  return tensors;
}

BackupResult bellman_backup(const MdpTensors& tensors,
                            const Eigen::Ref<const ValueFunction>& v) {
  const int states = static_cast<int>(tensors.kernel.rows());
  if (v.size() != states)
    throw std::invalid_argument("value function size does not match the kernel");
  if (!v.allFinite())
    throw std::invalid_argument("value function has non-finite entries");

  // continuation(r) = E[v | post-decision length r]; one matvec serves
  // both actions, since breakout at s reads entry s+1.
  const Eigen::VectorXd continuation = tensors.kernel * v;

  BackupResult backup;
  backup.values.resize(states);
  backup.policy.resize(states);
  for (int s = 0; s < states; ++s) {
    const double core = tensors.core_reward + continuation(s);
    if (s + 1 < states) {
      const double breakout = tensors.breakout_reward(s) + continuation(s + 1);
      const bool take_breakout = tensors.tie_break == Action::Breakout
                                     ? breakout >= core
                                     : breakout > core;
      backup.values(s) = take_breakout ? breakout : core;
      backup.policy[s] = take_breakout ? Action::Breakout : Action::CoreNetwork;
    } else {
      backup.values(s) = core;
      backup.policy[s] = Action::CoreNetwork;
    }
  }
  return backup;
}

BackupResult bellman_backup(const SystemParams& params, const DelayModel& model,
                            const Eigen::Ref<const ValueFunction>& v) {
  return bellman_backup(assemble_tensors(params, model), v);
}

SolveResult solve(const SystemParams& params, const DelayModel& model) {
  const MdpTensors tensors = assemble_tensors(params, model);
  const int states = params.buffer_size + 1;
  constexpr double kFloor = 1e-12;  // guards the anchor, where v is 0
  // Changes at the rounding level of the backup arithmetic count as
  // "remained the same": a state with |v| near zero can otherwise demand
  // a relative change below double resolution and spin forever.
  constexpr double kUlps = 256.0 * std::numeric_limits<double>::epsilon();

  SolveResult result;
  ValueFunction v = ValueFunction::Zero(states);
  for (long iter = 1; iter <= params.max_iterations; ++iter) {
    BackupResult backup = bellman_backup(tensors, v);
    result.gain = backup.values(0);  // increment at the anchor: v(0) == 0
    backup.values.array() -= result.gain;

    const double settled = kUlps * std::max(std::abs(result.gain),
                                            backup.values.cwiseAbs().maxCoeff());
    double worst = 0.0;
    for (int s = 0; s < states; ++s) {
      const double change = std::abs(backup.values(s) - v(s));
      if (change <= settled) continue;
      worst = std::max(worst, change / std::max(std::abs(v(s)), kFloor));
    }

    v = std::move(backup.values);
    result.policy = std::move(backup.policy);
    result.iterations = iter;
    if (worst < params.epsilon) {
      result.converged = true;
      break;
    }
  }
  result.values = std::move(v);
  result.threshold = extract_threshold(result.policy);
  return result;
}

ThresholdReport extract_threshold(const SolveResult& result) {
  if (!result.converged)
    throw std::invalid_argument("threshold extraction requires a converged solve");
  return extract_threshold(result.policy);
}

ThresholdReport extract_threshold(const std::vector<Action>& policy) {
  ThresholdReport report;
  const auto first = std::find(policy.begin(), policy.end(), Action::CoreNetwork);
  report.first_core = static_cast<int>(first - policy.begin());
  for (int s = report.first_core; s < static_cast<int>(policy.size()); ++s)
    if (policy[s] == Action::Breakout) report.violations.push_back(s);
  report.clean = report.violations.empty();
  return report;
}

Eigen::VectorXd stationary_distribution(
    const Eigen::Ref<const Eigen::MatrixXd>& transition) {
  const int n = static_cast<int>(transition.rows());
  if (transition.cols() != n) throw std::invalid_argument("matrix must be square");

  // Solve x^T P = x^T with the normalization sum(x) = 1 replacing the
  // last (redundant) balance equation. For a unichain kernel this
  // system is nonsingular.
  Eigen::MatrixXd system = transition.transpose() - Eigen::MatrixXd::Identity(n, n);
  system.row(n - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(n - 1) = 1.0;

  Eigen::VectorXd dist = system.partialPivLu().solve(rhs);
  const double residual = (transition.transpose() * dist - dist).cwiseAbs().maxCoeff();
  if (!dist.allFinite() || residual > 1e-8)
    throw std::runtime_error("no unique stationary distribution found");
  dist = dist.cwiseMax(0.0);
  return dist / dist.sum();
}

double policy_gain(const SystemParams& params, const DelayModel& model,
                   const std::vector<Action>& policy) {
  params.validate();
  model.validate();
  const int states = params.buffer_size + 1;
  if (static_cast<int>(policy.size()) != states)
    throw std::invalid_argument("policy size does not match the state space");
  if (policy.back() != Action::CoreNetwork)
    throw std::invalid_argument("policy must route the full-buffer state to the core");

  const Eigen::MatrixXd kernel = transition_kernel(params);
  const Eigen::VectorXd breakout_reward =
      backhaul_success_probs(params) * params.reward_unit;
  const double core_reward = core_success_prob(params, model) * params.reward_unit;

  Eigen::MatrixXd chain(states, states);
  Eigen::VectorXd reward(states);
  for (int s = 0; s < states; ++s) {
    const bool breakout = policy[s] == Action::Breakout;
    chain.row(s) = kernel.row(s + (breakout ? 1 : 0));
    reward(s) = breakout ? breakout_reward(s) : core_reward;
  }
  return stationary_distribution(chain).dot(reward);
}

}  // namespace lbo
