#pragma once

#include <Eigen/Dense>

#include <vector>

#include "lbo/types.hpp"

namespace lbo {

/// Relative value function over queue states; entry 0 is the anchor and
/// equals 0 after every normalization.
using ValueFunction = Eigen::VectorXd;

/// Threshold structure of a per-state action table. first_core is the
/// smallest state routed to the core network; clean is false when
/// Breakout reappears above it, with the offending states listed.
struct ThresholdReport {
  int first_core = 0;
  bool clean = true;
  std::vector<int> violations;

  bool operator==(const ThresholdReport&) const = default;
};

struct SolveResult {
  ValueFunction values;        ///< converged relative values, values[0] == 0
  std::vector<Action> policy;  ///< per-state action; entry buffer_size is CoreNetwork
  ThresholdReport threshold;
  double gain = 0.0;           ///< long-run average reward per packet
  long iterations = 0;
  bool converged = false;
};

/// Dense model tensors assembled once per solve: the epoch kernel plus
/// the one-step rewards of both actions.
struct MdpTensors {
  Eigen::MatrixXd kernel;           ///< row r: next-state distribution given post-decision length r
  Eigen::VectorXd breakout_reward;  ///< per-state breakout reward
  double core_reward = 0.0;         ///< state-independent core reward
  Action tie_break = Action::Breakout;  ///< action taken at exact value ties
};

MdpTensors assemble_tensors(const SystemParams& params, const DelayModel& model);

struct BackupResult {
  ValueFunction values;
  std::vector<Action> policy;
};

/// One backup of the average-reward recursion: per state, the better of
/// breakout (reward + continuation after joining the queue) and core
/// (reward + continuation with the queue untouched). Breakout is
/// skipped at the full buffer; ties break toward Breakout.
BackupResult bellman_backup(const MdpTensors& tensors,
                            const Eigen::Ref<const ValueFunction>& v);
BackupResult bellman_backup(const SystemParams& params, const DelayModel& model,
                            const Eigen::Ref<const ValueFunction>& v);

/// Relative value iteration from v = 0, re-anchored at state 0 after
/// every backup. Stops when the per-state relative change drops below
/// params.epsilon or the iteration cap is hit (reported through
/// converged = false, never as silent success). The gain is the
/// pre-normalization increment at the anchor in the final iteration.
SolveResult solve(const SystemParams& params, const DelayModel& model);

/// Threshold extraction; requires result.converged.
ThresholdReport extract_threshold(const SolveResult& result);
ThresholdReport extract_threshold(const std::vector<Action>& policy);

/// Stationary distribution of a row-stochastic matrix with a single
/// recurrent class, by direct linear solve.
Eigen::VectorXd stationary_distribution(const Eigen::Ref<const Eigen::MatrixXd>& transition);

/// Exact long-run average reward of a fixed per-state action table,
/// evaluated through its stationary distribution.
double policy_gain(const SystemParams& params, const DelayModel& model,
                   const std::vector<Action>& policy);

}  // namespace lbo
