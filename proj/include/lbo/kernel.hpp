#pragma once

#include <Eigen/Dense>

#include "lbo/rng.hpp"
#include "lbo/types.hpp"

namespace lbo {

/// Distribution of the queue length seen by the next arriving packet,
/// given the queue holds `post_decision_len` packets right after the
/// current routing decision. Entry t is P{next length = t}.
///
/// The inter-arrival gap is geometric in the arrival probability and
/// each slot of the gap carries an independent departure trial, so the
/// departure count is geometric-mixed binomial. All mass of departure
/// counts >= post_decision_len is folded into t = 0: the queue cannot
/// go negative. The series over the gap length stops once its
/// remaining geometric mass drops below tail_mass.
Eigen::VectorXd epoch_distribution(const SystemParams& params, int post_decision_len);

/// Transition row of the decision process at `state` under `action`.
/// Breakout adds the arriving packet to the queue before the epoch
/// evolves; it is infeasible at a full buffer.
Eigen::VectorXd transition_row(const SystemParams& params, QueueState state,
                               Action action);

/// Dense epoch kernel; row r equals epoch_distribution(params, r).
/// Both actions read from this one matrix: action u at state s uses
/// row s+u.
Eigen::MatrixXd transition_kernel(const SystemParams& params);

/// Sampling counterpart of transition_row: draws the inter-arrival gap,
/// applies per-slot departure trials while the queue is nonempty, and
/// returns the queue length observed by the next arrival.
QueueState sample_epoch(const SystemParams& params, QueueState state, Action action,
                        Rng& rng);

}  // namespace lbo
