#pragma once

#include <Eigen/Dense>

#include "lbo/rng.hpp"
#include "lbo/types.hpp"

namespace lbo {

/// Standard normal CDF.
double normal_cdf(double z);

/// Probability that a packet arriving to a queue of length `queue_len`
/// leaves the backhaul within the deadline. The packet itself and all
/// packets ahead of it must depart, i.e. at least queue_len + 1
/// successes among deadline_slots Bernoulli(departure_prob) trials.
double backhaul_success_prob(const SystemParams& params, QueueState queue_len);

/// backhaul_success_prob for every state 0..buffer_size.
Eigen::VectorXd backhaul_success_probs(const SystemParams& params);

/// CDF of the core-network delay mixture at t_ms. When the Gaussian
/// component puts meaningful mass below zero the CDF is conditioned on
/// positive delay, matching the rejection rule of core_delay_sample.
double core_delay_cdf(const DelayModel& model, double t_ms);

/// Probability that a core-routed packet meets the deadline,
/// independent of the backhaul queue.
double core_success_prob(const SystemParams& params, const DelayModel& model);

/// One draw of core-network delay; negative draws are rejected and the
/// whole mixture redrawn.
double core_delay_sample(const DelayModel& model, Rng& rng);

/// One-step rewards of both paths in state queue_len.
PathReward path_rewards(const SystemParams& params, const DelayModel& model,
                        QueueState queue_len);

}  // namespace lbo
