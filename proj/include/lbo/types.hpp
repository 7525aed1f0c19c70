#pragma once

#include <cstdint>
#include <string>

namespace lbo {

/// Routing decision for an arriving packet: join the breakout backhaul
/// queue, or hand the packet to the core network.
enum class Action : std::uint8_t { Breakout, CoreNetwork };

std::string to_string(Action action);
Action action_from_string(const std::string& name);

/// Queue length of the breakout backhaul observed at a packet arrival
/// epoch. Valid values are 0..SystemParams::buffer_size.
using QueueState = int;

/// Model constants of the slotted backhaul system. Defaults mirror the
/// reference configuration: 0.02 ms slots, a 19.3 ms deadline and a
/// 100-packet buffer.
struct SystemParams {
  double arrival_prob = 0.05;     ///< per-slot packet arrival probability, in (0,1)
  double departure_prob = 0.05;   ///< per-slot backhaul departure probability, in (0,1]
  double slot_ms = 0.02;          ///< slot duration [ms]
  int deadline_slots = 965;       ///< delay budget of a packet, in slots
  int buffer_size = 100;          ///< truncation bound of the backhaul queue
  double reward_unit = 1.0;       ///< reward for a packet delivered in time
  double epsilon = 1e-9;          ///< relative convergence tolerance of the solver
  double tail_mass = 1e-12;       ///< truncation tolerance of the inter-arrival series
  long max_iterations = 100000;   ///< solver iteration cap
  Action tie_break = Action::Breakout;  ///< solver action taken at exact value ties

  double deadline_ms() const { return deadline_slots * slot_ms; }

  /// Throws std::invalid_argument when any field is out of range.
  void validate() const;

  bool operator==(const SystemParams&) const = default;
};

/// Core-network delay distribution: a Gaussian component (router
/// processing) mixed with the sum of an exponential and a Gaussian
/// (transport + processing). Defaults give a 40 ms mean delay.
struct DelayModel {
  double mixture_weight = 0.5;    ///< weight of the pure-Gaussian component, in [0,1]
  double exp_rate_per_ms = 0.05;  ///< rate of the exponential component [1/ms]
  double gauss_mean_ms = 30.0;    ///< mean of the Gaussian component [ms]
  double gauss_std_ms = 5.0;      ///< standard deviation of the Gaussian component [ms]

  /// Mean of the mixture: mu + (1 - weight) / rate.
  double mean_ms() const { return gauss_mean_ms + (1.0 - mixture_weight) / exp_rate_per_ms; }

  void validate() const;

  bool operator==(const DelayModel&) const = default;
};

/// One-step success rewards of the two paths in a given queue state.
struct PathReward {
  double breakout = 0.0;
  double core = 0.0;
};

}  // namespace lbo
