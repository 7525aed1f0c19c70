#pragma once

#include <cstdint>
#include <string>

#include "lbo/policy.hpp"
#include "lbo/types.hpp"

namespace lbo {

struct SimConfig {
  long n_packets = 1000000;     ///< arrivals to simulate
  long warmup_packets = 100000; ///< arrivals discarded before measurement
  std::uint64_t seed = 0;

  void validate() const;
  bool operator==(const SimConfig&) const = default;
};

struct SimulationReport {
  double success_rate = 0.0;       ///< in-deadline fraction of measured packets
  /// Normal-approximation 95% half width, computed by batch means over
  /// arrival order (queued outcomes are serially correlated); falls
  /// back to the Bernoulli formula below 200 measured packets.
  double ci95_halfwidth = 0.0;
  long packets_measured = 0;
  long breakout_count = 0;
  long breakout_successes = 0;
  long core_count = 0;
  long core_successes = 0;
  double mean_queue_length = 0.0;  ///< queue length seen by measured arrivals
  int max_queue_length = 0;        ///< largest queue length over the whole run
  std::uint64_t seed = 0;          ///< seed echoed back
  std::string rng_algorithm;       ///< generator identifier, see rng.hpp
};

/// Slot-stepped Monte-Carlo run of the full system under a bound
/// policy. Within a slot the departure trial is processed before the
/// arrival, matching the epoch kernel's convention. A breakout packet
/// succeeds iff its own departure lands within deadline_slots slots of
/// its arrival; a core packet succeeds iff an independent delay draw
/// meets the deadline. Deterministic for a fixed seed.
SimulationReport simulate(const SystemParams& params, const DelayModel& model,
                          const PolicyTable& table, const SimConfig& config);

}  // namespace lbo
