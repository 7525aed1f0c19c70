#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lbo/policy.hpp"
#include "lbo/simulate.hpp"
#include "lbo/types.hpp"

namespace lbo {

enum class SweepAxis { ArrivalProb, DepartureProb };

/// Short axis tag used in CSV output and seed derivation: "p" or "q".
std::string axis_name(SweepAxis axis);
SweepAxis axis_from_string(const std::string& name);

struct SweepSpec {
  SweepAxis axis = SweepAxis::ArrivalProb;
  double start = 0.01;
  double stop = 0.09;
  double step = 0.01;
  double fixed_value = 0.05;  ///< probability on the other axis

  bool operator==(const SweepSpec&) const = default;
};

struct ExperimentConfig {
  SystemParams params;
  DelayModel delay;
  SweepSpec sweep;
  std::vector<PolicySpec> policies = {{PolicyKind::MdpOptimal, 0},
                                      {PolicyKind::Myopic, 0}};
  SimConfig sim;
  std::string out = "sweep.csv";
  bool svg = false;

  void validate() const;
  bool operator==(const ExperimentConfig&) const = default;
};

struct PolicyOutcome {
  std::string policy;   ///< canonical policy name
  double gain = 0.0;    ///< analytic long-run average reward
  double sim_success = 0.0;
  double ci95 = 0.0;
};

struct SweepRow {
  SweepAxis axis = SweepAxis::ArrivalProb;
  double value = 0.0;
  std::vector<PolicyOutcome> outcomes;
  ThresholdReport mdp_threshold;
};

/// Grid points start, start+step, ..., up to stop (inclusive within
/// floating-point slack).
std::vector<double> grid_values(const SweepSpec& spec);

/// Seed of one grid point, a pure function of (master seed, axis,
/// value) so results do not depend on execution order or worker count.
std::uint64_t point_seed(std::uint64_t master, SweepAxis axis, double value);

/// Runs every grid point: one solve, then a bind + analytic gain +
/// simulation per requested policy. Points execute on `workers`
/// threads; rows return in ascending sweep order. Any failing point
/// aborts the sweep with the offending value named.
std::vector<SweepRow> run_sweep(const ExperimentConfig& config, int workers = 1);

/// CSV with one header line and one line per row; numbers carry 9
/// significant digits. Written atomically (temp file + rename).
void emit_csv(const std::vector<SweepRow>& rows, const std::string& path);

enum class PlotKind {
  Reward,     ///< one gain series per policy
  Threshold,  ///< the MDP threshold as a single series
};

/// Standalone SVG line chart of a sweep; deterministic for equal input.
void emit_plot(const std::vector<SweepRow>& rows, const std::string& path,
               PlotKind kind);

}  // namespace lbo
