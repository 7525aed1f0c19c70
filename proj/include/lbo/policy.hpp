#pragma once

#include <string>
#include <vector>

#include "lbo/solver.hpp"
#include "lbo/types.hpp"

namespace lbo {

enum class PolicyKind {
  MdpOptimal,      ///< policy extracted from the solver
  Myopic,          ///< maximizes the one-step reward only
  AlwaysBreakout,  ///< breakout whenever feasible
  AlwaysCore,      ///< every packet through the core network
  FixedThreshold,  ///< breakout strictly below a fixed queue length
};

struct PolicySpec {
  PolicyKind kind = PolicyKind::MdpOptimal;
  int threshold = 0;  ///< FixedThreshold only

  bool operator==(const PolicySpec&) const = default;
};

/// Canonical name, e.g. "mdp", "myopic", "fixed_threshold_7". Doubles
/// as the CSV column prefix of the sweep harness.
std::string policy_name(const PolicySpec& spec);
PolicySpec parse_policy(const std::string& name);

/// Immutable per-state action table; the entry at buffer_size is
/// CoreNetwork for every kind.
struct PolicyTable {
  PolicySpec spec;
  std::vector<Action> actions;
};

/// Materializes a spec against a model instance. MdpOptimal runs the
/// solver (or reuses `solved` when given) and fails on non-convergence.
PolicyTable bind_policy(const PolicySpec& spec, const SystemParams& params,
                        const DelayModel& model, const SolveResult* solved = nullptr);

/// Constant-time table lookup; total on [0, buffer_size].
Action decide(const PolicyTable& table, QueueState state);

}  // namespace lbo
