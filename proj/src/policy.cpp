#include "lbo/policy.hpp"

#include <stdexcept>

#include "lbo/delay.hpp"

namespace lbo {

std::string policy_name(const PolicySpec& spec) {
  switch (spec.kind) {
    case PolicyKind::MdpOptimal: return "mdp";
    case PolicyKind::Myopic: return "myopic";
    case PolicyKind::AlwaysBreakout: return "always_breakout";
    case PolicyKind::AlwaysCore: return "always_core";
    case PolicyKind::FixedThreshold:
      return "fixed_threshold_" + std::to_string(spec.threshold);
  }
  throw std::logic_error("unreachable policy kind");
}

PolicySpec parse_policy(const std::string& name) {
  if (name == "mdp") return {PolicyKind::MdpOptimal, 0};
  if (name == "myopic") return {PolicyKind::Myopic, 0};
  if (name == "always_breakout") return {PolicyKind::AlwaysBreakout, 0};
  if (name == "always_core") return {PolicyKind::AlwaysCore, 0};
  const std::string prefix = "fixed_threshold_";
  if (name.rfind(prefix, 0) == 0) {
    try {
      return {PolicyKind::FixedThreshold, std::stoi(name.substr(prefix.size()))};
    } catch (const std::exception&) {
      throw std::invalid_argument("bad fixed_threshold policy: " + name);
    }
  }
  throw std::invalid_argument("unknown policy kind: " + name);
}

PolicyTable bind_policy(const PolicySpec& spec, const SystemParams& params,
                        const DelayModel& model, const SolveResult* solved) {
  params.validate();
  model.validate();
  const int full = params.buffer_size;

  PolicyTable table;
  table.spec = spec;
  table.actions.assign(full + 1, Action::CoreNetwork);
  auto breakout_below = [&](int cutoff) {
    for (int s = 0; s < std::min(cutoff, full); ++s)
      table.actions[s] = Action::Breakout;
  };

  switch (spec.kind) {
    case PolicyKind::AlwaysCore:
      break;
    case PolicyKind::AlwaysBreakout:
      breakout_below(full);
      break;
    case PolicyKind::FixedThreshold:
      if (spec.threshold < 0 || spec.threshold > full)
        throw std::invalid_argument("fixed threshold outside [0, buffer_size]");
      breakout_below(spec.threshold);
      break;
    case PolicyKind::Myopic: {
      const Eigen::VectorXd breakout = backhaul_success_probs(params);
      const double core = core_success_prob(params, model);
      for (int s = 0; s < full; ++s)
        if (breakout(s) >= core) table.actions[s] = Action::Breakout;
      break;
    }
    case PolicyKind::MdpOptimal: {
      SolveResult local;
      if (solved == nullptr) {
        local = solve(params, model);
        solved = &local;
      }
      if (!solved->converged)
        throw std::runtime_error("MDP solve did not converge; cannot bind policy");
      table.actions = solved->policy;
      table.actions.back() = Action::CoreNetwork;
      break;
    }
  }
  return table;
}

Action decide(const PolicyTable& table, QueueState state) {
  if (state < 0 || state >= static_cast<int>(table.actions.size()))
    throw std::out_of_range("queue state outside the bound policy table");
  return table.actions[static_cast<std::size_t>(state)];
}

}  // namespace lbo
