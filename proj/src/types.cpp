#include "lbo/types.hpp"

#include <stdexcept>

namespace lbo {

std::string to_string(Action action) {
  return action == Action::Breakout ? "breakout" : "core";
}

Action action_from_string(const std::string& name) {
  if (name == "breakout") return Action::Breakout;
  if (name == "core") return Action::CoreNetwork;
  throw std::invalid_argument("unknown action: " + name);
}

void SystemParams::validate() const {
  if (!(arrival_prob > 0.0 && arrival_prob < 1.0))
    throw std::invalid_argument("arrival_prob must lie in (0,1)");
  if (!(departure_prob > 0.0 && departure_prob <= 1.0))
    throw std::invalid_argument("departure_prob must lie in (0,1]");
  if (!(slot_ms > 0.0)) throw std::invalid_argument("slot_ms must be positive");
  if (deadline_slots < 1) throw std::invalid_argument("deadline_slots must be >= 1");
  if (buffer_size < 1) throw std::invalid_argument("buffer_size must be >= 1");
  if (!(reward_unit > 0.0)) throw std::invalid_argument("reward_unit must be positive");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("epsilon must lie in (0,1)");
  if (!(tail_mass > 0.0 && tail_mass < 1.0))
    throw std::invalid_argument("tail_mass must lie in (0,1)");
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
}

void DelayModel::validate() const {
  if (!(mixture_weight >= 0.0 && mixture_weight <= 1.0))
    throw std::invalid_argument("mixture_weight must lie in [0,1]");
  if (!(exp_rate_per_ms > 0.0))
    throw std::invalid_argument("exp_rate_per_ms must be positive");
  if (!(gauss_mean_ms > 0.0))
    throw std::invalid_argument("gauss_mean_ms must be positive");
  if (!(gauss_std_ms > 0.0))
    throw std::invalid_argument("gauss_std_ms must be positive");
}

}  // namespace lbo
