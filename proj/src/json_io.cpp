#include "lbo/json_io.hpp"

#include <fstream>
#include <stdexcept>

namespace lbo {

using nlohmann::json;

void to_json(json& j, const SystemParams& params) {
  j = json{{"arrival_prob", params.arrival_prob},
           {"departure_prob", params.departure_prob},
           {"slot_ms", params.slot_ms},
           {"deadline_slots", params.deadline_slots},
           {"buffer_size", params.buffer_size},
           {"reward_unit", params.reward_unit},
           {"epsilon", params.epsilon},
           {"tail_mass", params.tail_mass},
           {"max_iterations", params.max_iterations},
           {"tie_break", to_string(params.tie_break)}};
}

void from_json(const json& j, SystemParams& params) {
  params = SystemParams{};
  params.arrival_prob = j.value("arrival_prob", params.arrival_prob);
  params.departure_prob = j.value("departure_prob", params.departure_prob);
  params.slot_ms = j.value("slot_ms", params.slot_ms);
  params.deadline_slots = j.value("deadline_slots", params.deadline_slots);
  params.buffer_size = j.value("buffer_size", params.buffer_size);
  params.reward_unit = j.value("reward_unit", params.reward_unit);
  params.epsilon = j.value("epsilon", params.epsilon);
  params.tail_mass = j.value("tail_mass", params.tail_mass);
  params.max_iterations = j.value("max_iterations", params.max_iterations);
  params.tie_break = action_from_string(j.value("tie_break", to_string(params.tie_break)));
}

void to_json(json& j, const DelayModel& model) {
  j = json{{"mixture_weight", model.mixture_weight},
           {"exp_rate_per_ms", model.exp_rate_per_ms},
           {"gauss_mean_ms", model.gauss_mean_ms},
           {"gauss_std_ms", model.gauss_std_ms}};
}

void from_json(const json& j, DelayModel& model) {
  model = DelayModel{};
  model.mixture_weight = j.value("mixture_weight", model.mixture_weight);
  model.exp_rate_per_ms = j.value("exp_rate_per_ms", model.exp_rate_per_ms);
  model.gauss_mean_ms = j.value("gauss_mean_ms", model.gauss_mean_ms);
  model.gauss_std_ms = j.value("gauss_std_ms", model.gauss_std_ms);
}

void to_json(json& j, const PolicySpec& spec) { j = policy_name(spec); }

void from_json(const json& j, PolicySpec& spec) {
  spec = parse_policy(j.get<std::string>());
}

void to_json(json& j, const SimConfig& config) {
  j = json{{"n_packets", config.n_packets},
           {"warmup_packets", config.warmup_packets},
           {"seed", config.seed}};
}

void from_json(const json& j, SimConfig& config) {
  config = SimConfig{};
  config.n_packets = j.value("n_packets", config.n_packets);
  // default warmup: 10% of the horizon
  config.warmup_packets = j.value("warmup_packets", config.n_packets / 10);
  config.seed = j.value("seed", config.seed);
}

void to_json(json& j, const SweepSpec& spec) {
  j = json{{"axis", axis_name(spec.axis)},
           {"start", spec.start},
           {"stop", spec.stop},
           {"step", spec.step},
           {"fixed_value", spec.fixed_value}};
}

void to_json(json& j, const ExperimentConfig& config) {
  j = json{{"params", config.params}, {"delay", config.delay},
           {"sweep", config.sweep},   {"policies", config.policies},
           {"sim", config.sim},       {"out", config.out},
           {"svg", config.svg}};
}

void from_json(const json& j, ExperimentConfig& config) {
  config = ExperimentConfig{};
  config.params = j.value("params", config.params);
  config.delay = j.value("delay", config.delay);
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    config.sweep.axis = axis_from_string(s.value("axis", axis_name(config.sweep.axis)));
    config.sweep.start = s.value("start", config.sweep.start);
    config.sweep.stop = s.value("stop", config.sweep.stop);
    config.sweep.step = s.value("step", config.sweep.step);
    const double other = config.sweep.axis == SweepAxis::ArrivalProb
                             ? config.params.departure_prob
                             : config.params.arrival_prob;
    config.sweep.fixed_value = s.value("fixed_value", other);
  }
  config.policies = j.value("policies", config.policies);
  config.sim = j.value("sim", config.sim);
  config.out = j.value("out", config.out);
  config.svg = j.value("svg", config.svg);
}

void to_json(json& j, const ThresholdReport& report) {
  j = json{{"value", report.first_core},
           {"clean", report.clean},
           {"violations", report.violations}};
}

void to_json(json& j, const SolveResult& result) {
  std::vector<std::string> policy;
  policy.reserve(result.policy.size());
  for (Action a : result.policy) policy.push_back(to_string(a));
  j = json{{"gain", result.gain},
           {"iterations", result.iterations},
           {"converged", result.converged},
           {"threshold", result.threshold},
           {"policy", policy},
           {"values", std::vector<double>(result.values.begin(), result.values.end())}};
}

void to_json(json& j, const SimulationReport& report) {
  j = json{{"success_rate", report.success_rate},
           {"ci95_halfwidth", report.ci95_halfwidth},
           {"packets_measured", report.packets_measured},
           {"breakout_count", report.breakout_count},
           {"breakout_successes", report.breakout_successes},
           {"core_count", report.core_count},
           {"core_successes", report.core_successes},
           {"mean_queue_length", report.mean_queue_length},
           {"max_queue_length", report.max_queue_length},
           {"seed", report.seed},
           {"rng_algorithm", report.rng_algorithm}};
}

ExperimentConfig load_config(const std::string& path) {
  if (path.empty()) return ExperimentConfig{};
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error("bad JSON in " + path + ": " + e.what());
  }
  return j.get<ExperimentConfig>();
}

}  // namespace lbo
