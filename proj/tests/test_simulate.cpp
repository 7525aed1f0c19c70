#include <doctest.h>

#include "lbo/delay.hpp"
#include "lbo/simulate.hpp"
#include "test_support.hpp"

using lbo::Action;
using lbo::DelayModel;
using lbo::PolicyKind;
using lbo::SimConfig;
using lbo::SystemParams;

namespace {

SystemParams sim_system(double p, double q, int deadline, double slot_ms,
                        int buffer) {
  SystemParams params;
  params.arrival_prob = p;
  params.departure_prob = q;
  params.deadline_slots = deadline;
  params.slot_ms = slot_ms;
  params.buffer_size = buffer;
  return params;
}

bool reports_equal(const lbo::SimulationReport& a, const lbo::SimulationReport& b) {
  return a.success_rate == b.success_rate && a.ci95_halfwidth == b.ci95_halfwidth &&
         a.packets_measured == b.packets_measured &&
         a.breakout_count == b.breakout_count &&
         a.breakout_successes == b.breakout_successes &&
         a.core_count == b.core_count && a.core_successes == b.core_successes &&
         a.mean_queue_length == b.mean_queue_length &&
         a.max_queue_length == b.max_queue_length && a.seed == b.seed &&
         a.rng_algorithm == b.rng_algorithm;
}

}  // namespace

TEST_SUITE("simulate") {

TEST_CASE("identical seeds give bit-identical reports") {
  const SystemParams params = sim_system(0.4, 0.3, 8, 2.0, 10);
  const DelayModel model;
  const lbo::PolicyTable table =
      lbo::bind_policy({PolicyKind::Myopic, 0}, params, model);
  SimConfig config;
  config.n_packets = 50000;
  config.warmup_packets = 5000;
  config.seed = 987654321;
  const lbo::SimulationReport first = lbo::simulate(params, model, table, config);
  const lbo::SimulationReport second = lbo::simulate(params, model, table, config);
  CHECK(reports_equal(first, second));
  CHECK(first.seed == config.seed);
  CHECK(first.rng_algorithm == lbo::kRngAlgorithm);
}

TEST_CASE("always-core success estimates the delay CDF") {
  const SystemParams params = sim_system(0.5, 0.5, 5, 4.0, 10);
  const DelayModel model;
  const lbo::PolicyTable table =
      lbo::bind_policy({PolicyKind::AlwaysCore, 0}, params, model);
  SimConfig config;
  config.n_packets = 220000;
  config.warmup_packets = 20000;
  config.seed = 31337;
  const lbo::SimulationReport report = lbo::simulate(params, model, table, config);

  const double expected = lbo::core_delay_cdf(model, params.deadline_ms());
  const double se = std::sqrt(expected * (1.0 - expected) /
                              static_cast<double>(report.packets_measured));
  CHECK(std::abs(report.success_rate - expected) < 3.0 * se);
  CHECK(report.breakout_count == 0);
  CHECK(report.core_count == report.packets_measured);
}

TEST_CASE("certain departures with surplus deadline never miss") {
  const SystemParams params = sim_system(0.6, 1.0, 8, 2.0, 6);
  const lbo::PolicyTable table =
      lbo::bind_policy({PolicyKind::AlwaysBreakout, 0}, params, DelayModel{});
  SimConfig config;
  config.n_packets = 30000;
  config.warmup_packets = 3000;
  config.seed = 5150;
  const lbo::SimulationReport report = lbo::simulate(params, DelayModel{}, table, config);
  CHECK(report.success_rate == 1.0);
}

TEST_CASE("optimal policy simulation reproduces the solver gain") {
  const SystemParams params = sim_system(0.6, 0.3, 4, 5.0, 3);
  const DelayModel model;
  const lbo::SolveResult solved = lbo::solve(params, model);
  REQUIRE(solved.converged);
  const lbo::PolicyTable table =
      lbo::bind_policy({PolicyKind::MdpOptimal, 0}, params, model, &solved);
  SimConfig config;
  config.n_packets = 1000000;
  config.warmup_packets = 100000;
  config.seed = 24601;
  const lbo::SimulationReport report = lbo::simulate(params, model, table, config);
  CHECK(std::abs(report.success_rate - solved.gain) < report.ci95_halfwidth);
}

TEST_CASE("counts stay consistent and the queue stays bounded") {
  const SystemParams params = sim_system(0.7, 0.2, 6, 2.0, 5);
  const DelayModel model;
  const lbo::PolicyTable table =
      lbo::bind_policy({PolicyKind::AlwaysBreakout, 0}, params, model);
  SimConfig config;
  config.n_packets = 80000;
  config.warmup_packets = 8000;
  config.seed = 808;
  const lbo::SimulationReport report = lbo::simulate(params, model, table, config);

  CHECK(report.breakout_count + report.core_count == report.packets_measured);
  CHECK(report.breakout_successes <= report.breakout_count);
  CHECK(report.core_successes <= report.core_count);
  const double recomputed =
      static_cast<double>(report.breakout_successes + report.core_successes) /
      static_cast<double>(report.packets_measured);
  CHECK(std::abs(report.success_rate - recomputed) < 1e-12);
  CHECK(report.max_queue_length <= params.buffer_size);
  CHECK(report.mean_queue_length >= 0.0);
  CHECK(report.mean_queue_length <= params.buffer_size);
}

TEST_CASE("success is judged by the packet's own departure, not bulk drainage") {
  // with a one-slot deadline only packets admitted to an empty queue can
  // make it; counting aggregate departures would inflate the rate badly
  const SystemParams params = sim_system(0.9, 0.9, 1, 2.0, 5);
  const DelayModel model;
  const lbo::PolicyTable table =
      lbo::bind_policy({PolicyKind::AlwaysBreakout, 0}, params, model);
  SimConfig config;
  config.n_packets = 400000;
  config.warmup_packets = 40000;
  config.seed = 1912;
  const lbo::SimulationReport report = lbo::simulate(params, model, table, config);

  const double expected =
      oracle::policy_gain_by_power_iteration(params, model, table.actions);
  CHECK(std::abs(report.success_rate - expected) <
        std::max(3.0 * report.ci95_halfwidth, 1e-3));
}

TEST_CASE("one measured packet still yields a well-formed report") {
  const SystemParams params = sim_system(0.5, 0.5, 4, 2.0, 4);
  const lbo::PolicyTable table =
      lbo::bind_policy({PolicyKind::Myopic, 0}, params, DelayModel{});
  SimConfig config;
  config.n_packets = 11;
  config.warmup_packets = 10;
  config.seed = 4;
  const lbo::SimulationReport report = lbo::simulate(params, DelayModel{}, table, config);
  CHECK(report.packets_measured == 1);
  CHECK((report.success_rate == 0.0 || report.success_rate == 1.0));
}

TEST_CASE("bad configurations are rejected") {
  const SystemParams params = sim_system(0.5, 0.5, 4, 2.0, 4);
  const lbo::PolicyTable table =
      lbo::bind_policy({PolicyKind::Myopic, 0}, params, DelayModel{});
  SimConfig config;
  config.n_packets = 0;
  CHECK_THROWS_AS(lbo::simulate(params, DelayModel{}, table, config),
                  std::invalid_argument);
  config.n_packets = 10;
  config.warmup_packets = 10;
  CHECK_THROWS_AS(lbo::simulate(params, DelayModel{}, table, config),
                  std::invalid_argument);

  // table bound against a different buffer size
  SystemParams other = params;
  other.buffer_size = 9;
  CHECK_THROWS_AS(lbo::simulate(other, DelayModel{}, table, config),
                  std::invalid_argument);
}

TEST_CASE("empirical success tracks the analytic gain for every kind") {
  const DelayModel model;
  const lbo::PolicySpec kinds[] = {{PolicyKind::MdpOptimal, 0},
                                   {PolicyKind::Myopic, 0},
                                   {PolicyKind::AlwaysBreakout, 0},
                                   {PolicyKind::AlwaysCore, 0},
                                   {PolicyKind::FixedThreshold, 7}};
  std::uint64_t seed = 6000;
  for (double p : {0.1, 0.3, 0.5, 0.7, 0.9})
    for (double q : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      const SystemParams params = sim_system(p, q, 30, 1.0, 20);
      const lbo::SolveResult solved = lbo::solve(params, model);
      REQUIRE(solved.converged);
      for (const lbo::PolicySpec& spec : kinds) {
        const lbo::PolicyTable table = lbo::bind_policy(spec, params, model, &solved);
        const double gain = lbo::policy_gain(params, model, table.actions);
        SimConfig config;
        config.n_packets = 1000000;
        config.warmup_packets = 100000;
        config.seed = ++seed;
        const lbo::SimulationReport report = lbo::simulate(params, model, table, config);
        INFO("policy=", lbo::policy_name(spec), " p=", p, " q=", q,
             " sim=", report.success_rate, " gain=", gain);
        CHECK(std::abs(report.success_rate - gain) <
              std::max(3.0 * report.ci95_halfwidth, 1e-3));
      }
    }
}

}  // TEST_SUITE
