#include "lbo/delay.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lbo {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kInvSqrtPi = 0.56418958354775628695;

/// Scaled complementary error function exp(x^2) erfc(x). The direct
/// product overflows near x = 26.6; beyond that the asymptotic
/// expansion in 1/(2x^2) is accurate to ~1e-12.
double erfcx(double x) {
  if (x < 0.0) return 2.0 * std::exp(x * x) - erfcx(-x);
  if (x < 26.0) return std::exp(x * x) * std::erfc(x);
  const double r = 1.0 / (2.0 * x * x);
  return kInvSqrtPi / x * (1.0 - r * (1.0 - 3.0 * r * (1.0 - 5.0 * r)));
}

/// CDF of an exponential(rate) + Gaussian(mean, std) sum. Written with
/// erfcx so the exponential factor never overflows for t far below the
/// Gaussian mean.
double exp_gauss_cdf(double t, double rate, double mean, double std) {
  const double z = (t - mean) / std;
  const double rs = rate * std;
  if (z - rs > 8.0) {
    // exponent is negative here, so the direct form cannot overflow
    return normal_cdf(z) - std::exp(rs * (0.5 * rs - z)) * normal_cdf(z - rs);
  }
  return normal_cdf(z) - 0.5 * std::exp(-0.5 * z * z) * erfcx((rs - z) / kSqrt2);
}

double mixture_cdf_raw(const DelayModel& m, double t) {
  const double gauss = normal_cdf((t - m.gauss_mean_ms) / m.gauss_std_ms);
  const double conv = exp_gauss_cdf(t, m.exp_rate_per_ms, m.gauss_mean_ms, m.gauss_std_ms);
  return m.mixture_weight * gauss + (1.0 - m.mixture_weight) * conv;
}

bool needs_positive_conditioning(const DelayModel& m) {
  return normal_cdf(-m.gauss_mean_ms / m.gauss_std_ms) > 1e-9;
}

}  // namespace

double normal_cdf(double z) { return 0.5 * std::erfc(-z / kSqrt2); }

double backhaul_success_prob(const SystemParams& params, QueueState queue_len) {
  if (queue_len < 0 || queue_len > params.buffer_size)
    throw std::invalid_argument("queue state outside [0, buffer_size]");
  const int trials = params.deadline_slots;
  const double q = params.departure_prob;
  if (queue_len >= trials) return 0.0;
  if (q >= 1.0) return 1.0;  // every slot departs

  // lower tail P{X <= queue_len} of Binomial(trials, q) by the pmf
  // recurrence seeded at zero successes
  double pmf = std::pow(1.0 - q, trials);
  double head = pmf;
  for (int j = 1; j <= queue_len; ++j) {
    pmf *= q / (1.0 - q) * static_cast<double>(trials - j + 1) / j;
    head += pmf;
  }
  return std::clamp(1.0 - head, 0.0, 1.0);
}

Eigen::VectorXd backhaul_success_probs(const SystemParams& params) {
  params.validate();
  Eigen::VectorXd probs(params.buffer_size + 1);
  for (int s = 0; s <= params.buffer_size; ++s)
    probs(s) = backhaul_success_prob(params, s);
  return probs;
}

double core_delay_cdf(const DelayModel& model, double t_ms) {
  if (t_ms < 0.0) return 0.0;
  const double raw = mixture_cdf_raw(model, t_ms);
  if (!needs_positive_conditioning(model))
    return std::clamp(raw, 0.0, 1.0);
  const double below_zero = mixture_cdf_raw(model, 0.0);
  return std::clamp((raw - below_zero) / (1.0 - below_zero), 0.0, 1.0);
}

double core_success_prob(const SystemParams& params, const DelayModel& model) {
  return core_delay_cdf(model, params.deadline_ms());
}

double core_delay_sample(const DelayModel& model, Rng& rng) {
  for (;;) {
    double delay = rng.normal(model.gauss_mean_ms, model.gauss_std_ms);
    if (!rng.bernoulli(model.mixture_weight))
      delay += rng.exponential(model.exp_rate_per_ms);
    if (delay >= 0.0) return delay;
  }
}

PathReward path_rewards(const SystemParams& params, const DelayModel& model,
                        QueueState queue_len) {
  PathReward reward;
  reward.breakout = backhaul_success_prob(params, queue_len) * params.reward_unit;
  reward.core = core_success_prob(params, model) * params.reward_unit;
  return reward;
}

}  // namespace lbo
