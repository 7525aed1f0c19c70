#pragma once

// Independent oracles and statistics helpers shared by the unit and
// acceptance suites. These deliberately recompute quantities through
// routes different from the library implementation: series are summed
// in closed form, CDFs are integrated numerically, stationary
// distributions come from damped power iteration instead of a linear
// solve, and binomial tails are enumerated bit pattern by bit pattern.

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "lbo/delay.hpp"
#include "lbo/kernel.hpp"
#include "lbo/types.hpp"

namespace oracle {

// ---------------------------------------------------------------- quadrature

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a,
                                   double m, double b, double fa, double fm, double fb,
                                   double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson_rec(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a,
                               double b, double tol, int depth = 40) {
  if (b <= a) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson_rec(f, a, m, b, fa, fm, fb, whole, tol, depth);
}

inline double normal_pdf(double x, double mean, double std) {
  const double z = (x - mean) / std;
  return std::exp(-0.5 * z * z) / (std * 2.5066282746310005024);
}

/// Exponential * Gaussian convolution density evaluated by quadrature
/// over the exponential coordinate.
inline double exp_gauss_density_by_convolution(double t, double rate, double mean,
                                               double std) {
  const double lo = std::max(0.0, t - mean - 12.0 * std);
  const double hi = std::max(0.0, t - mean + 12.0 * std);
  if (hi <= lo) return 0.0;
  auto integrand = [&](double s) {
    return rate * std::exp(-rate * s) * normal_pdf(t - s, mean, std);
  };
  return adaptive_simpson(integrand, lo, hi, 1e-13);
}

inline double mixture_density_by_convolution(const lbo::DelayModel& m, double t) {
  return m.mixture_weight * normal_pdf(t, m.gauss_mean_ms, m.gauss_std_ms) +
         (1.0 - m.mixture_weight) *
             exp_gauss_density_by_convolution(t, m.exp_rate_per_ms, m.gauss_mean_ms,
                                              m.gauss_std_ms);
}

/// CDF values of the delay mixture at ascending points, by cumulative
/// quadrature of the convolution density from zero.
inline std::vector<double> mixture_cdf_by_quadrature(const lbo::DelayModel& m,
                                                     const std::vector<double>& points) {
  std::vector<double> cdf;
  cdf.reserve(points.size());
  double mass = 0.0, from = 0.0;
  auto density = [&](double t) { return mixture_density_by_convolution(m, t); };
  for (double t : points) {
    if (t < from) throw std::invalid_argument("points must ascend");
    mass += adaptive_simpson(density, from, t, 1e-12);
    cdf.push_back(mass);
    from = t;
  }
  return cdf;
}

// -------------------------------------------------------------- enumeration

/// Binomial upper tail P{X >= queue_len+1}, X ~ Bin(trials, q), by
/// exhaustive enumeration of all 2^trials departure patterns.
inline double binomial_tail_by_enumeration(int trials, double q, int queue_len) {
  if (trials > 24) throw std::invalid_argument("enumeration limited to 24 slots");
  double total = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << trials); ++mask) {
    const int departures = std::popcount(mask);
    if (departures < queue_len + 1) continue;
    total += std::pow(q, departures) * std::pow(1.0 - q, trials - departures);
  }
  return total;
}

/// Epoch row through the closed form of the geometric-binomial series:
/// the probability of d departures before the next arrival is
///   p (1-q) / (1-b)            d = 0
///   p q^d (1-p)^{d-1} / (1-b)^{d+1}   d >= 1,  b = (1-p)(1-q).
inline Eigen::VectorXd epoch_row_closed_form(const lbo::SystemParams& params,
                                             int post_decision_len) {
  const double p = params.arrival_prob, q = params.departure_prob;
  const double b = (1.0 - p) * (1.0 - q);
  Eigen::VectorXd row = Eigen::VectorXd::Zero(params.buffer_size + 1);
  if (post_decision_len == 0) {
    row(0) = 1.0;
    return row;
  }
  for (int d = 0; d < post_decision_len; ++d) {
    const double prob = d == 0
                            ? p * (1.0 - q) / (1.0 - b)
                            : p * std::pow(q, d) * std::pow(1.0 - p, d - 1) /
                                  std::pow(1.0 - b, d + 1);
    row(post_decision_len - d) = prob;
  }
  row(0) = 1.0 - row.sum();
  return row;
}

// -------------------------------------------------------------- statistics

inline double chi_square_critical_999(int df) {
  static const double table[] = {10.828, 13.816, 16.266, 18.467, 20.515,
                                 22.458, 24.322, 26.124, 27.877, 29.588};
  if (df >= 1 && df <= 10) return table[df - 1];
  // Wilson-Hilferty approximation, z quantile at 0.999
  const double z = 3.090232306167813;
  const double c = 2.0 / (9.0 * df);
  const double root = 1.0 - c + z * std::sqrt(c);
  return df * root * root * root;
}

struct ChiSquare {
  double statistic = 0.0;
  int df = 0;
  double critical_999 = 0.0;
  bool pass = false;
};

/// Pearson statistic with low-expectation bins pooled together.
inline ChiSquare chi_square_test(const std::vector<long>& observed,
                                 const Eigen::VectorXd& probs,
                                 double min_expected = 10.0) {
  const auto n = static_cast<double>(
      std::accumulate(observed.begin(), observed.end(), 0L));
  double stat = 0.0;
  double pooled_obs = 0.0, pooled_exp = 0.0;
  int bins = 0;
  for (int i = 0; i < probs.size(); ++i) {
    const double expected = n * probs(i);
    if (expected >= min_expected) {
      const double diff = observed[static_cast<std::size_t>(i)] - expected;
      stat += diff * diff / expected;
      ++bins;
    } else {
      pooled_obs += observed[static_cast<std::size_t>(i)];
      pooled_exp += expected;
    }
  }
  if (pooled_exp > 0.0) {
    const double diff = pooled_obs - pooled_exp;
    stat += diff * diff / pooled_exp;
    ++bins;
  }
  ChiSquare result;
  result.statistic = stat;
  result.df = std::max(1, bins - 1);
  result.critical_999 = chi_square_critical_999(result.df);
  result.pass = stat < result.critical_999;
  return result;
}

/// Kolmogorov-Smirnov distance between samples and a reference CDF.
inline double ks_distance(std::vector<double> samples,
                          const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double dist = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    dist = std::max(dist, std::abs(f - static_cast<double>(i + 1) / n));
    dist = std::max(dist, std::abs(f - static_cast<double>(i) / n));
  }
  return dist;
}

// ------------------------------------------------------- policy evaluation

/// Stationary distribution by damped power iteration (independent of
/// the library's linear-solve route).
inline Eigen::VectorXd stationary_by_power_iteration(const Eigen::MatrixXd& chain,
                                                     double tol = 1e-14,
                                                     long max_iter = 4000000) {
  const auto n = chain.rows();
  Eigen::VectorXd dist = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  const Eigen::MatrixXd flow = chain.transpose();
  for (long k = 0; k < max_iter; ++k) {
    Eigen::VectorXd next = 0.5 * dist + 0.5 * (flow * dist);
    next /= next.sum();
    const double change = (next - dist).cwiseAbs().maxCoeff();
    dist = std::move(next);
    if (change < tol) return dist;
  }
  throw std::runtime_error("power iteration did not converge");
}

/// Average reward of a fixed policy, assembled from transition_row and
/// the verified one-step success probabilities.
inline double policy_gain_by_power_iteration(const lbo::SystemParams& params,
                                             const lbo::DelayModel& model,
                                             const std::vector<lbo::Action>& policy) {
  const int states = params.buffer_size + 1;
  Eigen::MatrixXd chain(states, states);
  Eigen::VectorXd reward(states);
  const double core = lbo::core_success_prob(params, model) * params.reward_unit;
  for (int s = 0; s < states; ++s) {
    chain.row(s) = lbo::transition_row(params, s, policy[static_cast<std::size_t>(s)]);
    reward(s) = policy[static_cast<std::size_t>(s)] == lbo::Action::Breakout
                    ? lbo::backhaul_success_prob(params, s) * params.reward_unit
                    : core;
  }
  return stationary_by_power_iteration(chain).dot(reward);
}

struct PolicyEnumeration {
  double best_gain = 0.0;
  std::vector<lbo::Action> best_policy;
};

/// Best stationary deterministic policy by exhaustive enumeration; the
/// full-buffer state is always routed to the core.
inline PolicyEnumeration enumerate_policies(const lbo::SystemParams& params,
                                            const lbo::DelayModel& model) {
  const int free_states = params.buffer_size;
  if (free_states > 12) throw std::invalid_argument("state space too large");
  PolicyEnumeration best;
  best.best_gain = -1.0;
  for (std::uint32_t mask = 0; mask < (1u << free_states); ++mask) {
    std::vector<lbo::Action> policy(static_cast<std::size_t>(free_states) + 1,
                                    lbo::Action::CoreNetwork);
    for (int s = 0; s < free_states; ++s)
      if (mask & (1u << s)) policy[static_cast<std::size_t>(s)] = lbo::Action::Breakout;
    const double gain = policy_gain_by_power_iteration(params, model, policy);
    if (gain > best.best_gain) {
      best.best_gain = gain;
      best.best_policy = policy;
    }
  }
  return best;
}

}  // namespace oracle
