#include "lbo/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <vector>

#include "lbo/delay.hpp"
#include "lbo/rng.hpp"

namespace lbo {

void SimConfig::validate() const {
  if (n_packets < 1) throw std::invalid_argument("n_packets must be >= 1");
  if (warmup_packets < 0 || warmup_packets >= n_packets)
    throw std::invalid_argument("warmup_packets must lie in [0, n_packets)");
}

namespace {

struct QueuedPacket {
  long arrival_slot = 0;
  int batch = -1;  // -1: warmup packet, not measured
};

/// Success outcomes of consecutive packets are serially correlated
/// through the shared queue, so a plain Bernoulli interval understates
/// the estimator variance. Batch means over arrival order absorb the
/// correlation; below 200 measured packets the Bernoulli normal
/// approximation is used instead.
class BatchTally {
 public:
  explicit BatchTally(long measured_total)
      : total_(measured_total), batches_(measured_total >= 200 ? 100 : 1),
        hits_(static_cast<std::size_t>(batches_), 0),
        counts_(static_cast<std::size_t>(batches_), 0) {}

  int batch_of(long ordinal) const {
    return static_cast<int>(ordinal * batches_ / total_);
  }

  void record(int batch, bool success) {
    ++counts_[static_cast<std::size_t>(batch)];
    if (success) ++hits_[static_cast<std::size_t>(batch)];
  }

  long successes() const {
    long sum = 0;
    for (long h : hits_) sum += h;
    return sum;
  }

  double ci95_halfwidth(double rate) const {
    if (batches_ < 2) {  // Bernoulli normal approximation
      return 1.959963984540054 * std::sqrt(rate * (1.0 - rate) / static_cast<double>(total_));
    }
    double mean = 0.0;
    std::vector<double> means(static_cast<std::size_t>(batches_));
    for (std::size_t k = 0; k < means.size(); ++k) {
      means[k] = static_cast<double>(hits_[k]) / static_cast<double>(counts_[k]);
      mean += means[k];
    }
    mean /= static_cast<double>(batches_);
    double var = 0.0;
    for (double m : means) var += (m - mean) * (m - mean);
    var /= static_cast<double>(batches_ - 1);
    // Student t, 99 degrees of freedom, two-sided 95%
    return 1.9842169515086827 * std::sqrt(var / static_cast<double>(batches_));
  }

 private:
  long total_;
  long batches_;
  std::vector<long> hits_;
  std::vector<long> counts_;
};

}  // namespace

SimulationReport simulate(const SystemParams& params, const DelayModel& model,
                          const PolicyTable& table, const SimConfig& config) {
  params.validate();
  model.validate();
  config.validate();
  if (static_cast<int>(table.actions.size()) != params.buffer_size + 1)
    throw std::invalid_argument("policy table size does not match buffer_size");

  const double deadline_ms = params.deadline_ms();
  const long measured_total = config.n_packets - config.warmup_packets;
  Rng rng(config.seed);
  BatchTally tally(measured_total);

  SimulationReport report;
  report.seed = config.seed;
  report.rng_algorithm = kRngAlgorithm;

  std::deque<QueuedPacket> queue;
  double queue_len_sum = 0.0;
  long slot = 0;

  auto serve_front = [&]() {
    const QueuedPacket packet = queue.front();
    queue.pop_front();
    if (packet.batch < 0) return;
    const bool success = slot - packet.arrival_slot <= params.deadline_slots;
    ++report.breakout_count;
    if (success) ++report.breakout_successes;
    tally.record(packet.batch, success);
  };

  for (long arrivals = 0; arrivals < config.n_packets;) {
    ++slot;
    if (!queue.empty() && rng.bernoulli(params.departure_prob)) serve_front();
    if (!rng.bernoulli(params.arrival_prob)) continue;

    ++arrivals;
    const long ordinal = arrivals - config.warmup_packets - 1;
    const int batch = ordinal >= 0 ? tally.batch_of(ordinal) : -1;
    const int seen = static_cast<int>(queue.size());
    if (batch >= 0) {
      ++report.packets_measured;
      queue_len_sum += seen;
    }
    if (decide(table, seen) == Action::Breakout) {
      queue.push_back({slot, batch});
      report.max_queue_length =
          std::max(report.max_queue_length, static_cast<int>(queue.size()));
    } else {
      // delay drawn unconditionally so warmup does not shift the stream
      const double delay = core_delay_sample(model, rng);
      if (batch >= 0) {
        const bool success = delay <= deadline_ms;
        ++report.core_count;
        if (success) ++report.core_successes;
        tally.record(batch, success);
      }
    }
  }

  // Drain for one deadline of extra slots: that resolves every queued
  // packet either by departure or by passing its deadline. Arrivals are
  // no longer admitted; packets behind the measured ones cannot affect
  // them.
  for (long extra = 0; extra < params.deadline_slots && !queue.empty(); ++extra) {
    ++slot;
    if (rng.bernoulli(params.departure_prob)) serve_front();
  }
  for (const QueuedPacket& packet : queue) {
    if (packet.batch < 0) continue;
    ++report.breakout_count;  // still queued: past its deadline
    tally.record(packet.batch, false);
  }

  const double n = static_cast<double>(report.packets_measured);
  report.success_rate =
      static_cast<double>(report.breakout_successes + report.core_successes) / n;
  report.ci95_halfwidth = tally.ci95_halfwidth(report.success_rate);
  report.mean_queue_length = queue_len_sum / n;
  return report;
}

}  // namespace lbo
