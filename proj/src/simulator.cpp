#include "tandem_aoi/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

namespace tandem_aoi::sim {

namespace {

constexpr double kNever = std::numeric_limits<double>::infinity();

// Exponential variates by inversion on a fixed 53-bit mantissa mapping, so
// results depend only on the mt19937_64 sequence.
class ExponentialSource {
 public:
  explicit ExponentialSource(std::uint64_t seed) : engine_(seed) {}

  double operator()(double rate) {
    const double u = (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    return -std::log(u) / rate;
  }

 private:
  std::mt19937_64 engine_;
};

// Per-batch sums over recorded deliveries.
struct Batch {
  std::size_t count = 0;
  double paoi = 0.0;
  double service = 0.0;
  double service_sq = 0.0;
  double gap = 0.0;
  double gap_sq = 0.0;
  double cross = 0.0;
  double area = 0.0;
};

template <typename Ratio>
SimEstimate batch_estimate(const std::vector<Batch>& batches, std::size_t n, double total,
                           double denominator, Ratio ratio) {
  SimEstimate est;
  est.n = n;
  est.mean = total / denominator;
  const auto b = static_cast<double>(batches.size());
  double sum = 0.0;
  for (const Batch& x : batches) sum += ratio(x);
  const double centre = sum / b;
  double ss = 0.0;
  for (const Batch& x : batches) {
    const double d = ratio(x) - centre;
    ss += d * d;
  }
  est.std_error = std::sqrt(ss / (b - 1.0) / b);
  return est;
}

class Tandem {
 public:
  Tandem(const TandemConfig& config, Policy policy, std::uint64_t seed)
      : policy_(policy),
        lambda_(config.lambda),
        mu_(config.mu.data(), config.mu.data() + config.mu.size()),
        held_(mu_.size()),
        due_(mu_.size(), kNever),
        draw_(seed) {
    next_arrival_ = draw_(lambda_);
  }

  // Advances to the next delivery and returns the delivered packet.
  Packet next_delivery() {
    for (;;) {
      std::size_t server = due_.size();
      double when = next_arrival_;
      for (std::size_t j = 0; j < due_.size(); ++j) {
        if (due_[j] < when) {
          when = due_[j];
          server = j;
        }
      }
      now_ = when;
      if (server == due_.size()) {
        arrive();
        continue;
      }
      Packet done = *held_[server];
      held_[server].reset();
      due_[server] = kNever;
      if (server + 1 == held_.size()) {
        ++deliveries_;
        return done;
      }
      hand_off(server + 1, done);
    }
  }

  double now() const { return now_; }

  // Nearest busy server behind the monitor (0 = source) right now.
  int busiest_behind_sink() const {
    for (std::size_t j = held_.size() - 1; j-- > 0;)
      if (held_[j]) return static_cast<int>(j) + 1;
    return 0;
  }

  std::uint64_t generated() const { return generated_; }
  std::uint64_t deliveries() const { return deliveries_; }
  std::uint64_t lost() const { return lost_; }
  std::uint64_t in_flight() const {
    return static_cast<std::uint64_t>(std::count_if(held_.begin(), held_.end(),
                                                    [](const auto& p) { return p.has_value(); }));
  }

 private:
  void arrive() {
    Packet p{now_, ++generated_, 0};
    next_arrival_ = now_ + draw_(lambda_);
    if (policy_ == Policy::NonPreemptive) {
      if (held_[0]) {
        ++lost_;
        return;
      }
      p.context = static_cast<int>(held_.size()) + 1;
      for (std::size_t j = 1; j < held_.size(); ++j) {
        if (held_[j]) {
          p.context = static_cast<int>(j) + 1;
          break;
        }
      }
    }
    hand_off(0, p);
  }

  void hand_off(std::size_t server, const Packet& p) {
    if (held_[server]) {
      // Preemption discards the packet in service; non-preemption discards
      // the newcomer.
      ++lost_;
      if (policy_ == Policy::NonPreemptive) return;
    }
    held_[server] = p;
    due_[server] = now_ + draw_(mu_[server]);
  }

  Policy policy_;
  double lambda_;
  std::vector<double> mu_;
  std::vector<std::optional<Packet>> held_;
  std::vector<double> due_;
  ExponentialSource draw_;
  double now_ = 0.0;
  double next_arrival_ = 0.0;
  std::uint64_t generated_ = 0;
  std::uint64_t deliveries_ = 0;
  std::uint64_t lost_ = 0;
};

}  // namespace

std::size_t default_warmup(std::size_t horizon) {
  return std::max<std::size_t>(1000, horizon / 100);
}

SimReport simulate(const TandemConfig& config, Policy policy, std::size_t horizon,
                   std::uint64_t seed, const SimOptions& options) {
  validate(config);
  if (horizon < kMinHorizon)
    throw HorizonTooSmall("horizon " + std::to_string(horizon) + " below minimum of " +
                          std::to_string(kMinHorizon) + " deliveries");
  if (options.batches < 2 || options.batches > horizon)
    throw Error("batch count must lie in 2..horizon");

  const int n = config.servers();
  SimReport report;
  report.policy = policy;
  report.seed = seed;
  report.horizon = horizon;
  report.warmup = options.warmup.value_or(default_warmup(horizon));
  report.batches = options.batches;

  Tandem tandem(config, policy, seed);

  // The previous delivery always exists once recording starts, so warm-up
  // must deliver at least one packet.
  Packet last = tandem.next_delivery();
  double last_time = tandem.now();
  for (std::size_t k = 1; k < report.warmup; ++k) {
    const Packet p = tandem.next_delivery();
    if (p.gen_time <= last.gen_time) ++report.out_of_order;
    last = p;
    last_time = tandem.now();
  }

  std::vector<Batch> batches(options.batches);
  std::vector<std::uint64_t> events(static_cast<std::size_t>(n), 0);
  Batch total;
  for (std::size_t k = 0; k < horizon; ++k) {
    const Packet p = tandem.next_delivery();
    const double t = tandem.now();
    if (p.gen_time <= last.gen_time) ++report.out_of_order;

    const double gap = t - last_time;
    const double service = t - p.gen_time;
    const double prev_service = last_time - last.gen_time;
    const double peak = t - last.gen_time;
    // Area under the sawtooth between the two deliveries.
    const double area = 0.5 * (peak * peak - prev_service * prev_service);

    Batch& b = batches[k * options.batches / horizon];
    for (Batch* acc : {&b, &total}) {
      ++acc->count;
      acc->paoi += peak;
      acc->service += service;
      acc->service_sq += service * service;
      acc->gap += gap;
      acc->gap_sq += gap * gap;
      acc->cross += gap * prev_service;
      acc->area += area;
    }

    if (policy == Policy::Preemptive) {
      ++events[static_cast<std::size_t>(tandem.busiest_behind_sink())];
    } else {
      ++events[static_cast<std::size_t>(p.context - 2)];
    }
    last = p;
    last_time = t;
  }

  const auto count = static_cast<double>(horizon);
  auto per_sample = [](double Batch::*field) {
    return [field](const Batch& b) { return b.*field / static_cast<double>(b.count); };
  };
  report.paoi = batch_estimate(batches, horizon, total.paoi, count, per_sample(&Batch::paoi));
  report.mean_service =
      batch_estimate(batches, horizon, total.service, count, per_sample(&Batch::service));
  report.second_moment_service =
      batch_estimate(batches, horizon, total.service_sq, count, per_sample(&Batch::service_sq));
  report.mean_interdeparture =
      batch_estimate(batches, horizon, total.gap, count, per_sample(&Batch::gap));
  report.second_moment_y =
      batch_estimate(batches, horizon, total.gap_sq, count, per_sample(&Batch::gap_sq));
  report.cross_moment_yt =
      batch_estimate(batches, horizon, total.cross, count, per_sample(&Batch::cross));
  report.aoi_time_average = batch_estimate(batches, horizon, total.area, total.gap,
                                           [](const Batch& b) { return b.area / b.gap; });
  report.aoi_from_moments = (0.5 * total.gap_sq + total.cross) / total.gap;

  report.event_frequencies.index_base = policy == Policy::Preemptive ? 0 : 2;
  report.event_frequencies.probs.resize(n);
  for (int i = 0; i < n; ++i)
    report.event_frequencies.probs[i] = static_cast<double>(events[static_cast<std::size_t>(i)]) / count;

  report.generated = tandem.generated();
  report.deliveries = tandem.deliveries();
  report.drops_or_preemptions = tandem.lost();
  report.in_flight = tandem.in_flight();
  return report;
}

DeliveryDistribution measure_event_frequencies(const TandemConfig& config, Policy policy,
                                               std::size_t horizon, std::uint64_t seed) {
  return simulate(config, policy, horizon, seed).event_frequencies;
}

}  // namespace tandem_aoi::sim
