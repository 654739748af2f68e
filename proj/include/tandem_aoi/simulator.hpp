#pragma once

// Discrete-event simulation of the tandem under either policy. Every busy
// server owns one pending completion timer and the source owns the next
// arrival; the earliest timer fires next.

#include <cstddef>
#include <cstdint>
#include <optional>

#include "tandem_aoi/model.hpp"

namespace tandem_aoi::sim {

inline constexpr std::size_t kMinHorizon = 1000;

struct Packet {
  double gen_time = 0.0;  // arrival at server 1
  std::uint64_t id = 0;
  // Nearest busy server ahead when the packet entered server 1 (N+1 when
  // everything ahead was idle). Only tracked under non-preemption.
  int context = 0;
};

struct SimEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

struct SimOptions {
  // Deliveries discarded before statistics start; defaults to
  // max(1000, horizon / 100).
  std::optional<std::size_t> warmup;
  // Batch count for the batch-means standard errors.
  std::size_t batches = 30;
};

struct SimReport {
  Policy policy = Policy::Preemptive;
  std::uint64_t seed = 0;
  std::size_t horizon = 0;  // recorded deliveries
  std::size_t warmup = 0;
  std::size_t batches = 0;

  SimEstimate paoi;
  SimEstimate aoi_time_average;
  SimEstimate mean_service;
  SimEstimate mean_interdeparture;
  SimEstimate cross_moment_yt;
  SimEstimate second_moment_y;
  SimEstimate second_moment_service;

  // psi frequencies (index base 0) or theta frequencies (index base 2) over
  // recorded deliveries.
  DeliveryDistribution event_frequencies;

  // Time-average age rebuilt from the recorded (Y_k, T_{k-1}) moments; must
  // match aoi_time_average.mean up to rounding.
  double aoi_from_moments = 0.0;

  // Whole-run counters, warm-up included.
  std::uint64_t generated = 0;
  std::uint64_t deliveries = 0;
  std::uint64_t drops_or_preemptions = 0;
  std::uint64_t in_flight = 0;
  std::uint64_t out_of_order = 0;
};

std::size_t default_warmup(std::size_t horizon);

// Runs until `horizon` deliveries have been recorded after warm-up.
// Deterministic in (config, policy, horizon, seed, options).
SimReport simulate(const TandemConfig& config, Policy policy, std::size_t horizon,
                   std::uint64_t seed, const SimOptions& options = {});

DeliveryDistribution measure_event_frequencies(const TandemConfig& config, Policy policy,
                                               std::size_t horizon, std::uint64_t seed);

}  // namespace tandem_aoi::sim
