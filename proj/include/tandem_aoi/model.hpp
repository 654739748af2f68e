#pragma once

#include <Eigen/Core>

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "tandem_aoi/errors.hpp"

namespace tandem_aoi {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// A source with Poisson arrivals at `lambda` feeding `mu.size()` bufferless
// exponential servers in series. Server i (1-based) has rate mu[i-1].
template <typename Scalar = double>
struct BasicTandemConfig {
  Scalar lambda{};
  Vector<Scalar> mu;

  int servers() const { return static_cast<int>(mu.size()); }
};

using TandemConfig = BasicTandemConfig<double>;

enum class Policy { Preemptive, NonPreemptive };

inline std::string_view to_string(Policy policy) {
  return policy == Policy::Preemptive ? "preemptive" : "nonpreemptive";
}

inline std::optional<Policy> parse_policy(std::string_view text) {
  if (text == "preemptive") return Policy::Preemptive;
  if (text == "nonpreemptive" || text == "non-preemptive") return Policy::NonPreemptive;
  return std::nullopt;
}

// Preemptive: `a` holds the tagged packet and `b < a` is the nearest busy
// server behind it. Non-preemptive: `b` holds the tagged packet and `a > b`
// is the nearest busy server ahead. Server 0 is the source, N+1 the monitor.
struct StatePair {
  int a = 0;
  int b = 0;

  friend bool operator==(const StatePair&, const StatePair&) = default;
};

inline std::string to_string(const StatePair& s) {
  return "(" + std::to_string(s.a) + "," + std::to_string(s.b) + ")";
}

template <typename Scalar>
BasicTandemConfig<Scalar> validate(const BasicTandemConfig<Scalar>& config) {
  if (!(config.lambda > Scalar(0)) || !std::isfinite(static_cast<double>(config.lambda)))
    throw NonPositiveRate(0);
  if (config.mu.size() == 0) throw EmptyServerList();
  for (Eigen::Index i = 0; i < config.mu.size(); ++i) {
    if (!(config.mu[i] > Scalar(0)) || !std::isfinite(static_cast<double>(config.mu[i])))
      throw NonPositiveRate(static_cast<std::size_t>(i) + 1);
  }
  return config;
}

// Extended rate: lambda at the virtual source (0), mu_j at the servers,
// exactly zero at the monitor (N+1).
template <typename Scalar>
Scalar rate(const BasicTandemConfig<Scalar>& config, int j) {
  const int n = config.servers();
  if (j < 0 || j > n + 1)
    throw IndexOutOfRange("rate index " + std::to_string(j) + " outside 0.." +
                          std::to_string(n + 1));
  if (j == 0) return config.lambda;
  if (j == n + 1) return Scalar(0);
  return config.mu[j - 1];
}

// Validated rate vector of length N+2 indexed like `rate`.
template <typename Scalar>
Vector<Scalar> extended_rates(const BasicTandemConfig<Scalar>& config) {
  validate(config);
  const int n = config.servers();
  Vector<Scalar> r(n + 2);
  r[0] = config.lambda;
  r.segment(1, n) = config.mu;
  r[n + 1] = Scalar(0);
  return r;
}

// Probability vector over conditioning events; entry k is event index_base + k.
template <typename Scalar = double>
struct BasicDeliveryDistribution {
  Vector<Scalar> probs;
  int index_base = 0;

  Scalar at(int event) const {
    const int k = event - index_base;
    if (k < 0 || k >= probs.size())
      throw IndexOutOfRange("event " + std::to_string(event) + " outside distribution support");
    return probs[k];
  }
  int first_event() const { return index_base; }
  int last_event() const { return index_base + static_cast<int>(probs.size()) - 1; }
};

using DeliveryDistribution = BasicDeliveryDistribution<double>;

template <typename Scalar = double>
struct BasicAgeReport {
  Policy policy = Policy::Preemptive;
  Scalar mean_paoi{};
  std::optional<Scalar> mean_aoi;  // preemptive only
  Scalar mean_service{};           // mean system time of delivered updates
  Scalar y1{};                     // mean inter-departure time
  Scalar y2{};                     // second moment of inter-departure time
  std::optional<Scalar> z1;        // E[Y_k T_{k-1}], preemptive only
  BasicDeliveryDistribution<Scalar> delivery_dist;
};

using AgeReport = BasicAgeReport<double>;

}  // namespace tandem_aoi
