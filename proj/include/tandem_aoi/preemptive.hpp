#pragma once

// Mean peak age, mean age and the supporting moments for a tandem of
// bufferless exponential servers where a new update replaces the one in
// service.
//
// The tagged packet is described by a state (a, b): it sits at server a and
// the nearest busy server behind it is b. From (a, b) the chain moves to
// (a+1, b) when server a finishes first and to (a, b+1) when server b
// finishes first. Reaching a == b means the tagged packet was preempted.

#include <string>
#include <utility>

#include "tandem_aoi/model.hpp"

namespace tandem_aoi::preemptive {

template <typename Scalar>
struct OneStep {
  Scalar advance{};  // toward (a+1, b)
  Scalar chase{};    // toward (a, b+1)
};

namespace detail {

template <typename Scalar>
void check_index(const Vector<Scalar>& rates, const StatePair& s) {
  const int top = static_cast<int>(rates.size()) - 1;
  if (s.a < 0 || s.b < 0 || s.a > top || s.b > top)
    throw IndexOutOfRange("state " + to_string(s) + " outside 0.." + std::to_string(top));
}

template <typename Scalar>
OneStep<Scalar> one_step(const Vector<Scalar>& rates, const StatePair& s) {
  const Scalar total = rates[s.a] + rates[s.b];
  return {rates[s.a] / total, rates[s.b] / total};
}

// Probability and conditional time after combining the two successor
// branches. Shared by the table and the plain recursion so both evaluate
// the same floating-point expression.
template <typename Scalar>
std::pair<Scalar, Scalar> combine(const Vector<Scalar>& rates, const StatePair& s, Scalar prob_advance,
                                  Scalar time_advance, Scalar prob_chase, Scalar time_chase) {
  const OneStep<Scalar> step = one_step(rates, s);
  const Scalar p1 = step.advance * prob_advance;
  const Scalar p2 = step.chase * prob_chase;
  const Scalar prob = p1 + p2;
  if (prob == Scalar(0)) return {Scalar(0), Scalar(0)};
  const Scalar hold = Scalar(1) / (rates[s.a] + rates[s.b]);
  return {prob, hold + p1 / prob * time_advance + p2 / prob * time_chase};
}

inline bool is_base_zero(const StatePair& s, const StatePair& target) {
  return s.a > target.a || s.b > target.b || s.a <= s.b;
}

template <typename Scalar>
std::pair<Scalar, Scalar> recurse(const Vector<Scalar>& rates, const StatePair& s,
                                  const StatePair& target) {
  if (s == target) return {Scalar(1), Scalar(0)};
  if (is_base_zero(s, target)) return {Scalar(0), Scalar(0)};
  const auto [pa, ta] = recurse(rates, StatePair{s.a + 1, s.b}, target);
  const auto [pc, tc] = recurse(rates, StatePair{s.a, s.b + 1}, target);
  return combine(rates, s, pa, ta, pc, tc);
}

}  // namespace detail

template <typename Scalar>
OneStep<Scalar> one_step_probs(const BasicTandemConfig<Scalar>& config, const StatePair& state) {
  const Vector<Scalar> rates = extended_rates(config);
  detail::check_index(rates, state);
  if (state.a <= state.b)
    throw InvalidState("one-step transition needs a > b, got " + to_string(state));
  return detail::one_step(rates, state);
}

// Reach probabilities and conditional reach times from every state of the
// (N+2)x(N+2) grid toward one fixed target, filled bottom-up in decreasing
// a then decreasing b.
template <typename Scalar = double>
class ReachTable {
 public:
  ReachTable(const BasicTandemConfig<Scalar>& config, const StatePair& target)
      : ReachTable(extended_rates(config), target) {}

  ReachTable(Vector<Scalar> rates, const StatePair& target)
      : rates_(std::move(rates)), target_(target) {
    detail::check_index(rates_, target_);
    const int size = static_cast<int>(rates_.size());
    prob_ = Matrix<Scalar>::Zero(size + 1, size + 1);
    time_ = Matrix<Scalar>::Zero(size + 1, size + 1);
    for (int a = size - 1; a >= 0; --a) {
      for (int b = size - 1; b >= 0; --b) {
        const StatePair s{a, b};
        if (s == target_) {
          prob_(a, b) = Scalar(1);
        } else if (!detail::is_base_zero(s, target_)) {
          const auto [p, t] = detail::combine(rates_, s, prob_(a + 1, b), time_(a + 1, b),
                                              prob_(a, b + 1), time_(a, b + 1));
          prob_(a, b) = p;
          time_(a, b) = t;
        }
      }
    }
  }

  const StatePair& target() const { return target_; }

  Scalar probability(const StatePair& from) const {
    detail::check_index(rates_, from);
    return prob_(from.a, from.b);
  }

  // Expected time to reach the target given that it is reached; zero for
  // states that cannot reach it.
  Scalar time(const StatePair& from) const {
    detail::check_index(rates_, from);
    return time_(from.a, from.b);
  }

 private:
  Vector<Scalar> rates_;
  StatePair target_;
  // One padding row and column hold the out-of-grid zeros.
  Matrix<Scalar> prob_;
  Matrix<Scalar> time_;
};

template <typename Scalar>
Scalar reach_probability(const BasicTandemConfig<Scalar>& config, const StatePair& from,
                         const StatePair& to) {
  return ReachTable<Scalar>(config, to).probability(from);
}

template <typename Scalar>
Scalar reach_time(const BasicTandemConfig<Scalar>& config, const StatePair& from,
                  const StatePair& to) {
  return ReachTable<Scalar>(config, to).time(from);
}

// Direct top-down evaluation without memoization. Exponential in N; kept for
// cross-checking the table on small systems.
template <typename Scalar>
Scalar reach_probability_recursive(const BasicTandemConfig<Scalar>& config, const StatePair& from,
                                   const StatePair& to) {
  const Vector<Scalar> rates = extended_rates(config);
  detail::check_index(rates, from);
  detail::check_index(rates, to);
  return detail::recurse(rates, from, to).first;
}

template <typename Scalar>
Scalar reach_time_recursive(const BasicTandemConfig<Scalar>& config, const StatePair& from,
                            const StatePair& to) {
  const Vector<Scalar> rates = extended_rates(config);
  detail::check_index(rates, from);
  detail::check_index(rates, to);
  return detail::recurse(rates, from, to).second;
}

// Per-event quantities for psi_i, i = 0..N-1: the tagged packet leaves
// server N while server i is the nearest busy one behind it.
template <typename Scalar = double>
struct PsiTerms {
  Vector<Scalar> weight;   // unnormalized delivery probability zeta_i
  Vector<Scalar> service;  // E[T | psi_i]
};

template <typename Scalar>
PsiTerms<Scalar> psi_terms(const BasicTandemConfig<Scalar>& config) {
  const Vector<Scalar> rates = extended_rates(config);
  const int n = config.servers();
  PsiTerms<Scalar> terms{Vector<Scalar>(n), Vector<Scalar>(n)};
  const StatePair start{1, 0};
  for (int i = 0; i < n; ++i) {
    const ReachTable<Scalar> table(rates, StatePair{n, i});
    const Scalar exit_rate = rates[n] + rates[i];
    terms.weight[i] = table.probability(start) * rates[n] / exit_rate;
    terms.service[i] = table.time(start) + Scalar(1) / exit_rate;
  }
  return terms;
}

template <typename Scalar>
BasicDeliveryDistribution<Scalar> normalize_psi(const PsiTerms<Scalar>& terms) {
  const Scalar total = terms.weight.sum();
  if (!(total > Scalar(0)))
    throw DegenerateNormalization("psi weights sum to zero");
  return {terms.weight / total, 0};
}

template <typename Scalar>
BasicDeliveryDistribution<Scalar> psi_distribution(const BasicTandemConfig<Scalar>& config) {
  return normalize_psi(psi_terms(config));
}

template <typename Scalar = double>
struct YMoments {
  Scalar y1{};
  Scalar y2{};
};

// Given psi_i the next inter-departure time is a sum of independent
// exponentials at servers i..N (the source when i == 0).
template <typename Scalar>
Vector<Scalar> conditional_y_mean(const Vector<Scalar>& rates) {
  const int n = static_cast<int>(rates.size()) - 2;
  Vector<Scalar> out(n);
  Scalar sum(0);
  for (int i = n; i >= 0; --i) {
    sum += Scalar(1) / rates[i];
    if (i < n) out[i] = sum;
  }
  return out;
}

// E[Y^2 | psi_i] = (sum 1/mu_m)^2 + sum 1/mu_m^2 over m = i..N.
template <typename Scalar>
Vector<Scalar> conditional_y_second(const Vector<Scalar>& rates) {
  const int n = static_cast<int>(rates.size()) - 2;
  Vector<Scalar> out(n);
  Scalar sum(0), squares(0);
  for (int i = n; i >= 0; --i) {
    const Scalar inv = Scalar(1) / rates[i];
    sum += inv;
    squares += inv * inv;
    if (i < n) out[i] = sum * sum + squares;
  }
  return out;
}

template <typename Scalar>
YMoments<Scalar> y_moments(const BasicTandemConfig<Scalar>& config,
                           const BasicDeliveryDistribution<Scalar>& psi) {
  const Vector<Scalar> rates = extended_rates(config);
  return {conditional_y_mean(rates).dot(psi.probs), conditional_y_second(rates).dot(psi.probs)};
}

template <typename Scalar>
YMoments<Scalar> y_moments(const BasicTandemConfig<Scalar>& config) {
  return y_moments(config, psi_distribution(config));
}

template <typename Scalar>
Scalar expected_service_given_psi(const BasicTandemConfig<Scalar>& config, int i) {
  const int n = validate(config).servers();
  if (i < 0 || i >= n)
    throw IndexOutOfRange("psi index " + std::to_string(i) + " outside 0.." + std::to_string(n - 1));
  const Vector<Scalar> rates = extended_rates(config);
  const ReachTable<Scalar> table(rates, StatePair{n, i});
  return table.time(StatePair{1, 0}) + Scalar(1) / (rates[n] + rates[i]);
}

template <typename Scalar>
BasicAgeReport<Scalar> analyze(const BasicTandemConfig<Scalar>& config) {
  const PsiTerms<Scalar> terms = psi_terms(config);
  const Vector<Scalar> rates = extended_rates(config);
  BasicAgeReport<Scalar> report;
  report.policy = Policy::Preemptive;
  report.delivery_dist = normalize_psi(terms);
  const Vector<Scalar>& psi = report.delivery_dist.probs;
  const Vector<Scalar> y_mean = conditional_y_mean(rates);

  report.y1 = y_mean.dot(psi);
  report.y2 = conditional_y_second(rates).dot(psi);
  report.mean_service = terms.service.dot(psi);
  report.mean_paoi = report.y1 + report.mean_service;
  // Y_k and T_{k-1} are independent once psi_i is fixed.
  const Scalar z1 = y_mean.cwiseProduct(terms.service).dot(psi);
  report.z1 = z1;
  report.mean_aoi = Scalar(0.5) * report.y2 / report.y1 + z1 / report.y1;
  return report;
}

template <typename Scalar>
Scalar mean_service(const BasicTandemConfig<Scalar>& config) {
  return analyze(config).mean_service;
}

template <typename Scalar>
Scalar mean_paoi(const BasicTandemConfig<Scalar>& config) {
  return analyze(config).mean_paoi;
}

template <typename Scalar>
Scalar cross_moment_z1(const BasicTandemConfig<Scalar>& config) {
  return *analyze(config).z1;
}

template <typename Scalar>
Scalar mean_aoi(const BasicTandemConfig<Scalar>& config) {
  return *analyze(config).mean_aoi;
}

}  // namespace tandem_aoi::preemptive
