#include "tandem_aoi/ctmc_oracle.hpp"

#include <Eigen/LU>

#include <string>

namespace tandem_aoi::oracle {

AbsorbingChain::AbsorbingChain(const TandemConfig& config, Policy policy, Target target)
    : policy_(policy), target_(target) {
  rates_ = extended_rates(config);
  servers_ = config.servers();
  if (servers_ > kMaxServers)
    throw StateSpaceTooLarge("oracle supports at most " + std::to_string(kMaxServers) +
                             " servers, got " + std::to_string(servers_));
  side_ = servers_ + 2;
  if (const auto* t = std::get_if<StatePair>(&target_)) check(*t);

  slot_.assign(static_cast<std::size_t>(side_ * side_), -1);
  for (int a = 0; a < side_; ++a) {
    for (int b = 0; b < side_; ++b) {
      const StatePair s{a, b};
      if (classify(s) == Kind::Transient) {
        slot_[grid_index(s)] = static_cast<int>(transient_.size());
        transient_.push_back(s);
      }
    }
  }

  // (I - Q) h = q_hit and (I - Q) g = hold .* h, with Q the jump matrix
  // restricted to transient states.
  const auto n = static_cast<Eigen::Index>(transient_.size());
  Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd direct = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd hold(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const StatePair s = transient_[static_cast<std::size_t>(k)];
    const double total = rates_[s.a] + rates_[s.b];
    hold[k] = 1.0 / total;
    const StatePair next[2] = {{s.a + 1, s.b}, {s.a, s.b + 1}};
    const double jump[2] = {rates_[s.a] / total, rates_[s.b] / total};
    for (int j = 0; j < 2; ++j) {
      if (jump[j] == 0.0) continue;
      switch (classify(next[j])) {
        case Kind::Transient:
          system(k, slot_[grid_index(next[j])]) -= jump[j];
          break;
        case Kind::Target:
          direct[k] += jump[j];
          break;
        case Kind::Absorbing:
          break;
      }
    }
  }
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
  hit_ = lu.solve(direct);
  mass_ = lu.solve(hold.cwiseProduct(hit_));
}

void AbsorbingChain::check(const StatePair& s) const {
  if (s.a < 0 || s.b < 0 || s.a >= side_ || s.b >= side_)
    throw IndexOutOfRange("state " + to_string(s) + " outside 0.." + std::to_string(side_ - 1));
}

AbsorbingChain::Kind AbsorbingChain::classify(const StatePair& s) const {
  const int sink = servers_ + 1;
  if (const auto* t = std::get_if<StatePair>(&target_)) {
    if (s == *t) return Kind::Target;
  } else if (policy_ == Policy::Preemptive ? (s.a == sink && s.b < sink) : (s.b == sink)) {
    return Kind::Target;
  }
  // Preempted (preemptive) or dropped (non-preemptive). Under non-preemption
  // (N+1, N+1) is a completed delivery rather than a loss.
  const bool lost = policy_ == Policy::Preemptive ? s.a <= s.b : (s.a <= s.b && s.a < sink);
  if (lost) return Kind::Absorbing;
  if (rates_[s.a] + rates_[s.b] == 0.0) return Kind::Absorbing;
  return Kind::Transient;
}

double AbsorbingChain::reach_probability(const StatePair& from) const {
  check(from);
  switch (classify(from)) {
    case Kind::Target:
      return 1.0;
    case Kind::Absorbing:
      return 0.0;
    case Kind::Transient:
      break;
  }
  return hit_[slot_[grid_index(from)]];
}

double AbsorbingChain::reach_time(const StatePair& from) const {
  check(from);
  const Kind kind = classify(from);
  if (kind == Kind::Target) return 0.0;
  const double p = kind == Kind::Transient ? hit_[slot_[grid_index(from)]] : 0.0;
  if (!(p > 0.0))
    throw UnreachableTarget("target unreachable from " + to_string(from));
  return mass_[slot_[grid_index(from)]] / p;
}

double oracle_reach_probability(const TandemConfig& config, Policy policy, const StatePair& from,
                                const Target& target) {
  return AbsorbingChain(config, policy, target).reach_probability(from);
}

double oracle_reach_time(const TandemConfig& config, Policy policy, const StatePair& from,
                         const Target& target) {
  return AbsorbingChain(config, policy, target).reach_time(from);
}

}  // namespace tandem_aoi::oracle
