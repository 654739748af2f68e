#pragma once

// Brute-force reference for the reach recursions. The tagged-packet chain
// over (a, b) is written out as an absorbing Markov chain and first-passage
// quantities are obtained from dense linear solves.

#include <Eigen/Dense>

#include <variant>
#include <vector>

#include "tandem_aoi/model.hpp"

namespace tandem_aoi::oracle {

// Every state from which the tagged packet has certainly reached the monitor.
struct SuccessSet {
  friend bool operator==(const SuccessSet&, const SuccessSet&) = default;
};

using Target = std::variant<StatePair, SuccessSet>;

inline constexpr int kMaxServers = 8;

class AbsorbingChain {
 public:
  AbsorbingChain(const TandemConfig& config, Policy policy, Target target);

  // First-passage probability into the target.
  double reach_probability(const StatePair& from) const;

  // Mean first-passage time conditioned on hitting the target. Throws
  // UnreachableTarget when the target cannot be hit from `from`.
  double reach_time(const StatePair& from) const;

  int transient_states() const { return static_cast<int>(transient_.size()); }

 private:
  enum class Kind { Transient, Target, Absorbing };

  Kind classify(const StatePair& s) const;
  int grid_index(const StatePair& s) const { return s.a * side_ + s.b; }
  void check(const StatePair& s) const;

  Policy policy_;
  Target target_;
  int servers_;
  int side_;
  Eigen::VectorXd rates_;
  std::vector<int> slot_;  // grid index -> transient slot or -1
  std::vector<StatePair> transient_;
  Eigen::VectorXd hit_;   // P(hit target) per transient slot
  Eigen::VectorXd mass_;  // E[time * 1{hit}] per transient slot
};

double oracle_reach_probability(const TandemConfig& config, Policy policy, const StatePair& from,
                                const Target& target);

double oracle_reach_time(const TandemConfig& config, Policy policy, const StatePair& from,
                         const Target& target);

}  // namespace tandem_aoi::oracle
