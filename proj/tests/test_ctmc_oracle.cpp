#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "tandem_aoi/ctmc_oracle.hpp"
#include "tandem_aoi/nonpreemptive.hpp"
#include "tandem_aoi/preemptive.hpp"
#include "tandem_aoi/verify.hpp"
#include "test_support.hpp"

using namespace tandem_aoi;
using namespace tandem_aoi::oracle;
using Catch::Approx;
using tandem_aoi::testing::config;

namespace {

const TandemConfig kTwoThree = config(1.0, {2.0, 3.0});

}  // namespace

TEST_CASE("oracle worked values", "[oracle]") {
  CHECK(oracle_reach_probability(kTwoThree, Policy::Preemptive, {1, 0}, StatePair{2, 1}) ==
        Approx(1.0 / 6.0).margin(1e-14));
  CHECK(oracle_reach_time(kTwoThree, Policy::Preemptive, {1, 0}, StatePair{2, 1}) ==
        Approx(7.0 / 12.0).margin(1e-14));
  CHECK(oracle_reach_time(kTwoThree, Policy::NonPreemptive, {2, 1}, SuccessSet{}) ==
        Approx(31.0 / 30.0).margin(1e-14));
  CHECK(oracle_reach_probability(kTwoThree, Policy::NonPreemptive, {2, 1}, SuccessSet{}) ==
        Approx(0.6).margin(1e-14));
}

TEST_CASE("oracle identity and impossible targets", "[oracle]") {
  for (Policy policy : {Policy::Preemptive, Policy::NonPreemptive}) {
    CHECK(oracle_reach_probability(kTwoThree, policy, {2, 1}, StatePair{2, 1}) == 1.0);
    CHECK(oracle_reach_time(kTwoThree, policy, {2, 1}, StatePair{2, 1}) == 0.0);
  }
  // b never decreases along a path.
  CHECK(oracle_reach_probability(kTwoThree, Policy::Preemptive, {2, 1}, StatePair{3, 0}) == 0.0);
  CHECK_THROWS_AS(oracle_reach_time(kTwoThree, Policy::Preemptive, {2, 1}, StatePair{3, 0}),
                  UnreachableTarget);
  // Lost states cannot reach anything else.
  CHECK_THROWS_AS(oracle_reach_time(kTwoThree, Policy::Preemptive, {1, 1}, StatePair{3, 1}),
                  UnreachableTarget);
}

TEST_CASE("oracle guards", "[oracle]") {
  TandemConfig big;
  big.lambda = 1.0;
  big.mu = Eigen::VectorXd::Ones(kMaxServers + 1);
  CHECK_THROWS_AS(AbsorbingChain(big, Policy::Preemptive, SuccessSet{}), StateSpaceTooLarge);
  big.mu = Eigen::VectorXd::Ones(kMaxServers);
  CHECK_NOTHROW(AbsorbingChain(big, Policy::Preemptive, SuccessSet{}));
  CHECK_THROWS_AS(AbsorbingChain(kTwoThree, Policy::Preemptive, StatePair{4, 0}), IndexOutOfRange);
  const AbsorbingChain chain(kTwoThree, Policy::Preemptive, SuccessSet{});
  CHECK_THROWS_AS(chain.reach_probability({0, 9}), IndexOutOfRange);
}

TEST_CASE("delivery probability splits over the exit states", "[oracle][property]") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 5);
    const TandemConfig c = verify::random_config(rng, n, 0.1, 10.0);
    const auto terms = preemptive::psi_terms(c);
    CHECK(oracle_reach_probability(c, Policy::Preemptive, {1, 0}, SuccessSet{}) ==
          Approx(terms.weight.sum()).margin(1e-12));
  }
}

TEST_CASE("recursions match the oracle on every state pair", "[oracle][property]") {
  std::mt19937_64 rng(59);
  for (int n = 1; n <= 5; ++n) {
    for (int trial = 0; trial < 40; ++trial) {
      const TandemConfig c = verify::random_config(rng, n, 0.1, 10.0);
      for (Policy policy : {Policy::Preemptive, Policy::NonPreemptive}) {
        const auto d = verify::oracle_deviation(c, c, policy);
        CHECK(d.pairs > 0);
        CHECK(d.probability <= 1e-9);
        CHECK(d.time <= 1e-9);
      }
    }
  }
}

TEST_CASE("oracle deviation detects a perturbed recursion", "[oracle]") {
  TandemConfig shifted = kTwoThree;
  shifted.mu[0] *= 1.01;
  const auto d = verify::oracle_deviation(shifted, kTwoThree, Policy::Preemptive);
  CHECK(d.probability > 1e-6);
}
