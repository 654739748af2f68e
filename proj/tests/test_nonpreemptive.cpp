#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "tandem_aoi/ctmc_oracle.hpp"
#include "tandem_aoi/nonpreemptive.hpp"
#include "tandem_aoi/preemptive.hpp"
#include "tandem_aoi/verify.hpp"
#include "test_support.hpp"

using namespace tandem_aoi;
using namespace tandem_aoi::nonpreemptive;
using Catch::Approx;
using tandem_aoi::testing::config;

namespace {

constexpr double kTight = 1e-12;

const TandemConfig kTwoThree = config(1.0, {2.0, 3.0});

}  // namespace

TEST_CASE("success probability", "[nonpreemptive]") {
  for (int b = 0; b <= 3; ++b) CHECK(success_probability(kTwoThree, StatePair{3, b}) == 1.0);
  CHECK(success_probability(kTwoThree, StatePair{2, 1}) == Approx(0.6).margin(kTight));
  CHECK(success_probability(kTwoThree, StatePair{1, 1}) == 0.0);
  CHECK(success_probability(kTwoThree, StatePair{2, 2}) == 0.0);
  CHECK_THROWS_AS(success_probability(kTwoThree, StatePair{4, 1}), IndexOutOfRange);
}

TEST_CASE("success probability does not grow with lambda", "[nonpreemptive][property]") {
  const Eigen::VectorXd mu = Eigen::Vector3d(1.5, 0.8, 2.5);
  double previous = 1.0;
  for (double lambda = 0.05; lambda < 20.0; lambda *= 1.5) {
    const TandemConfig c{lambda, mu};
    const double p = success_probability(c, StatePair{2, 1});
    const double reference =
        oracle::oracle_reach_probability(c, Policy::NonPreemptive, StatePair{2, 1}, oracle::SuccessSet{});
    CHECK(p == Approx(reference).margin(1e-12));
    CHECK(p <= previous + 1e-15);
    previous = p;
  }
}

TEST_CASE("theta distribution", "[nonpreemptive]") {
  SECTION("two servers") {
    const auto theta = theta_distribution(kTwoThree);
    CHECK(theta.index_base == 2);
    CHECK(theta.at(2) == Approx(1.0 / 6.0).margin(kTight));
    CHECK(theta.at(3) == Approx(5.0 / 6.0).margin(kTight));
  }
  SECTION("single server") {
    const auto theta = theta_distribution(config(3.0, {0.5}));
    REQUIRE(theta.probs.size() == 1);
    CHECK(theta.at(2) == 1.0);
  }
  SECTION("three unit servers") {
    // Frozen from the stationary occupancy chain.
    const auto theta = theta_distribution(config(1.0, {1.0, 1.0, 1.0}));
    CHECK(theta.at(2) == Approx(0.3).margin(kTight));
    CHECK(theta.at(3) == Approx(0.3).margin(kTight));
    CHECK(theta.at(4) == Approx(0.4).margin(kTight));
  }
}

TEST_CASE("theta is a distribution for random configs", "[nonpreemptive][property]") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const auto theta = theta_distribution(verify::random_config(rng, n, 0.1, 10.0));
    CHECK(std::abs(theta.probs.sum() - 1.0) <= 1e-12);
    CHECK(theta.probs.minCoeff() >= 0.0);
  }
}

TEST_CASE("theta matches the stationary arrival context", "[nonpreemptive][property]") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const TandemConfig c = verify::random_config(rng, n, 0.1, 10.0);
    const auto theta = theta_distribution(c);
    const Eigen::VectorXd reference = tandem_aoi::testing::OccupancyChain(c).delivered_arrival_context();
    for (int i = 0; i < n; ++i) CHECK(theta.probs[i] == Approx(reference[i]).margin(1e-10));
  }
}

TEST_CASE("reach time", "[nonpreemptive]") {
  CHECK(reach_time(kTwoThree, StatePair{2, 1}) == Approx(31.0 / 30.0).margin(kTight));
  CHECK(reach_time(kTwoThree, StatePair{3, 1}) == Approx(5.0 / 6.0).margin(kTight));
  for (int a = 0; a <= 3; ++a) CHECK(reach_time(kTwoThree, StatePair{a, 3}) == 0.0);
  CHECK(reach_time(kTwoThree, StatePair{2, 2}) == 0.0);
}

TEST_CASE("mean service time", "[nonpreemptive]") {
  CHECK(mean_service(kTwoThree) == Approx(13.0 / 15.0).margin(kTight));
  CHECK(mean_service(config(2.0, {0.7})) == Approx(1.0 / 0.7).margin(kTight));
  const TandemConfig light = config(1e-6, {1.5, 0.5, 4.0});
  CHECK(mean_service(light) == Approx(1.0 / 1.5 + 1.0 / 0.5 + 1.0 / 4.0).margin(1e-4));
}

TEST_CASE("mean peak age", "[nonpreemptive]") {
  CHECK(mean_paoi(kTwoThree) == Approx(38.0 / 15.0).margin(kTight));
  CHECK(mean_paoi(config(1.0, {1.0, 1.0})) == Approx(29.0 / 6.0).margin(kTight));
}

TEST_CASE("report shares inter-departure moments with preemption", "[nonpreemptive]") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const TandemConfig c = verify::random_config(rng, n, 0.1, 10.0);
    const AgeReport np = analyze(c);
    const AgeReport p = preemptive::analyze(c);
    CHECK(np.policy == Policy::NonPreemptive);
    CHECK(np.y1 == p.y1);
    CHECK(np.y2 == p.y2);
    CHECK(np.mean_paoi == np.y1 + np.mean_service);
    CHECK_FALSE(np.mean_aoi.has_value());
    CHECK_FALSE(np.z1.has_value());
    CHECK(std::isfinite(np.mean_service));
    CHECK(np.mean_service > 0.0);
  }
}

TEST_CASE("service time trends in lambda have opposite signs", "[nonpreemptive][property]") {
  const Eigen::VectorXd mu = Eigen::Vector4d(1.5, 1.5, 1.5, 5.0);
  double prev_np = 0.0;
  double prev_p = 1e300;
  for (double lambda = 0.1; lambda <= 10.0; lambda *= 1.2) {
    const TandemConfig c{lambda, mu};
    const double np = mean_service(c);
    const double p = preemptive::mean_service(c);
    CHECK(np > prev_np);
    CHECK(p < prev_p);
    prev_np = np;
    prev_p = p;
  }
}
