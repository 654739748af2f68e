#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "tandem_aoi/nonpreemptive.hpp"
#include "tandem_aoi/preemptive.hpp"
#include "tandem_aoi/report_io.hpp"
#include "tandem_aoi/simulator.hpp"
#include "test_support.hpp"

using namespace tandem_aoi;
using namespace tandem_aoi::sim;
using Catch::Approx;
using tandem_aoi::testing::config;

namespace {

const TandemConfig kTwoThree = config(1.0, {2.0, 3.0});

bool within(const SimEstimate& e, double target, double sigmas = 3.0) {
  return std::abs(e.mean - target) <= sigmas * e.std_error;
}

double binomial_se(double p, std::size_t n) { return std::sqrt(p * (1.0 - p) / static_cast<double>(n)); }

}  // namespace

TEST_CASE("simulate rejects short horizons", "[simulator]") {
  CHECK_THROWS_AS(simulate(kTwoThree, Policy::Preemptive, 999, 1), HorizonTooSmall);
  CHECK_THROWS_AS(simulate(kTwoThree, Policy::Preemptive, 10, 1), HorizonTooSmall);
  CHECK_NOTHROW(simulate(kTwoThree, Policy::Preemptive, kMinHorizon, 1));
  SimOptions one_batch;
  one_batch.batches = 1;
  CHECK_THROWS_AS(simulate(kTwoThree, Policy::Preemptive, 5000, 1, one_batch), Error);
  CHECK_THROWS_AS(simulate(config(1.0, {}), Policy::Preemptive, 5000, 1), EmptyServerList);
}

TEST_CASE("simulation is deterministic in its seed", "[simulator]") {
  for (Policy policy : {Policy::Preemptive, Policy::NonPreemptive}) {
    const auto a = simulate(kTwoThree, policy, 20000, 99);
    const auto b = simulate(kTwoThree, policy, 20000, 99);
    const auto c = simulate(kTwoThree, policy, 20000, 100);
    CHECK(io::to_json(a, kTwoThree).dump() == io::to_json(b, kTwoThree).dump());
    CHECK(a.paoi.mean == b.paoi.mean);
    CHECK(a.paoi.mean != c.paoi.mean);
  }
}

TEST_CASE("packet accounting and delivery order", "[simulator]") {
  const TandemConfig c = config(2.5, {1.0, 3.0, 0.7});
  for (Policy policy : {Policy::Preemptive, Policy::NonPreemptive}) {
    const auto r = simulate(c, policy, 50000, 5);
    CHECK(r.generated == r.deliveries + r.drops_or_preemptions + r.in_flight);
    CHECK(r.deliveries == r.horizon + r.warmup);
    CHECK(r.out_of_order == 0);
    CHECK(r.in_flight <= 3);
    CHECK(r.drops_or_preemptions > 0);
  }
}

TEST_CASE("warm-up defaults and overrides", "[simulator]") {
  CHECK(default_warmup(1000) == 1000);
  CHECK(default_warmup(1000000) == 10000);
  SimOptions opts;
  opts.warmup = 17;
  opts.batches = 10;
  const auto r = simulate(kTwoThree, Policy::Preemptive, 4000, 2, opts);
  CHECK(r.warmup == 17);
  CHECK(r.batches == 10);
  CHECK(r.deliveries == 4017);
  CHECK(r.paoi.n == 4000);
}

TEST_CASE("sawtooth area matches the moment form", "[simulator]") {
  for (Policy policy : {Policy::Preemptive, Policy::NonPreemptive}) {
    const auto r = simulate(config(0.8, {1.2, 2.0, 5.0}), policy, 100000, 8);
    CHECK(r.aoi_time_average.mean == Approx(r.aoi_from_moments).epsilon(1e-9));
  }
}

TEST_CASE("peak age is inter-departure plus previous service", "[simulator]") {
  for (Policy policy : {Policy::Preemptive, Policy::NonPreemptive}) {
    const auto r = simulate(config(1.7, {0.9, 2.4}), policy, 200000, 13);
    const double se = std::hypot(r.mean_interdeparture.std_error, r.mean_service.std_error);
    CHECK(std::abs(r.paoi.mean - (r.mean_interdeparture.mean + r.mean_service.mean)) <= 3.0 * se);
  }
}

TEST_CASE("two-server worked scenario", "[simulator][slow]") {
  const auto pre = simulate(kTwoThree, Policy::Preemptive, 1000000, 7);
  CHECK(within(pre.paoi, 137.0 / 60.0));
  CHECK(within(pre.aoi_time_average, 11.0 / 6.0));
  CHECK(within(pre.mean_service, 37.0 / 60.0));
  CHECK(within(pre.mean_interdeparture, 5.0 / 3.0));
  CHECK(within(pre.second_moment_y, 37.0 / 9.0));
  CHECK(within(pre.cross_moment_yt, 1.0));

  const auto non = simulate(kTwoThree, Policy::NonPreemptive, 1000000, 7);
  CHECK(within(non.paoi, 38.0 / 15.0));
  CHECK(within(non.mean_service, 13.0 / 15.0));
  CHECK(within(non.mean_interdeparture, 5.0 / 3.0));
}

TEST_CASE("cross moment respects Cauchy-Schwarz", "[simulator]") {
  const TandemConfig c = config(3.0, {0.6, 1.1, 4.0});
  const auto r = simulate(c, Policy::Preemptive, 200000, 21);
  const double z1 = preemptive::cross_moment_z1(c);
  CHECK(z1 <= std::sqrt(r.second_moment_y.mean * r.second_moment_service.mean));
  CHECK(within(r.cross_moment_yt, z1));
}

TEST_CASE("event frequencies", "[simulator]") {
  const std::size_t n = 100000;
  SECTION("psi") {
    const auto f = measure_event_frequencies(kTwoThree, Policy::Preemptive, n, 3);
    CHECK(f.index_base == 0);
    for (int i = 0; i < 2; ++i) {
      const double p = i == 0 ? 5.0 / 6.0 : 1.0 / 6.0;
      CHECK(std::abs(f.at(i) - p) <= 3.0 * binomial_se(p, n));
    }
  }
  SECTION("theta") {
    const auto f = measure_event_frequencies(kTwoThree, Policy::NonPreemptive, n, 3);
    CHECK(f.index_base == 2);
    for (int i = 2; i <= 3; ++i) {
      const double p = i == 2 ? 1.0 / 6.0 : 5.0 / 6.0;
      CHECK(std::abs(f.at(i) - p) <= 3.0 * binomial_se(p, n));
    }
  }
  SECTION("single server") {
    for (Policy policy : {Policy::Preemptive, Policy::NonPreemptive}) {
      const auto f = measure_event_frequencies(config(1.0, {2.0}), policy, 5000, 3);
      REQUIRE(f.probs.size() == 1);
      CHECK(f.probs[0] == 1.0);
    }
  }
  SECTION("three servers against the recursions") {
    const TandemConfig c = config(1.0, {1.0, 1.0, 1.0});
    const std::size_t m = 200000;
    const auto psi = preemptive::psi_distribution(c);
    const auto theta = nonpreemptive::theta_distribution(c);
    const auto fp = measure_event_frequencies(c, Policy::Preemptive, m, 4);
    const auto fn = measure_event_frequencies(c, Policy::NonPreemptive, m, 4);
    for (int k = 0; k < 3; ++k) {
      CHECK(std::abs(fp.probs[k] - psi.probs[k]) <= 4.0 * binomial_se(psi.probs[k], m));
      CHECK(std::abs(fn.probs[k] - theta.probs[k]) <= 4.0 * binomial_se(theta.probs[k], m));
    }
  }
}
