#pragma once

// Two-server closed forms for the mean peak age. Used as reference values
// for the general recursions.

#include <Eigen/Core>

#include "tandem_aoi/model.hpp"

namespace tandem_aoi::closed_form {

namespace detail {

template <typename Scalar>
void require_positive(Scalar lambda, Scalar mu1, Scalar mu2) {
  BasicTandemConfig<Scalar> config{lambda, Vector<Scalar>(2)};
  config.mu << mu1, mu2;
  validate(config);
}

}  // namespace detail

template <typename Scalar>
Scalar paoi_preemptive_n2(Scalar lambda, Scalar mu1, Scalar mu2) {
  detail::require_positive(lambda, mu1, mu2);
  const Scalar one(1);
  return one / lambda + one / mu1 + one / mu2 + one / (lambda + mu1) + one / (lambda + mu2) +
         one / (mu1 + mu2) - Scalar(2) / (lambda + mu1 + mu2);
}

template <typename Scalar>
Scalar paoi_nonpreemptive_n2(Scalar lambda, Scalar mu1, Scalar mu2) {
  detail::require_positive(lambda, mu1, mu2);
  const Scalar one(1);
  return one / lambda + Scalar(2) / mu1 + Scalar(2) / mu2 + one / (mu1 + mu2) -
         Scalar(2) / (lambda + mu1 + mu2);
}

// Mean inter-departure time for two servers.
template <typename Scalar>
Scalar interdeparture_n2(Scalar lambda, Scalar mu1, Scalar mu2) {
  detail::require_positive(lambda, mu1, mu2);
  const Scalar one(1);
  return one / lambda + one / mu1 + one / mu2 - one / (lambda + mu1 + mu2);
}

// Mean age of a preemptive tandem of any length: 1/lambda + sum 1/mu_i.
template <typename Scalar>
Scalar aoi_preemptive(const BasicTandemConfig<Scalar>& config) {
  validate(config);
  return Scalar(1) / config.lambda + config.mu.cwiseInverse().sum();
}

}  // namespace tandem_aoi::closed_form
