#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tandem_aoi {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonPositiveRate : public Error {
 public:
  // index 0 names the arrival rate, 1..N the servers.
  explicit NonPositiveRate(std::size_t index)
      : Error(index == 0 ? "non-positive rate: lambda"
                         : "non-positive rate: mu[" + std::to_string(index) + "]"),
        index_(index) {}

  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

class EmptyServerList : public Error {
 public:
  EmptyServerList() : Error("empty server list: at least one service rate is required") {}
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

class InvalidState : public Error {
 public:
  using Error::Error;
};

class DegenerateNormalization : public Error {
 public:
  using Error::Error;
};

class HorizonTooSmall : public Error {
 public:
  using Error::Error;
};

class StateSpaceTooLarge : public Error {
 public:
  using Error::Error;
};

class UnreachableTarget : public Error {
 public:
  using Error::Error;
};

}  // namespace tandem_aoi
