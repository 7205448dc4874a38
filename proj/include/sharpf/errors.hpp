#pragma once

#include <stdexcept>
#include <string>

namespace sharpf {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : Error { using Error::Error; };
struct RangeError : Error { using Error::Error; };
struct ResourceLimitError : Error { using Error::Error; };
struct DisconnectedError : Error { using Error::Error; };
struct NotStrictly1BalancedError : Error { using Error::Error; };
struct InternalInconsistency : Error { using Error::Error; };
struct WitnessNotFound : Error { using Error::Error; };
struct NotACleanCycle : Error { using Error::Error; };
struct CounterexampleError : Error { using Error::Error; };
struct InfeasibleError : Error { using Error::Error; };
struct CapExceeded : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

}  // namespace sharpf
