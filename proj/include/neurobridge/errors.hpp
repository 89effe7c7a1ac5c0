#pragma once

#include <stdexcept>
#include <string>

namespace nb {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonFinite : Error { using Error::Error; };
struct ConvergenceFailure : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct NotSPD : Error { using Error::Error; };
struct ShapeMismatch : Error { using Error::Error; };
struct DegenerateGraph : Error { using Error::Error; };
struct IllConditioned : Error { using Error::Error; };
struct DegenerateFeature : Error { using Error::Error; };
struct UndefinedMetric : Error { using Error::Error; };
struct GraphCycle : Error { using Error::Error; };
struct DataError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct StratificationError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace nb
