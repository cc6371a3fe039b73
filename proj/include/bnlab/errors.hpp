#pragma once

#include <stdexcept>
#include <string>

namespace bnlab {

// Base class for all failures raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CoincidentPoints : Error {
  explicit CoincidentPoints(const std::string& m) : Error("CoincidentPoints: " + m) {}
};
struct OutsideDomain : Error {
  explicit OutsideDomain(const std::string& m) : Error("OutsideDomain: " + m) {}
};
struct ProviderNotBuilt : Error {
  explicit ProviderNotBuilt(const std::string& m) : Error("ProviderNotBuilt: " + m) {}
};
struct ExponentOutOfRange : Error {
  explicit ExponentOutOfRange(const std::string& m) : Error("ExponentOutOfRange: " + m) {}
};
struct NonSimpleLowest : Error {
  explicit NonSimpleLowest(const std::string& m) : Error("NonSimpleLowest: " + m) {}
};
struct NotPositiveDefinite : Error {
  explicit NotPositiveDefinite(const std::string& m) : Error("NotPositiveDefinite: " + m) {}
};
struct NoConvergence : Error {
  explicit NoConvergence(const std::string& m) : Error("NoConvergence: " + m) {}
};
struct LeftDomain : Error {
  explicit LeftDomain(const std::string& m) : Error("LeftDomain: " + m) {}
};
struct QuadratureNotConverged : Error {
  explicit QuadratureNotConverged(const std::string& m) : Error("QuadratureNotConverged: " + m) {}
};
struct StepUnderflow : Error {
  explicit StepUnderflow(const std::string& m) : Error("StepUnderflow: " + m) {}
};
struct NoSolution : Error {
  explicit NoSolution(const std::string& m) : Error("NoSolution: " + m) {}
};
struct InsufficientData : Error {
  explicit InsufficientData(const std::string& m) : Error("InsufficientData: " + m) {}
};
struct ConfigError : Error {
  explicit ConfigError(const std::string& m) : Error("ConfigError: " + m) {}
};

}  // namespace bnlab
