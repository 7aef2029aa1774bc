#pragma once

#include <stdexcept>
#include <string>

namespace slitwave {

/// Raised when an input lies outside the domain of an operation
/// (invalid geometry, out-of-range coherence, point outside an aperture).
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a numerical procedure does not reach its tolerance within
/// its budget. Carries the best estimate reached.
class convergence_error : public std::runtime_error {
 public:
  convergence_error(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}

  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

}  // namespace slitwave
