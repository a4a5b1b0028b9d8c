#pragma once

#include <stdexcept>
#include <string>

namespace atpqrm {

// Failure categories shared by every module. The C API maps these one-to-one
// onto its status codes, so the numeric values are part of the ABI.
enum class ErrorCode : int {
  invalid_argument = 1,
  coupling_at_or_above_critical = 2,
  pole_proximity = 3,
  not_converged = 4,
  no_crossing = 5,
  insufficient_points = 6,
  eigensolver_no_convergence = 7,
  domain_too_small = 8,
  ambiguous_parity = 9,
  quadrature_failure = 10,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Thrown when an evaluation point sits within the pole-rejection window.
class PoleProximity : public Error {
 public:
  PoleProximity(long pole_index, double distance)
      : Error(ErrorCode::pole_proximity,
              "energy within rejection window of pole " + std::to_string(pole_index)),
        pole_index_(pole_index),
        distance_(distance) {}
  long pole_index() const noexcept { return pole_index_; }
  double distance() const noexcept { return distance_; }

 private:
  long pole_index_;
  double distance_;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw Error(ErrorCode::invalid_argument, msg);
}

}  // namespace atpqrm
