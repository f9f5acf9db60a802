#pragma once

#include <stdexcept>
#include <string>

namespace gsamp {

// Every throw site names the violated constraint and the offending value in
// the message; callers can rely on the type alone for dispatch.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A caller-supplied parameter is outside its documented domain.
struct invalid_parameter : error {
  using error::error;
};

// A documented operation precondition does not hold for these inputs.
struct precondition_error : error {
  using error::error;
};

// Argument lies outside the domain where accuracy certificates hold
// (e.g. complex evaluation outside the supported strip).
struct unsupported_domain : error {
  using error::error;
};

// Separation is requested for a window holding fewer than two points.
struct undefined_separation : error {
  using error::error;
};

// An iterative scheme failed to meet its accuracy target; the message
// carries the last iterates.
struct accuracy_error : error {
  using error::error;
};

// A density precondition fails (measured counting slope or Beurling
// density out of the admissible range).
struct infeasible_density : error {
  using error::error;
};

// A truncation range is too small for the requested certificate; the
// message states how to enlarge it.
struct range_too_small : error {
  using error::error;
};

// A linear system is degenerate (e.g. all-zero matrix).
struct rank_error : error {
  using error::error;
};

}  // namespace gsamp
