#pragma once

#include <stdexcept>

namespace radbound {

// Base class for everything thrown by this library.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad argument values: wrong shapes, out-of-range parameters, non-finite data.
struct invalid_input : error {
  using error::error;
};

// Unreadable input files: ragged CSV rows, non-numeric cells, malformed JSON.
struct parse_error : error {
  using error::error;
};

// A numeric routine failed to converge or produced an inconsistent result.
struct numeric_failure : error {
  using error::error;
};

// The requested enumeration exceeds the configured budget.
struct resource_limit : error {
  using error::error;
};

}  // namespace radbound
