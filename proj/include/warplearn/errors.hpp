#pragma once

#include <stdexcept>
#include <string>

namespace warplearn {

// Malformed or inconsistent input data (files, shapes, labels).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical failure during optimization, e.g. the divergence guard tripping
// or a finite-difference probe landing on a non-smooth point.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace warplearn
