#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace specsel {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Kept-row indicator. 1 = row participates in estimation, 0 = trimmed.
using Mask = std::vector<std::uint8_t>;

inline long mask_count(const Mask& m) {
  long n = 0;
  for (auto b : m) n += (b != 0);
  return n;
}

}  // namespace specsel
