#pragma once
#include <cstddef>
#include <vector>

#include "schrodlab/common.hpp"

namespace schrodlab {

// Pairwise (cascade) summation: deterministic and O(log n) error growth.
// Used for every reduction that lands in an output record, so that reruns
// are byte-identical and accumulation error stays near machine precision.
template <typename T>
T pairwise_sum(const T* data, std::size_t n) {
  if (n == 0) return T{};
  if (n <= 32) {
    T acc = data[0];
    for (std::size_t i = 1; i < n; ++i) acc += data[i];
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

template <typename T>
T pairwise_sum(const std::vector<T>& v) {
  return pairwise_sum(v.data(), v.size());
}

}  // namespace schrodlab
