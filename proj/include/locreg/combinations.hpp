#pragma once

#include <cstdint>
#include <limits>
#include <vector>

namespace locreg {

/// C(n, k), saturating at the maximum of uint64_t.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    const std::uint64_t num = n - k + i;
    if (result > std::numeric_limits<std::uint64_t>::max() / num)
      return std::numeric_limits<std::uint64_t>::max();
    result = result * num / i;
  }
  return result;
}

/// Calls fn(const std::vector<int>&) for every k-subset of {0..n-1} in
/// lexicographic order. Stops early when fn returns false.
template <class Fn>
void for_each_combination(int n, int k, Fn&& fn) {
  if (k < 0 || k > n) return;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    if (!fn(static_cast<const std::vector<int>&>(idx))) return;
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace locreg
