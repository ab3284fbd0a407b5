#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mmn {

/// Number of weak compositions of n into k parts, C(n + k - 1, k - 1).
/// Saturates at UINT64_MAX.
std::uint64_t composition_count(int n, int k);

/// Visits every weak composition of n into k nonnegative parts in
/// lexicographic order of (x_1, ..., x_k), descending in x_1.
template <typename Fn>
void for_each_composition(int n, int k, Fn&& fn) {
  std::vector<int> x(static_cast<std::size_t>(k), 0);
  x[0] = n;
  while (true) {
    fn(std::span<const int>(x));
    // Find rightmost position j < k-1 with x[j] > 0, move one unit right and
    // gather the tail into position j+1.
    int j = k - 2;
    while (j >= 0 && x[j] == 0) --j;
    if (j < 0) return;
    --x[j];
    const int tail = x[k - 1];
    x[k - 1] = 0;
    x[j + 1] = tail + 1;
  }
}

}  // namespace mmn
