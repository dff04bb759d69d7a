// Copyright 2026 The Sepkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SEPKIT_PERMUTATION_H_
#define SEPKIT_PERMUTATION_H_

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

namespace sepkit {

// Visits every permutation of {0..n-1} in lexicographic order, starting
// with the identity.
template <typename Fn>
void ForEachPermutation(std::size_t n, Fn&& fn) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  do {
    fn(static_cast<const std::vector<std::size_t>&>(perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
}

// Permutation minimizing sum_i cost(i, perm[i]). Ties keep the
// lexicographically smallest permutation.
template <typename Cost>
std::vector<std::size_t> MinimizingPermutation(std::size_t n, Cost&& cost) {
  std::vector<std::size_t> best;
  double best_total = 0.0;
  ForEachPermutation(n, [&](const std::vector<std::size_t>& perm) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += cost(i, perm[i]);
    if (best.empty() || total < best_total) {
      best_total = total;
      best = perm;
    }
  });
  return best;
}

}  // namespace sepkit

#endif  // SEPKIT_PERMUTATION_H_
