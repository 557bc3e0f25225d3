// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef METASUB_SUBSETS_HPP_
#define METASUB_SUBSETS_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "metasub/core.hpp"

namespace metasub {

// Number of subsets of an n-set with at most k members, saturating at
// UINT64_MAX.
inline std::uint64_t count_subsets_up_to(std::size_t n, std::size_t k) {
  std::uint64_t total = 0;
  std::uint64_t binom = 1;  // C(n, j)
  for (std::size_t j = 0; j <= k && j <= n; ++j) {
    if (j > 0) {
      const std::uint64_t num = n - j + 1;
      if (binom > UINT64_MAX / num) return UINT64_MAX;
      binom = binom * num / j;
    }
    if (total > UINT64_MAX - binom) return UINT64_MAX;
    total += binom;
  }
  return total;
}

namespace detail {

template <typename Fn>
void subsets_from(std::span<const ElementId> pool, std::size_t start,
                  std::size_t max_size, std::vector<ElementId>& current,
                  Fn& fn) {
  fn(std::span<const ElementId>(current));
  if (current.size() == max_size) return;
  for (std::size_t i = start; i < pool.size(); ++i) {
    current.push_back(pool[i]);
    subsets_from(pool, i + 1, max_size, current, fn);
    current.pop_back();
  }
}

}  // namespace detail

// Calls fn(span) for every subset of pool with at most max_size members,
// starting with the empty set, in lexicographic order of pool positions.
template <typename Fn>
void for_each_subset_up_to(std::span<const ElementId> pool,
                           std::size_t max_size, Fn&& fn) {
  std::vector<ElementId> current;
  current.reserve(max_size);
  detail::subsets_from(pool, 0, max_size, current, fn);
}

}  // namespace metasub

#endif  // METASUB_SUBSETS_HPP_
