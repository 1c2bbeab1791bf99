// Copyright 2026 The Cocite Authors.
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

#ifndef COCITE_QUANTILE_HPP_
#define COCITE_QUANTILE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace cocite {

// 1-based nearest-rank position of the q-quantile in a sorted sample of size n:
// ceil(q * n), clamped to [1, n]. A relative slack absorbs binary rounding so that
// q = 0.9, n = 10 yields 9 and not 10.
inline std::size_t nearest_rank(std::size_t n, double q) {
  const double exact = q * static_cast<double>(n);
  const double rank = std::ceil(exact - 1e-9 * std::max(1.0, exact));
  return std::clamp<std::size_t>(rank <= 0.0 ? 1 : static_cast<std::size_t>(rank), 1, n);
}

}  // namespace cocite

#endif  // COCITE_QUANTILE_HPP_
