/*
   Copyright 2026 The pkpz authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

// Deterministic data-parallel reduction. Work items [0, n) are split into a
// fixed number of contiguous chunks that does not depend on the thread
// count; each chunk is summed sequentially and the partials are combined by
// a pairwise tree in chunk order. Results are therefore bit-identical for a
// fixed item ordering, whatever the number of worker threads.

#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace pkpz::parallel {

// Global cap on worker threads (CLI --jobs). 0 means hardware concurrency.
void set_max_threads(unsigned n);
unsigned max_threads();

namespace detail {
void run_chunked(std::int64_t n_chunks, const std::function<void(std::int64_t)>& chunk_fn);
}

template <typename T, typename Fn>
T sum(std::int64_t n_items, Fn&& item_fn, std::int64_t n_chunks = 256) {
  if (n_items <= 0) return T{};
  if (n_chunks > n_items) n_chunks = n_items;
  std::vector<T> partial(static_cast<std::size_t>(n_chunks), T{});
  const std::int64_t per = (n_items + n_chunks - 1) / n_chunks;
  detail::run_chunked(n_chunks, [&](std::int64_t c) {
    const std::int64_t lo = c * per;
    const std::int64_t hi = std::min(n_items, lo + per);
    T acc{};
    for (std::int64_t i = lo; i < hi; ++i) acc += item_fn(i);
    partial[static_cast<std::size_t>(c)] = acc;
  });
  // Pairwise tree over the fixed chunk order.
  for (std::int64_t step = 1; step < n_chunks; step *= 2)
    for (std::int64_t i = 0; i + step < n_chunks; i += 2 * step)
      partial[static_cast<std::size_t>(i)] += partial[static_cast<std::size_t>(i + step)];
  return partial[0];
}

}  // namespace pkpz::parallel
