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

#include "pkpz/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>

namespace pkpz::parallel {

namespace {
std::atomic<unsigned> g_max_threads{0};
}

void set_max_threads(unsigned n) { g_max_threads.store(n); }

unsigned max_threads() {
  unsigned n = g_max_threads.load();
  if (n == 0) n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

namespace detail {

namespace {
thread_local bool t_inside_worker = false;
}

void run_chunked(std::int64_t n_chunks, const std::function<void(std::int64_t)>& chunk_fn) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::int64_t>(max_threads(), n_chunks));
  // Nested reductions run sequentially inside their worker.
  if (workers <= 1 || t_inside_worker) {
    for (std::int64_t c = 0; c < n_chunks; ++c) chunk_fn(c);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      t_inside_worker = true;
      for (;;) {
        const std::int64_t c = next.fetch_add(1);
        if (c >= n_chunks) return;
        try {
          chunk_fn(c);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          next.store(n_chunks);
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace detail

}  // namespace pkpz::parallel
