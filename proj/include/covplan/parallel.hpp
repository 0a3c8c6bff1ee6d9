#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace covplan {

// Splits [0, n) into at most `threads` contiguous chunks and runs
// fn(chunk_index, begin, end) on each, joining before return. Chunk
// boundaries depend only on (n, threads), so per-chunk results merged in
// chunk order are deterministic for any worker count. threads <= 1 runs
// inline.
template <class Fn>
void parallel_chunks(std::size_t n, unsigned threads, Fn&& fn) {
  if (n == 0) return;
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, n));
  if (workers == 1) {
    fn(std::size_t{0}, std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t base = n / workers;
  const std::size_t rem = n % workers;
  std::size_t begin = 0;
  for (std::size_t c = 0; c < workers; ++c) {
    const std::size_t len = base + (c < rem ? 1 : 0);
    const std::size_t end = begin + len;
    pool.emplace_back([&fn, c, begin, end] { fn(c, begin, end); });
    begin = end;
  }
  for (auto& t : pool) t.join();
}

}  // namespace covplan
