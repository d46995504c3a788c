#pragma once

#include <cstddef>
#include <functional>

namespace dlab {

/// Number of worker threads used by internal loops. Defaults to the
/// DLAB_THREADS environment variable, else hardware concurrency.
std::size_t thread_count();
void set_thread_count(std::size_t n);

/// Runs body(c) for every chunk c in [0, chunks). Callers choose the chunk
/// partition independently of the thread count and merge per-chunk results in
/// chunk order, so output is bit-identical for any number of threads.
void parallel_for_chunks(std::size_t chunks, const std::function<void(std::size_t)>& body);

/// Fixed chunking of [0, n) into pieces of at most `chunk` items.
struct ChunkRange {
  std::size_t begin;
  std::size_t end;
};
inline std::size_t chunk_count(std::size_t n, std::size_t chunk) { return (n + chunk - 1) / chunk; }
inline ChunkRange chunk_range(std::size_t c, std::size_t n, std::size_t chunk) {
  const std::size_t b = c * chunk;
  return {b, b + chunk < n ? b + chunk : n};
}

}  // namespace dlab
