#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <span>
#include <thread>
#include <vector>

namespace nonhom::parallel {

/// Global worker cap. 0 means hardware concurrency. Results never depend on
/// this value: work is split into a fixed chunk grid and reduced in chunk
/// order, so thread count only changes who computes each chunk.
void set_max_threads(int k);
int max_threads();

/// Runs fn(chunk_index, begin, end) over [0, n) split into a fixed number of
/// chunks (independent of thread count). Chunks are claimed dynamically.
void for_chunks(std::size_t n,
                const std::function<void(int, std::size_t, std::size_t)>& fn);

/// Number of chunks used by for_chunks for a range of size n.
int chunk_count(std::size_t n);

/// Pairwise (tree) summation; deterministic and more accurate than a
/// sequential fold for long sums.
double pairwise_sum(std::span<const double> v);

}  // namespace nonhom::parallel
