#pragma once

// Data-parallel building blocks: map, sort, scan, segmented scan.
//
// Every primitive has a serial reference path and an OpenMP path. The two
// produce bit-identical results as long as sort comparators are strict total
// orders (or equal elements are indistinguishable) and scanned values are
// integral. Floating point accumulations stay on the serial path.

#include <algorithm>
#include <cstddef>
#include <iterator>
#include <span>
#include <type_traits>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dhgp {

enum class Exec { Serial, Parallel };

namespace par {

inline int maxThreads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

// Calls fn(i) for i in [0, n). Iterations must write disjoint outputs.
template <class Fn>
void forEachIndex(Exec exec, std::size_t n, Fn&& fn) {
  if (exec == Exec::Serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < count; ++i) fn(static_cast<std::size_t>(i));
}

// Chunked sort followed by a tree of pairwise merges.
template <class T, class Less>
void sort(Exec exec, std::vector<T>& data, Less less) {
  const std::size_t n = data.size();
  const int threads = maxThreads();
  constexpr std::size_t kMinChunk = 1 << 12;
  if (exec == Exec::Serial || threads < 2 || n < 2 * kMinChunk) {
    std::sort(data.begin(), data.end(), less);
    return;
  }
  const std::size_t chunks = std::min<std::size_t>(static_cast<std::size_t>(threads), n / kMinChunk);
  std::vector<std::size_t> bounds(chunks + 1);
  for (std::size_t c = 0; c <= chunks; ++c) bounds[c] = n * c / chunks;

  const auto numChunks = static_cast<std::ptrdiff_t>(chunks);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < numChunks; ++c) {
    std::sort(data.begin() + bounds[c], data.begin() + bounds[c + 1], less);
  }

  for (std::size_t width = 1; width < chunks; width *= 2) {
    const auto pairs = static_cast<std::ptrdiff_t>((chunks + 2 * width - 1) / (2 * width));
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t p = 0; p < pairs; ++p) {
      const std::size_t lo = static_cast<std::size_t>(p) * 2 * width;
      const std::size_t mid = std::min(lo + width, chunks);
      const std::size_t hi = std::min(lo + 2 * width, chunks);
      if (mid < hi) {
        std::inplace_merge(data.begin() + bounds[lo], data.begin() + bounds[mid],
                           data.begin() + bounds[hi], less);
      }
    }
  }
}

// In-place exclusive prefix sum; returns the total.
template <class T>
T exclusiveScan(Exec exec, std::span<T> values) {
  static_assert(std::is_integral_v<T>, "parallel scans are restricted to exact arithmetic");
  const std::size_t n = values.size();
  const int threads = maxThreads();
  if (exec == Exec::Serial || threads < 2 || n < 4096) {
    T running{};
    for (auto& v : values) {
      const T x = v;
      v = running;
      running += x;
    }
    return running;
  }
  const std::size_t blocks = static_cast<std::size_t>(threads);
  std::vector<T> blockSum(blocks + 1, T{});
  const auto numBlocks = static_cast<std::ptrdiff_t>(blocks);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < numBlocks; ++b) {
    const std::size_t lo = n * b / blocks, hi = n * (b + 1) / blocks;
    T running{};
    for (std::size_t i = lo; i < hi; ++i) {
      const T x = values[i];
      values[i] = running;
      running += x;
    }
    blockSum[b + 1] = running;
  }
  for (std::size_t b = 1; b <= blocks; ++b) blockSum[b] += blockSum[b - 1];
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 1; b < numBlocks; ++b) {
    const std::size_t lo = n * b / blocks, hi = n * (b + 1) / blocks;
    for (std::size_t i = lo; i < hi; ++i) values[i] += blockSum[b];
  }
  return blockSum[blocks];
}

// Inclusive prefix sum restarted whenever sameSegment(i - 1, i) is false.
template <class T, class SameSegment>
void segmentedInclusiveScan(Exec exec, std::span<T> values, SameSegment sameSegment) {
  static_assert(std::is_integral_v<T>, "parallel scans are restricted to exact arithmetic");
  const std::size_t n = values.size();
  const int threads = maxThreads();
  if (exec == Exec::Serial || threads < 2 || n < 4096) {
    for (std::size_t i = 1; i < n; ++i) {
      if (sameSegment(i - 1, i)) values[i] += values[i - 1];
    }
    return;
  }
  const std::size_t blocks = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  const auto numBlocks = static_cast<std::ptrdiff_t>(blocks);
  std::vector<char> unbroken(blocks, 1);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < numBlocks; ++b) {
    const std::size_t lo = n * b / blocks, hi = n * (b + 1) / blocks;
    for (std::size_t i = lo + 1; i < hi; ++i) {
      if (sameSegment(i - 1, i)) {
        values[i] += values[i - 1];
      } else {
        unbroken[b] = 0;
      }
    }
  }
  // A carry can chain through blocks that hold a single segment, so this
  // pass is serial over blocks.
  std::vector<T> carry(blocks, T{});
  std::vector<char> hasCarry(blocks, 0);
  for (std::size_t b = 1; b < blocks; ++b) {
    const std::size_t lo = n * b / blocks;
    if (!sameSegment(lo - 1, lo)) continue;
    carry[b] = values[lo - 1];
    if (hasCarry[b - 1] && unbroken[b - 1]) carry[b] += carry[b - 1];
    hasCarry[b] = 1;
  }
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 1; b < numBlocks; ++b) {
    if (!hasCarry[b]) continue;
    const std::size_t lo = n * b / blocks, hi = n * (b + 1) / blocks;
    for (std::size_t i = lo; i < hi; ++i) {
      if (i > lo && !sameSegment(i - 1, i)) break;
      values[i] += carry[b];
    }
  }
}

}  // namespace par
}  // namespace dhgp
