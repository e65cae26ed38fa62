#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dhgp/parallel.hpp"

namespace dhgp {

// Compressed sparse two-level set: segment s is data[offsets[s] .. offsets[s+1]).
template <class Id>
class CsrSets {
 public:
  CsrSets() : offsets_{0} {}
  CsrSets(std::vector<std::uint64_t> offsets, std::vector<Id> data)
      : offsets_(std::move(offsets)), data_(std::move(data)) {}

  std::size_t numSegments() const { return offsets_.size() - 1; }
  std::size_t totalSize() const { return data_.size(); }

  std::span<const Id> operator[](std::size_t s) const {
    return {data_.data() + offsets_[s], data_.data() + offsets_[s + 1]};
  }
  std::size_t segmentSize(std::size_t s) const { return offsets_[s + 1] - offsets_[s]; }

  const std::vector<std::uint64_t>& offsets() const { return offsets_; }
  const std::vector<Id>& data() const { return data_; }

  // offsets well-formed and, when requested, every segment strictly increasing.
  bool wellFormed(bool requireSorted) const {
    if (offsets_.empty() || offsets_.front() != 0 || offsets_.back() != data_.size()) return false;
    for (std::size_t s = 0; s + 1 < offsets_.size(); ++s) {
      if (offsets_[s] > offsets_[s + 1]) return false;
      if (!requireSorted) continue;
      for (auto i = offsets_[s] + 1; i < offsets_[s + 1]; ++i) {
        if (!(data_[i - 1] < data_[i])) return false;
      }
    }
    return true;
  }

  bool operator==(const CsrSets&) const = default;

  // Builds segments independently (fill(s, out) appends segment s into out),
  // then packs them: per-segment sizes, an exclusive scan for offsets, a scatter.
  template <class Fill>
  static CsrSets build(Exec exec, std::size_t numSegments, Fill&& fill) {
    std::vector<std::vector<Id>> staged(numSegments);
    par::forEachIndex(exec, numSegments, [&](std::size_t s) { fill(s, staged[s]); });
    std::vector<std::uint64_t> offsets(numSegments + 1, 0);
    for (std::size_t s = 0; s < numSegments; ++s) offsets[s] = staged[s].size();
    const auto total = par::exclusiveScan(exec, std::span<std::uint64_t>(offsets.data(), numSegments));
    offsets[numSegments] = total;
    std::vector<Id> data(total);
    par::forEachIndex(exec, numSegments, [&](std::size_t s) {
      std::copy(staged[s].begin(), staged[s].end(), data.begin() + static_cast<std::ptrdiff_t>(offsets[s]));
    });
    return CsrSets(std::move(offsets), std::move(data));
  }

 private:
  std::vector<std::uint64_t> offsets_;
  std::vector<Id> data_;
};

}  // namespace dhgp
