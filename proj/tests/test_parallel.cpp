#include <gtest/gtest.h>

#include <omp.h>

#include <random>
#include <tuple>
#include <vector>

#include "dhgp/parallel.hpp"

namespace dhgp {
namespace {

class ParallelPrimitives : public ::testing::TestWithParam<std::size_t> {
 protected:
  void SetUp() override { omp_set_num_threads(4); }
};

TEST_P(ParallelPrimitives, SortMatchesSerial) {
  std::mt19937_64 rng(GetParam());
  std::vector<std::tuple<std::uint32_t, std::uint32_t>> data(GetParam());
  for (auto& [a, b] : data) {
    a = static_cast<std::uint32_t>(rng() % 97);
    b = static_cast<std::uint32_t>(rng());
  }
  auto serial = data;
  par::sort(Exec::Serial, serial, std::less<>{});
  par::sort(Exec::Parallel, data, std::less<>{});
  EXPECT_EQ(serial, data);
  EXPECT_TRUE(std::is_sorted(data.begin(), data.end()));
}

TEST_P(ParallelPrimitives, ExclusiveScanMatchesSerial) {
  std::mt19937_64 rng(GetParam() + 1);
  std::vector<std::int64_t> values(GetParam());
  for (auto& v : values) v = static_cast<std::int64_t>(rng() % 11) - 5;
  auto serial = values;
  const auto a = par::exclusiveScan(Exec::Serial, std::span<std::int64_t>(serial));
  const auto b = par::exclusiveScan(Exec::Parallel, std::span<std::int64_t>(values));
  EXPECT_EQ(a, b);
  EXPECT_EQ(serial, values);
}

TEST_P(ParallelPrimitives, SegmentedScanMatchesNaive) {
  std::mt19937_64 rng(GetParam() + 2);
  const std::size_t n = GetParam();
  // Long runs so that segments span whole blocks and carries chain.
  std::vector<std::uint32_t> keys(n);
  std::uint32_t key = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (rng() % 5000 == 0) ++key;
    keys[i] = key;
  }
  std::vector<std::int64_t> values(n);
  for (auto& v : values) v = static_cast<std::int64_t>(rng() % 3) - 1;

  std::vector<std::int64_t> expected(n);
  for (std::size_t i = 0; i < n; ++i) {
    expected[i] = values[i] + ((i > 0 && keys[i - 1] == keys[i]) ? expected[i - 1] : 0);
  }
  auto same = [&](std::size_t a, std::size_t b) { return keys[a] == keys[b]; };
  auto parallel = values;
  par::segmentedInclusiveScan(Exec::Parallel, std::span<std::int64_t>(parallel), same);
  EXPECT_EQ(expected, parallel);
  auto serial = values;
  par::segmentedInclusiveScan(Exec::Serial, std::span<std::int64_t>(serial), same);
  EXPECT_EQ(expected, serial);
}

INSTANTIATE_TEST_SUITE_P(Sizes, ParallelPrimitives, ::testing::Values(0, 1, 17, 5000, 40000, 123457));

TEST(ParallelForEach, VisitsEveryIndexOnce) {
  omp_set_num_threads(4);
  std::vector<int> hits(10007, 0);
  par::forEachIndex(Exec::Parallel, hits.size(), [&](std::size_t i) { ++hits[i]; });
  EXPECT_TRUE(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
}

}  // namespace
}  // namespace dhgp
