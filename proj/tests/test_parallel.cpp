#include <gtest/gtest.h>

#include <atomic>
#include <stdexcept>
#include <vector>

#include "dereverb/parallel.hpp"

using namespace dereverb;

class ParallelTest : public ::testing::TestWithParam<std::size_t> {
 protected:
  void SetUp() override { set_max_threads(GetParam()); }
  void TearDown() override { set_max_threads(0); }
};

TEST_P(ParallelTest, VisitsEveryIndexOnce) {
  std::vector<int> hits(1001, 0);
  parallel_for(hits.size(), [&](std::size_t i) { ++hits[i]; });
  for (int h : hits) EXPECT_EQ(h, 1);
}

TEST_P(ParallelTest, ChunksAreContiguousAndCover) {
  std::vector<std::size_t> owner(77, 999);
  parallel_chunks(owner.size(), [&](std::size_t w, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) owner[i] = w;
  });
  for (std::size_t i = 1; i < owner.size(); ++i) {
    EXPECT_NE(owner[i], 999u);
    EXPECT_GE(owner[i], owner[i - 1]);
  }
}

TEST_P(ParallelTest, RethrowsWorkerException) {
  EXPECT_THROW(parallel_for(50,
                            [](std::size_t i) {
                              if (i == 37) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
}

TEST_P(ParallelTest, EmptyRangeIsNoop) {
  std::atomic<int> calls{0};
  parallel_for(0, [&](std::size_t) { ++calls; });
  EXPECT_EQ(calls, 0);
}

INSTANTIATE_TEST_SUITE_P(Threads, ParallelTest, ::testing::Values(1u, 2u, 4u, 7u));

TEST(Parallel, MaxThreadsZeroMeansHardware) {
  set_max_threads(3);
  EXPECT_EQ(max_threads(), 3u);
  set_max_threads(0);
  EXPECT_GE(max_threads(), 1u);
}
