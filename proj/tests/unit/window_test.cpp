#include <gtest/gtest.h>

#include <deque>
#include <random>

#include "fsd/error.hpp"
#include "fsd/window.hpp"

namespace fsd {
namespace {

TEST(Window, EmptySnapshot) {
  const Window w(3);
  EXPECT_TRUE(w.snapshot().empty());
  EXPECT_EQ(w.next_cluster(), 0u);
}

TEST(Window, EvictsOldestFirst) {
  Window w(2);
  w.commit(0, 0);
  w.commit(1, 1);
  w.commit(2, 1);
  const auto snap = w.snapshot();
  EXPECT_EQ(snap.rows, (std::vector<RowIndex>{1, 2}));
  EXPECT_EQ(snap.clusters, (std::vector<ClusterId>{1, 1}));
}

TEST(Window, LengthCappedAtCapacity) {
  Window w(5);
  for (RowIndex r = 0; r < 12; ++r) w.commit(r, 0);
  EXPECT_EQ(w.size(), 5u);
  EXPECT_EQ(w.entries().front().row, 7u);
}

TEST(Window, FirstCommitOpensClusterZero) {
  Window w(4);
  w.commit(9, 0);
  ASSERT_EQ(w.size(), 1u);
  EXPECT_EQ(w.entries().front(), (WindowEntry{9, 0}));
  EXPECT_EQ(w.next_cluster(), 1u);
}

TEST(Window, ExistingClusterLeavesCounter) {
  Window w(4);
  w.commit(0, 0);
  w.commit(1, 0);
  EXPECT_EQ(w.next_cluster(), 1u);
}

TEST(Window, CapacityThreeKeepsLastThree) {
  Window w(3);
  for (RowIndex r = 0; r < 4; ++r) w.commit(r, static_cast<ClusterId>(r));
  EXPECT_EQ(w.snapshot().rows, (std::vector<RowIndex>{1, 2, 3}));
}

TEST(Window, ClusterIdGapThrows) {
  Window w(3);
  w.commit(0, 0);
  try {
    w.commit(1, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kClusterIdGap);
  }
  EXPECT_EQ(w.size(), 1u);
}

TEST(Window, ZeroCapacityRejected) {
  EXPECT_THROW(Window(0), Error);
}

TEST(Window, SnapshotIsUnaffectedByLaterCommits) {
  Window w(2);
  w.commit(0, 0);
  const auto snap = w.snapshot();
  w.commit(1, 1);
  w.commit(2, 2);
  EXPECT_EQ(snap.rows, (std::vector<RowIndex>{0}));
}

TEST(Window, MatchesReferenceDequeOnRandomSequences) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t cap = 1 + rng() % 20;
    Window w(cap);
    std::deque<WindowEntry> ref;
    ClusterId issued = 0;
    const std::size_t commits = rng() % 100;
    for (std::size_t i = 0; i < commits; ++i) {
      const bool fresh = issued == 0 || rng() % 3 == 0;
      const ClusterId c = fresh ? issued : static_cast<ClusterId>(rng() % issued);
      if (fresh) ++issued;
      w.commit(i, c);
      ref.push_back({i, c});
      if (ref.size() > cap) ref.pop_front();
      ASSERT_LE(w.size(), cap);
    }
    ASSERT_TRUE(std::equal(ref.begin(), ref.end(), w.entries().begin(), w.entries().end()));
    ASSERT_EQ(w.next_cluster(), issued);
  }
}

}  // namespace
}  // namespace fsd
