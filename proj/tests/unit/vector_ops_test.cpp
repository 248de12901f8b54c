#include <gtest/gtest.h>

#include <random>

#include "fsd/vector_ops.hpp"
#include "test_util.hpp"

namespace fsd {
namespace {

using testing::random_unit_vectors;
using testing::to_matrix;

TEST(NormalizeRows, ThreeFourFive) {
  const EmbeddingMatrix m(1, 2, {3.0f, 4.0f});
  const auto n = normalize_rows(m);
  EXPECT_FLOAT_EQ(n.row(0)[0], 0.6f);
  EXPECT_FLOAT_EQ(n.row(0)[1], 0.8f);
}

TEST(NormalizeRows, UnitRowUnchanged) {
  const auto rows = random_unit_vectors(5, 7, 3);
  const auto m = to_matrix(rows);
  const auto n = normalize_rows(m);
  for (std::size_t i = 0; i < m.data().size(); ++i) {
    EXPECT_NEAR(n.data()[i], m.data()[i], 1e-7);
  }
}

TEST(NormalizeRows, ZeroRowsAreAllReported) {
  const EmbeddingMatrix m(4, 2, {1, 0, 0, 0, 0, 1, 0, 0});
  try {
    normalize_rows(m);
    FAIL() << "expected ZeroVectorError";
  } catch (const ZeroVectorError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kZeroVector);
    EXPECT_EQ(e.rows(), (std::vector<RowIndex>{1, 3}));
  }
}

TEST(NormalizeRows, NormsWithinTolerance) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<float> u(-5, 5);
  std::vector<float> data(200 * 33);
  for (auto& x : data) x = u(rng);
  const auto n = normalize_rows(EmbeddingMatrix(200, 33, data));
  EXPECT_LT(max_norm_deviation(n), 1e-5);
}

TEST(CosineDistance, IdenticalOrthogonalAntipodal) {
  const std::vector<float> u{0.6f, 0.8f};
  const std::vector<float> v{-0.8f, 0.6f};
  const std::vector<float> w{-0.6f, -0.8f};
  EXPECT_NEAR(cosine_distance(u, u), 0.0f, 1e-7);
  EXPECT_FLOAT_EQ(cosine_distance(u, v), 1.0f);
  EXPECT_NEAR(cosine_distance(u, w), 2.0f, 1e-7);
}

TEST(CosineDistance, DimMismatchThrows) {
  const std::vector<float> a{1, 0, 0};
  const std::vector<float> b{1, 0};
  try {
    cosine_distance(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimMismatch);
  }
}

TEST(CosineDistance, SymmetricAndInRange) {
  for (std::size_t dim : {1u, 3u, 8u, 31u, 32u, 33u, 64u, 100u, 768u}) {
    const auto v = random_unit_vectors(40, dim, dim);
    for (std::size_t i = 0; i < v.size(); ++i) {
      for (std::size_t j = 0; j < v.size(); ++j) {
        const float d = cosine_distance(v[i], v[j]);
        ASSERT_EQ(d, cosine_distance(v[j], v[i]));
        ASSERT_GE(d, -1e-6f);
        ASSERT_LE(d, 2.0f + 1e-6f);
      }
    }
  }
}

TEST(Dot, MatchesDoublePrecision) {
  for (std::size_t dim : {5u, 32u, 77u, 768u, 1024u}) {
    const auto v = random_unit_vectors(10, dim, 100 + dim);
    for (std::size_t i = 1; i < v.size(); ++i) {
      double ref = 0;
      for (std::size_t k = 0; k < dim; ++k) ref += static_cast<double>(v[0][k]) * v[i][k];
      EXPECT_NEAR(dot(v[0], v[i]), ref, 1e-5) << "dim " << dim;
    }
  }
}

// Exhaustive oracle: evaluate every candidate, keep the smallest distance and on
// ties the largest row.
Neighbor brute_force(std::span<const float> q, const std::vector<RowIndex>& rows,
                     const EmbeddingMatrix& m) {
  std::vector<float> dist;
  for (RowIndex r : rows) dist.push_back(cosine_distance(q, m.row(r)));
  float best = dist[0];
  for (float d : dist) best = std::min(best, d);
  RowIndex best_row = 0;
  std::size_t best_pos = 0;
  bool any = false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (dist[i] == best && (!any || rows[i] > best_row)) {
      best_row = rows[i];
      best_pos = i;
      any = true;
    }
  }
  return {best_row, best, best_pos, true};
}

TEST(NearestInSet, Singleton) {
  const auto m = to_matrix(random_unit_vectors(3, 4, 1));
  const std::vector<RowIndex> rows{2};
  const auto nb = nearest_in_set(m.row(0), rows, m);
  EXPECT_EQ(nb.row, 2u);
  EXPECT_EQ(nb.distance, cosine_distance(m.row(0), m.row(2)));
}

TEST(NearestInSet, ExactMatch) {
  const auto m = to_matrix(random_unit_vectors(10, 6, 2));
  std::vector<RowIndex> rows(10);
  for (RowIndex i = 0; i < 10; ++i) rows[i] = i;
  const auto nb = nearest_in_set(m.row(7), rows, m);
  EXPECT_EQ(nb.row, 7u);
  EXPECT_NEAR(nb.distance, 0.0f, 1e-6);
}

TEST(NearestInSet, EmptySetThrows) {
  const auto m = to_matrix(random_unit_vectors(2, 4, 1));
  try {
    nearest_in_set(m.row(0), {}, m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptySet);
  }
}

TEST(NearestInSet, HundredRandomDim16MatchesBruteForce) {
  const auto m = to_matrix(random_unit_vectors(101, 16, 16));
  std::vector<RowIndex> rows;
  for (RowIndex i = 1; i <= 100; ++i) rows.push_back(i);
  const auto got = nearest_in_set(m.row(0), rows, m);
  const auto want = brute_force(m.row(0), rows, m);
  EXPECT_EQ(got.row, want.row);
  EXPECT_EQ(got.distance, want.distance);
}

TEST(NearestInSet, TiesGoToMostRecentRow) {
  // Rows 1, 4 and 6 are copies of the same vector.
  auto v = random_unit_vectors(8, 5, 9);
  v[4] = v[1];
  v[6] = v[1];
  const auto m = to_matrix(v);
  const std::vector<RowIndex> rows{6, 1, 4, 2, 3};
  const auto nb = nearest_in_set(m.row(1), rows, m);
  EXPECT_EQ(nb.row, 6u);
  EXPECT_EQ(nb.position, 0u);
}

TEST(NearestInSet, AgreesWithBruteForceOnRandomInstances) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + rng() % 999;
    const std::size_t dim = 1 + rng() % 64;
    auto v = random_unit_vectors(n, dim, rng());
    // Plant duplicates so ties actually occur.
    for (std::size_t k = 0; k < n / 10; ++k) v[rng() % n] = v[rng() % n];
    const auto m = to_matrix(v);
    std::vector<RowIndex> rows;
    for (RowIndex r = 0; r < n; ++r) {
      if (rng() % 3 != 0) rows.push_back(r);
    }
    if (rows.empty()) rows.push_back(0);
    const RowIndex q = rng() % n;
    const auto got = nearest_in_set(m.row(q), rows, m);
    const auto want = brute_force(m.row(q), rows, m);
    ASSERT_EQ(got.row, want.row) << "trial " << trial;
    ASSERT_EQ(got.distance, want.distance);
    ASSERT_EQ(got.position, want.position);
  }
}

TEST(ScanNearest, ChunkedScanEqualsPerQuerySearch) {
  const auto m = to_matrix(random_unit_vectors(300, 48, 21));
  std::vector<RowIndex> candidates;
  for (RowIndex r = 0; r < 290; ++r) candidates.push_back(r);
  const std::vector<RowIndex> queries{290, 291, 292, 293, 294, 295, 296, 297};

  std::vector<Neighbor> whole(queries.size());
  EXPECT_EQ(scan_nearest(queries, candidates, 0, m, whole), candidates.size() * queries.size());

  std::vector<Neighbor> merged(queries.size());
  for (std::size_t lo = 0; lo < candidates.size(); lo += 37) {
    const std::size_t len = std::min<std::size_t>(37, candidates.size() - lo);
    std::vector<Neighbor> part(queries.size());
    scan_nearest(queries, std::span(candidates).subspan(lo, len), lo, m, part);
    for (std::size_t q = 0; q < queries.size(); ++q) {
      if (closer(part[q].distance, part[q].row, merged[q])) merged[q] = part[q];
    }
  }
  for (std::size_t q = 0; q < queries.size(); ++q) {
    const auto single = nearest_in_set(m.row(queries[q]), candidates, m);
    EXPECT_EQ(whole[q].row, single.row);
    EXPECT_EQ(whole[q].distance, single.distance);
    EXPECT_EQ(whole[q].position, single.position);
    EXPECT_EQ(merged[q].row, single.row);
    EXPECT_EQ(merged[q].position, single.position);
  }
}

}  // namespace
}  // namespace fsd
