#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "fsd/error.hpp"
#include "fsd/types.hpp"

namespace fsd {

// Canonical dot product. Every distance in the library is computed by this one
// routine with a fixed summation order, so dot(a, b) == dot(b, a) bit-for-bit and
// batched scans agree exactly with one-at-a-time scans.
// Throws kDimMismatch if the spans differ in length.
float dot(std::span<const float> a, std::span<const float> b);

// 1 - dot(u, v); equals the cosine distance when u and v are unit vectors.
float cosine_distance(std::span<const float> u, std::span<const float> v);

class ZeroVectorError : public Error {
 public:
  explicit ZeroVectorError(std::vector<RowIndex> rows);
  const std::vector<RowIndex>& rows() const noexcept { return rows_; }

 private:
  std::vector<RowIndex> rows_;
};

inline constexpr double kZeroNormEpsilon = 1e-12;

// Scales every row to unit Euclidean norm. Throws ZeroVectorError listing every row
// whose norm is below kZeroNormEpsilon.
EmbeddingMatrix normalize_rows(const EmbeddingMatrix& matrix);

// Largest |norm - 1| over all rows.
double max_norm_deviation(const EmbeddingMatrix& matrix);

struct Neighbor {
  RowIndex row = 0;
  float distance = std::numeric_limits<float>::infinity();
  std::size_t position = 0;  // index of `row` in the candidate list
  bool found = false;
};

// Strict total order used by every nearest-neighbor search: smaller distance wins,
// equal distances go to the larger (more recent) row.
inline bool closer(float distance, RowIndex row, const Neighbor& best) noexcept {
  return !best.found || distance < best.distance ||
         (distance == best.distance && row > best.row);
}

// Argmin of cosine_distance(query, matrix.row(r)) over r in rows.
// Throws kEmptySet for an empty candidate list.
Neighbor nearest_in_set(std::span<const float> query, std::span<const RowIndex> rows,
                        const EmbeddingMatrix& matrix);

// Cache-blocked scan of candidates[i] for i in [0, candidates.size()) against every
// query row, folding results into best[q]. `position_offset` is added to the
// reported positions so disjoint chunks of one list can be scanned independently.
// Returns the number of distance evaluations performed.
std::size_t scan_nearest(std::span<const RowIndex> queries, std::span<const RowIndex> candidates,
                         std::size_t position_offset, const EmbeddingMatrix& matrix,
                         std::span<Neighbor> best);

}  // namespace fsd
