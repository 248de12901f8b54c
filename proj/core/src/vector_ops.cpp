#include "fsd/vector_ops.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#if defined(__AVX__)
#include <immintrin.h>
#endif

namespace fsd {
namespace {

// Four 8-float accumulators cover 32 consecutive elements per step; the tail is a
// scalar chain. The reduction order is fixed, so the result depends only on the
// inputs (and on whether the build uses FMA), never on the caller.
using v8f = float __attribute__((vector_size(32)));

inline v8f load8(const float* p) noexcept {
  v8f v;
  std::memcpy(&v, p, sizeof v);
  return v;
}

inline v8f mul_add(v8f a, v8f b, v8f acc) noexcept {
#if defined(__FMA__) && defined(__AVX__)
  return _mm256_fmadd_ps(a, b, acc);
#else
  return acc + a * b;
#endif
}

inline float mul_add(float a, float b, float acc) noexcept {
#if defined(__FMA__)
  return std::fmaf(a, b, acc);
#else
  return acc + a * b;
#endif
}

float dot_unchecked(const float* a, const float* b, std::size_t n) noexcept {
  v8f acc0 = {}, acc1 = {}, acc2 = {}, acc3 = {};
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    acc0 = mul_add(load8(a + i), load8(b + i), acc0);
    acc1 = mul_add(load8(a + i + 8), load8(b + i + 8), acc1);
    acc2 = mul_add(load8(a + i + 16), load8(b + i + 16), acc2);
    acc3 = mul_add(load8(a + i + 24), load8(b + i + 24), acc3);
  }
  float tail = 0.0f;
  for (; i < n; ++i) tail = mul_add(a[i], b[i], tail);
  const v8f s = (acc0 + acc1) + (acc2 + acc3);
  const float h = ((s[0] + s[1]) + (s[2] + s[3])) + ((s[4] + s[5]) + (s[6] + s[7]));
  return h + tail;
}

std::string describe_rows(const std::vector<RowIndex>& rows) {
  constexpr std::size_t kShown = 16;
  std::string out = std::to_string(rows.size()) + " zero-norm row(s):";
  for (std::size_t i = 0; i < rows.size() && i < kShown; ++i) out += " " + std::to_string(rows[i]);
  if (rows.size() > kShown) out += " ...";
  return out;
}

}  // namespace

float dot(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimMismatch,
                "dot of dims " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
  }
  return dot_unchecked(a.data(), b.data(), a.size());
}

float cosine_distance(std::span<const float> u, std::span<const float> v) {
  return 1.0f - dot(u, v);
}

ZeroVectorError::ZeroVectorError(std::vector<RowIndex> rows)
    : Error(ErrorCode::kZeroVector, describe_rows(rows)), rows_(std::move(rows)) {}

EmbeddingMatrix normalize_rows(const EmbeddingMatrix& matrix) {
  const std::size_t dim = matrix.dim();
  std::vector<float> out(matrix.data().begin(), matrix.data().end());
  std::vector<RowIndex> zero_rows;
  for (RowIndex r = 0; r < matrix.rows(); ++r) {
    float* row = out.data() + r * dim;
    double sq = 0.0;
    for (std::size_t k = 0; k < dim; ++k) sq += static_cast<double>(row[k]) * row[k];
    const double norm = std::sqrt(sq);
    if (!(norm >= kZeroNormEpsilon)) {
      zero_rows.push_back(r);
      continue;
    }
    for (std::size_t k = 0; k < dim; ++k) row[k] = static_cast<float>(row[k] / norm);
  }
  if (!zero_rows.empty()) throw ZeroVectorError(std::move(zero_rows));
  return EmbeddingMatrix(matrix.rows(), dim, std::move(out));
}

double max_norm_deviation(const EmbeddingMatrix& matrix) {
  double worst = 0.0;
  for (RowIndex r = 0; r < matrix.rows(); ++r) {
    double sq = 0.0;
    for (float x : matrix.row(r)) sq += static_cast<double>(x) * x;
    worst = std::max(worst, std::abs(std::sqrt(sq) - 1.0));
  }
  return worst;
}

Neighbor nearest_in_set(std::span<const float> query, std::span<const RowIndex> rows,
                        const EmbeddingMatrix& matrix) {
  if (rows.empty()) throw Error(ErrorCode::kEmptySet, "nearest_in_set over no candidates");
  if (query.size() != matrix.dim()) {
    throw Error(ErrorCode::kDimMismatch, "query dim " + std::to_string(query.size()) +
                                             " vs matrix dim " + std::to_string(matrix.dim()));
  }
  Neighbor best;
  for (std::size_t pos = 0; pos < rows.size(); ++pos) {
    const float d = 1.0f - dot_unchecked(query.data(), matrix.row(rows[pos]).data(), query.size());
    if (closer(d, rows[pos], best)) best = {rows[pos], d, pos, true};
  }
  return best;
}

std::size_t scan_nearest(std::span<const RowIndex> queries, std::span<const RowIndex> candidates,
                         std::size_t position_offset, const EmbeddingMatrix& matrix,
                         std::span<Neighbor> best) {
  if (best.size() != queries.size()) {
    throw Error(ErrorCode::kLengthMismatch, "scan_nearest: one result slot per query required");
  }
  const std::size_t dim = matrix.dim();
  const std::size_t row_bytes = std::max<std::size_t>(dim * sizeof(float), 1);
  // A query group sized to stay in L1 is run against a candidate block sized for L2.
  // closer() is a total order, so the visiting order does not affect the result.
  constexpr std::size_t kQueryTileBytes = 24 * 1024;
  constexpr std::size_t kCandidateTileBytes = 512 * 1024;
  const std::size_t query_tile = std::max<std::size_t>(1, kQueryTileBytes / row_bytes);
  const std::size_t cand_tile = std::max<std::size_t>(1, kCandidateTileBytes / row_bytes);
  for (std::size_t c0 = 0; c0 < candidates.size(); c0 += cand_tile) {
    const std::size_t c1 = std::min(candidates.size(), c0 + cand_tile);
    for (std::size_t q0 = 0; q0 < queries.size(); q0 += query_tile) {
      const std::size_t q1 = std::min(queries.size(), q0 + query_tile);
      for (std::size_t i = c0; i < c1; ++i) {
        const RowIndex row = candidates[i];
        const float* cand = matrix.row(row).data();
        for (std::size_t q = q0; q < q1; ++q) {
          const float d = 1.0f - dot_unchecked(matrix.row(queries[q]).data(), cand, dim);
          if (closer(d, row, best[q])) best[q] = {row, d, position_offset + i, true};
        }
      }
    }
  }
  return candidates.size() * queries.size();
}

}  // namespace fsd
