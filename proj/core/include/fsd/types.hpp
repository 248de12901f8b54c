#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fsd {

using RowIndex = std::size_t;
using ClusterId = std::uint32_t;
using Timestamp = std::int64_t;  // epoch seconds, UTC

// One item of the stream. `row` points into the EmbeddingMatrix that holds its vector.
struct Document {
  std::string id;
  Timestamp timestamp = 0;
  std::optional<std::string> gold_label;
  RowIndex row = 0;

  friend bool operator==(const Document&, const Document&) = default;
};

// Dense n x dim matrix of 32-bit floats, row-major. Immutable once built.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  EmbeddingMatrix(std::size_t rows, std::size_t dim);
  // Throws kDimMismatch if data.size() != rows * dim.
  EmbeddingMatrix(std::size_t rows, std::size_t dim, std::vector<float> data);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t dim() const noexcept { return dim_; }
  bool empty() const noexcept { return rows_ == 0; }

  std::span<const float> row(RowIndex r) const noexcept {
    return {data_.data() + r * dim_, dim_};
  }
  std::span<const float> data() const noexcept { return data_; }

  friend bool operator==(const EmbeddingMatrix&, const EmbeddingMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t dim_ = 0;
  std::vector<float> data_;
};

// Parameters of one clustering run.
struct FsdParams {
  double threshold = 0.5;   // cosine distance cutoff, in (0, 2]
  std::size_t window = 1;   // candidate window, in documents
  std::size_t batch = 8;    // documents per mini-batch, <= window
  std::size_t workers = 1;  // search threads

  // Throws kInvalidParams on any violated bound.
  void validate() const;
};

struct Assignment {
  RowIndex doc_row = 0;
  ClusterId cluster_id = 0;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

}  // namespace fsd
