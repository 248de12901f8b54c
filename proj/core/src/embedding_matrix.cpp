#include "fsd/error.hpp"
#include "fsd/types.hpp"

namespace fsd {

EmbeddingMatrix::EmbeddingMatrix(std::size_t rows, std::size_t dim)
    : rows_(rows), dim_(dim), data_(rows * dim, 0.0f) {}

EmbeddingMatrix::EmbeddingMatrix(std::size_t rows, std::size_t dim, std::vector<float> data)
    : rows_(rows), dim_(dim), data_(std::move(data)) {
  if (data_.size() != rows_ * dim_) {
    throw Error(ErrorCode::kDimMismatch,
                "matrix " + std::to_string(rows_) + "x" + std::to_string(dim_) + " given " +
                    std::to_string(data_.size()) + " values");
  }
}

}  // namespace fsd
