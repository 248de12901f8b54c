#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "fsd/error.hpp"
#include "fsd/types.hpp"

namespace fsd {

// Joint counts of two labelings. Only nonzero cells are stored; count() returns 0
// for the rest.
class ContingencyTable {
 public:
  struct Cell {
    std::size_t pred = 0;
    std::size_t gold = 0;
    std::int64_t count = 0;
  };

  // Labels must already be dense indices; throws kLengthMismatch on unequal lengths.
  static ContingencyTable from_dense(std::span<const std::size_t> pred,
                                     std::span<const std::size_t> gold);

  std::size_t pred_clusters() const noexcept { return row_sums_.size(); }
  std::size_t gold_clusters() const noexcept { return col_sums_.size(); }
  std::int64_t total() const noexcept { return total_; }
  std::span<const Cell> cells() const noexcept { return cells_; }  // sorted by (pred, gold)
  std::span<const std::int64_t> row_sums() const noexcept { return row_sums_; }
  std::span<const std::int64_t> col_sums() const noexcept { return col_sums_; }
  std::int64_t count(std::size_t pred, std::size_t gold) const;

  // True when the two labelings induce the same partition.
  bool identical_partitions() const noexcept;

 private:
  std::vector<Cell> cells_;
  std::vector<std::int64_t> row_sums_;
  std::vector<std::int64_t> col_sums_;
  std::int64_t total_ = 0;
};

// Maps arbitrary hashable labels to 0, 1, 2, ... by first appearance.
template <typename Label>
std::vector<std::size_t> densify(std::span<const Label> labels) {
  std::unordered_map<Label, std::size_t> index;
  std::vector<std::size_t> out;
  out.reserve(labels.size());
  for (const auto& label : labels) {
    auto [it, inserted] = index.try_emplace(label, index.size());
    out.push_back(it->second);
  }
  return out;
}

template <typename PredLabel, typename GoldLabel>
ContingencyTable build_contingency(std::span<const PredLabel> pred,
                                   std::span<const GoldLabel> gold) {
  if (pred.size() != gold.size()) {
    throw Error(ErrorCode::kLengthMismatch, "pred has " + std::to_string(pred.size()) +
                                                " labels, gold has " +
                                                std::to_string(gold.size()));
  }
  const auto p = densify(pred);
  const auto g = densify(gold);
  return ContingencyTable::from_dense(p, g);
}

template <typename PredLabel, typename GoldLabel>
ContingencyTable build_contingency(const std::vector<PredLabel>& pred,
                                   const std::vector<GoldLabel>& gold) {
  return build_contingency(std::span<const PredLabel>(pred), std::span<const GoldLabel>(gold));
}

// Throws kTooFewItems when table.total() < 2.
double adjusted_rand_index(const ContingencyTable& table);
double adjusted_mutual_information(const ContingencyTable& table);

// Pieces of the AMI computation, in nats.
double mutual_information(const ContingencyTable& table);
double expected_mutual_information(const ContingencyTable& table);
double entropy(std::span<const std::int64_t> sizes, std::int64_t total);

struct Evaluation {
  double ari = 0.0;
  double ami = 0.0;
  std::size_t n_scored = 0;
};

// Scores assignments[i] (for corpus[i]) against the gold labels. Documents without a
// gold label are left out. Throws kNoGoldLabels if fewer than two are labeled.
Evaluation evaluate(std::span<const Assignment> assignments, std::span<const Document> corpus);

}  // namespace fsd
