#include "fsd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

namespace fsd {
namespace {

std::int64_t pairs(std::int64_t k) { return k * (k - 1) / 2; }

void require_two(const ContingencyTable& table) {
  if (table.total() < 2) {
    throw Error(ErrorCode::kTooFewItems,
                "need at least 2 labeled items, got " + std::to_string(table.total()));
  }
}

// Cluster sizes collapsed to (size, how many clusters have it).
std::map<std::int64_t, std::int64_t> size_histogram(std::span<const std::int64_t> sizes) {
  std::map<std::int64_t, std::int64_t> hist;
  for (auto s : sizes) ++hist[s];
  return hist;
}

}  // namespace

ContingencyTable ContingencyTable::from_dense(std::span<const std::size_t> pred,
                                              std::span<const std::size_t> gold) {
  if (pred.size() != gold.size()) {
    throw Error(ErrorCode::kLengthMismatch, "pred has " + std::to_string(pred.size()) +
                                                " labels, gold has " +
                                                std::to_string(gold.size()));
  }
  ContingencyTable table;
  table.total_ = static_cast<std::int64_t>(pred.size());
  if (pred.empty()) return table;

  const std::size_t k_pred = *std::max_element(pred.begin(), pred.end()) + 1;
  const std::size_t k_gold = *std::max_element(gold.begin(), gold.end()) + 1;
  table.row_sums_.assign(k_pred, 0);
  table.col_sums_.assign(k_gold, 0);

  std::unordered_map<std::uint64_t, std::int64_t> joint;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    ++table.row_sums_[pred[i]];
    ++table.col_sums_[gold[i]];
    ++joint[static_cast<std::uint64_t>(pred[i]) * k_gold + gold[i]];
  }
  table.cells_.reserve(joint.size());
  for (const auto& [key, count] : joint) {
    table.cells_.push_back({static_cast<std::size_t>(key / k_gold),
                            static_cast<std::size_t>(key % k_gold), count});
  }
  std::sort(table.cells_.begin(), table.cells_.end(), [](const Cell& a, const Cell& b) {
    return a.pred != b.pred ? a.pred < b.pred : a.gold < b.gold;
  });
  return table;
}

std::int64_t ContingencyTable::count(std::size_t pred, std::size_t gold) const {
  auto it = std::lower_bound(cells_.begin(), cells_.end(), Cell{pred, gold, 0},
                             [](const Cell& a, const Cell& b) {
                               return a.pred != b.pred ? a.pred < b.pred : a.gold < b.gold;
                             });
  return it != cells_.end() && it->pred == pred && it->gold == gold ? it->count : 0;
}

bool ContingencyTable::identical_partitions() const noexcept {
  // Same partition iff every nonzero cell covers its whole row and its whole column.
  for (const auto& c : cells_) {
    if (c.count != row_sums_[c.pred] || c.count != col_sums_[c.gold]) return false;
  }
  return true;
}

double adjusted_rand_index(const ContingencyTable& table) {
  require_two(table);
  std::int64_t index = 0;
  for (const auto& c : table.cells()) index += pairs(c.count);
  std::int64_t a = 0;
  for (auto s : table.row_sums()) a += pairs(s);
  std::int64_t b = 0;
  for (auto s : table.col_sums()) b += pairs(s);
  const std::int64_t all = pairs(table.total());

  // Max == Expected  <=>  2ab == (a + b) * C(n, 2); checked exactly.
  const __int128 lhs = static_cast<__int128>(2) * a * b;
  const __int128 rhs = static_cast<__int128>(a + b) * all;
  if (lhs == rhs) return 1.0;

  const double expected = static_cast<double>(a) * static_cast<double>(b) / static_cast<double>(all);
  const double max_index = 0.5 * static_cast<double>(a + b);
  return (static_cast<double>(index) - expected) / (max_index - expected);
}

double entropy(std::span<const std::int64_t> sizes, std::int64_t total) {
  if (total <= 0) return 0.0;
  const double n = static_cast<double>(total);
  double h = 0.0;
  for (auto s : sizes) {
    if (s <= 0) continue;
    const double p = static_cast<double>(s) / n;
    h -= p * std::log(p);
  }
  return h;
}

double mutual_information(const ContingencyTable& table) {
  const double n = static_cast<double>(table.total());
  double mi = 0.0;
  for (const auto& c : table.cells()) {
    const double nij = static_cast<double>(c.count);
    const double a = static_cast<double>(table.row_sums()[c.pred]);
    const double b = static_cast<double>(table.col_sums()[c.gold]);
    mi += nij / n * (std::log(nij) + std::log(n) - std::log(a) - std::log(b));
  }
  return std::max(mi, 0.0);
}

double expected_mutual_information(const ContingencyTable& table) {
  const std::int64_t n = table.total();
  if (n == 0) return 0.0;
  std::vector<double> log_fact(static_cast<std::size_t>(n) + 1);
  for (std::int64_t k = 0; k <= n; ++k) log_fact[k] = std::lgamma(static_cast<double>(k) + 1.0);

  const double log_n = std::log(static_cast<double>(n));
  const double dn = static_cast<double>(n);
  double emi = 0.0;
  // The expectation depends on a cell only through its row and column sums, so
  // clusters of equal size are handled once and weighted by their multiplicity.
  const auto rows = size_histogram(table.row_sums());
  const auto cols = size_histogram(table.col_sums());
  for (const auto& [a, row_mult] : rows) {
    for (const auto& [b, col_mult] : cols) {
      const double base = log_fact[a] + log_fact[b] + log_fact[n - a] + log_fact[n - b] - log_fact[n];
      const double log_ab = std::log(static_cast<double>(a)) + std::log(static_cast<double>(b));
      double cell = 0.0;
      for (std::int64_t nij = std::max<std::int64_t>(1, a + b - n); nij <= std::min(a, b); ++nij) {
        const double log_p = base - log_fact[nij] - log_fact[a - nij] - log_fact[b - nij] -
                             log_fact[n - a - b + nij];
        const double dnij = static_cast<double>(nij);
        cell += dnij / dn * (log_n + std::log(dnij) - log_ab) * std::exp(log_p);
      }
      emi += static_cast<double>(row_mult) * static_cast<double>(col_mult) * cell;
    }
  }
  return emi;
}

double adjusted_mutual_information(const ContingencyTable& table) {
  require_two(table);
  const std::size_t kp = table.pred_clusters();
  const std::size_t kg = table.gold_clusters();
  if (kp == 1 && kg == 1) return 1.0;
  // MI equals both entropies here; skip the rounding of the general formula.
  if (table.identical_partitions()) return 1.0;

  const double mi = mutual_information(table);
  const double emi = expected_mutual_information(table);
  const double h_pred = entropy(table.row_sums(), table.total());
  const double h_gold = entropy(table.col_sums(), table.total());
  const double numerator = mi - emi;
  double denominator = 0.5 * (h_pred + h_gold) - emi;

  constexpr double kTiny = 1e-12;
  if (std::abs(denominator) < kTiny) {
    if (std::abs(numerator) < kTiny) return table.identical_partitions() ? 1.0 : 0.0;
    const double eps = std::numeric_limits<double>::epsilon();
    denominator = denominator < 0 ? std::min(denominator, -eps) : std::max(denominator, eps);
  }
  return numerator / denominator;
}

Evaluation evaluate(std::span<const Assignment> assignments, std::span<const Document> corpus) {
  if (assignments.size() != corpus.size()) {
    throw Error(ErrorCode::kLengthMismatch, std::to_string(assignments.size()) +
                                                " assignments for " +
                                                std::to_string(corpus.size()) + " documents");
  }
  std::vector<ClusterId> pred;
  std::vector<std::string> gold;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!corpus[i].gold_label) continue;
    pred.push_back(assignments[i].cluster_id);
    gold.push_back(*corpus[i].gold_label);
  }
  if (pred.size() < 2) {
    throw Error(ErrorCode::kNoGoldLabels,
                std::to_string(pred.size()) + " gold-labeled document(s); need at least 2");
  }
  const auto table = build_contingency(pred, gold);
  return {adjusted_rand_index(table), adjusted_mutual_information(table), pred.size()};
}

}  // namespace fsd
