#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "fsd/types.hpp"

namespace fsd::testing {

inline std::vector<std::vector<float>> random_unit_vectors(std::size_t n, std::size_t dim,
                                                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::vector<float>> out(n, std::vector<float>(dim));
  for (auto& v : out) {
    double sq = 0;
    std::vector<double> tmp(dim);
    for (auto& x : tmp) {
      x = gauss(rng);
      sq += x * x;
    }
    const double norm = std::sqrt(sq);
    for (std::size_t k = 0; k < dim; ++k) v[k] = static_cast<float>(tmp[k] / norm);
  }
  return out;
}

inline EmbeddingMatrix to_matrix(const std::vector<std::vector<float>>& rows) {
  const std::size_t dim = rows.empty() ? 0 : rows.front().size();
  std::vector<float> data;
  data.reserve(rows.size() * dim);
  for (const auto& r : rows) data.insert(data.end(), r.begin(), r.end());
  return EmbeddingMatrix(rows.size(), dim, std::move(data));
}

// Chronological corpus with documents[i].row == i and one document per second.
inline std::vector<Document> sequential_corpus(std::size_t n, Timestamp start = 1'350'000'000) {
  std::vector<Document> docs(n);
  for (std::size_t i = 0; i < n; ++i) {
    docs[i].id = std::to_string(i);
    docs[i].timestamp = start + static_cast<Timestamp>(i);
    docs[i].row = i;
  }
  return docs;
}

inline std::vector<unsigned> cluster_ids(const std::vector<Assignment>& assignments) {
  std::vector<unsigned> out;
  out.reserve(assignments.size());
  for (const auto& a : assignments) out.push_back(a.cluster_id);
  return out;
}

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::uint64_t counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("fsd_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace fsd::testing
