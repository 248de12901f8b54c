#include "fsd/window.hpp"

#include <string>

#include "fsd/error.hpp"

namespace fsd {

Window::Window(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw Error(ErrorCode::kInvalidParams, "window capacity must be positive");
}

WindowSnapshot Window::snapshot() const {
  WindowSnapshot snap;
  snap.rows.reserve(entries_.size());
  snap.clusters.reserve(entries_.size());
  for (const auto& e : entries_) {
    snap.rows.push_back(e.row);
    snap.clusters.push_back(e.cluster);
  }
  return snap;
}

void Window::commit(RowIndex row, ClusterId cluster) {
  if (cluster > next_cluster_) {
    throw Error(ErrorCode::kClusterIdGap, "cluster " + std::to_string(cluster) +
                                              " committed while next id is " +
                                              std::to_string(next_cluster_));
  }
  if (entries_.size() >= capacity_) entries_.pop_front();
  entries_.push_back({row, cluster});
  if (cluster == next_cluster_) ++next_cluster_;
}

}  // namespace fsd
