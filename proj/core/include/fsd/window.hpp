#pragma once

#include <cstddef>
#include <deque>
#include <vector>

#include "fsd/types.hpp"

namespace fsd {

struct WindowEntry {
  RowIndex row = 0;
  ClusterId cluster = 0;

  friend bool operator==(const WindowEntry&, const WindowEntry&) = default;
};

// Immutable copy of a window's entries, split into parallel arrays so the row list
// can be handed straight to the distance kernels.
struct WindowSnapshot {
  std::vector<RowIndex> rows;
  std::vector<ClusterId> clusters;

  std::size_t size() const noexcept { return rows.size(); }
  bool empty() const noexcept { return rows.empty(); }
};

// FIFO of the last <= capacity committed documents plus the next unused cluster id.
// Single owner: only the driver commits; snapshots are plain values.
class Window {
 public:
  explicit Window(std::size_t capacity);

  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  ClusterId next_cluster() const noexcept { return next_cluster_; }
  const std::deque<WindowEntry>& entries() const noexcept { return entries_; }

  WindowSnapshot snapshot() const;

  // Evicts the oldest entry when full, then appends. cluster == next_cluster()
  // opens a new cluster; anything above it throws kClusterIdGap.
  void commit(RowIndex row, ClusterId cluster);

 private:
  std::size_t capacity_;
  std::deque<WindowEntry> entries_;
  ClusterId next_cluster_ = 0;
};

}  // namespace fsd
