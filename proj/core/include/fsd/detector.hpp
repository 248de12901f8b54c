#pragma once

#include <chrono>
#include <cstdint>
#include <span>
#include <vector>

#include "fsd/types.hpp"

namespace fsd {

struct FsdResult {
  std::vector<Assignment> assignments;  // one per document, corpus order
  std::size_t cluster_count = 0;
  std::chrono::duration<double> elapsed{0};
  std::uint64_t distance_evaluations = 0;
};

// Mini-batch first story detection.
//
// Documents are consumed in batches of params.batch. At batch start the window is
// snapshotted and every batch document is scanned against the snapshot in parallel.
// The batch is then resolved in corpus order on the calling thread: each document
// also compares itself against the already-resolved earlier documents of its own
// batch, joins the nearest candidate's cluster if that distance is strictly below
// params.threshold, and otherwise opens a new cluster. With no candidate at all it
// opens a new cluster. Each resolved document is committed to the window (evicting
// the oldest entry once the window holds params.window documents).
//
// Output is a pure function of (corpus, matrix, threshold, window, batch); the
// worker count only changes speed. A trailing partial batch is processed like any
// other, so every document is assigned.
//
// Preconditions: matrix rows are unit-normalized; corpus[i].row indexes the matrix.
// Throws kUnsortedCorpus if timestamps decrease, kInvalidParams / kInvalidCorpus on
// bad inputs.
FsdResult run_fsd(std::span<const Document> corpus, const EmbeddingMatrix& matrix,
                  const FsdParams& params);

// Straight-line reference: one document at a time against a FIFO of the last
// params.window documents, ignoring params.batch and params.workers.
FsdResult run_fsd_with_b1_oracle(std::span<const Document> corpus, const EmbeddingMatrix& matrix,
                                 const FsdParams& params);

// Average documents per distinct UTC day, rounded, at least 1. 0 for an empty corpus.
std::size_t default_window(std::span<const Document> corpus);

// Checks chronological order and that rows are unique and in range.
void validate_corpus(std::span<const Document> corpus, const EmbeddingMatrix& matrix);

}  // namespace fsd
