#include "fsd/detector.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "fsd/error.hpp"
#include "fsd/vector_ops.hpp"
#include "fsd/window.hpp"
#include "thread_pool.hpp"

namespace fsd {
namespace {

// Below this many candidate rows per worker the fork-join costs more than it saves.
constexpr std::size_t kMinRowsPerTask = 128;

using Clock = std::chrono::steady_clock;

std::int64_t utc_day(Timestamp ts) {
  constexpr std::int64_t kDay = 86400;
  return ts >= 0 ? ts / kDay : -((-ts + kDay - 1) / kDay);
}

}  // namespace

void validate_corpus(std::span<const Document> corpus, const EmbeddingMatrix& matrix) {
  std::vector<bool> seen(matrix.rows(), false);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Document& doc = corpus[i];
    if (i > 0 && doc.timestamp < corpus[i - 1].timestamp) {
      throw Error(ErrorCode::kUnsortedCorpus,
                  "document " + std::to_string(i) + " (id " + doc.id + ") at " +
                      std::to_string(doc.timestamp) + " precedes its predecessor at " +
                      std::to_string(corpus[i - 1].timestamp));
    }
    if (doc.row >= matrix.rows()) {
      throw Error(ErrorCode::kInvalidCorpus, "document " + doc.id + " row " +
                                                 std::to_string(doc.row) + " outside matrix of " +
                                                 std::to_string(matrix.rows()) + " rows");
    }
    if (seen[doc.row]) {
      throw Error(ErrorCode::kInvalidCorpus, "row " + std::to_string(doc.row) + " used twice");
    }
    seen[doc.row] = true;
  }
  if (!corpus.empty() && matrix.dim() == 0) {
    throw Error(ErrorCode::kInvalidCorpus, "embedding matrix has zero dimensions");
  }
}

std::size_t default_window(std::span<const Document> corpus) {
  if (corpus.empty()) return 0;
  std::vector<std::int64_t> days;
  days.reserve(corpus.size());
  for (const auto& doc : corpus) days.push_back(utc_day(doc.timestamp));
  std::sort(days.begin(), days.end());
  const auto distinct =
      static_cast<std::size_t>(std::unique(days.begin(), days.end()) - days.begin());
  const auto avg = std::llround(static_cast<double>(corpus.size()) / static_cast<double>(distinct));
  return static_cast<std::size_t>(std::max<long long>(avg, 1));
}

FsdResult run_fsd(std::span<const Document> corpus, const EmbeddingMatrix& matrix,
                  const FsdParams& params) {
  params.validate();
  validate_corpus(corpus, matrix);
  const auto started = Clock::now();

  FsdResult result;
  result.assignments.reserve(corpus.size());

  Window window(params.window);
  detail::ThreadPool pool(params.workers);

  std::vector<RowIndex> queries;
  std::vector<Neighbor> best;
  std::vector<std::vector<Neighbor>> partial;
  std::vector<ClusterId> batch_clusters;

  for (std::size_t start = 0; start < corpus.size(); start += params.batch) {
    const std::size_t end = std::min(start + params.batch, corpus.size());
    const std::size_t len = end - start;

    queries.clear();
    for (std::size_t i = start; i < end; ++i) queries.push_back(corpus[i].row);
    best.assign(len, Neighbor{});

    // Parallel phase: every batch document against the frozen window.
    const WindowSnapshot snap = window.snapshot();
    if (!snap.empty()) {
      const std::size_t tasks =
          std::clamp<std::size_t>(snap.size() / kMinRowsPerTask, 1, pool.size());
      if (tasks == 1) {
        scan_nearest(queries, snap.rows, 0, matrix, best);
      } else {
        partial.resize(tasks);
        const std::size_t per_task = (snap.size() + tasks - 1) / tasks;
        pool.parallel_for(tasks, [&](std::size_t t) {
          const std::size_t lo = std::min(t * per_task, snap.size());
          const std::size_t hi = std::min(lo + per_task, snap.size());
          partial[t].assign(len, Neighbor{});
          scan_nearest(queries, std::span(snap.rows).subspan(lo, hi - lo), lo, matrix, partial[t]);
        });
        for (const auto& part : partial) {
          for (std::size_t q = 0; q < len; ++q) {
            if (part[q].found && closer(part[q].distance, part[q].row, best[q])) best[q] = part[q];
          }
        }
      }
      result.distance_evaluations += static_cast<std::uint64_t>(snap.size()) * len;
    }

    // Sequential phase: resolve in corpus order, widening each candidate set with
    // the batch documents already resolved.
    batch_clusters.clear();
    for (std::size_t k = 0; k < len; ++k) {
      Neighbor nearest = best[k];
      ClusterId nearest_cluster = nearest.found ? snap.clusters[nearest.position] : 0;
      const auto query = matrix.row(queries[k]);
      for (std::size_t m = 0; m < k; ++m) {
        const float d = cosine_distance(query, matrix.row(queries[m]));
        if (closer(d, queries[m], nearest)) {
          nearest = {queries[m], d, m, true};
          nearest_cluster = batch_clusters[m];
        }
      }
      result.distance_evaluations += k;

      const ClusterId cluster =
          nearest.found && nearest.distance < params.threshold ? nearest_cluster
                                                               : window.next_cluster();
      window.commit(queries[k], cluster);
      batch_clusters.push_back(cluster);
      result.assignments.push_back({queries[k], cluster});
    }
  }

  result.cluster_count = window.next_cluster();
  result.elapsed = Clock::now() - started;
  return result;
}

FsdResult run_fsd_with_b1_oracle(std::span<const Document> corpus, const EmbeddingMatrix& matrix,
                                 const FsdParams& params) {
  params.validate();
  validate_corpus(corpus, matrix);
  const auto started = Clock::now();

  struct Entry {
    RowIndex row;
    ClusterId cluster;
  };
  std::deque<Entry> recent;
  ClusterId next_id = 0;
  FsdResult result;
  result.assignments.reserve(corpus.size());

  for (const Document& doc : corpus) {
    const auto vec = matrix.row(doc.row);
    ClusterId cluster = next_id;
    if (!recent.empty()) {
      Neighbor nearest;
      ClusterId nearest_cluster = 0;
      for (const Entry& e : recent) {
        const float d = cosine_distance(vec, matrix.row(e.row));
        if (closer(d, e.row, nearest)) {
          nearest = {e.row, d, 0, true};
          nearest_cluster = e.cluster;
        }
      }
      result.distance_evaluations += recent.size();
      if (nearest.distance < params.threshold) cluster = nearest_cluster;
    }
    if (cluster == next_id) ++next_id;
    if (recent.size() >= params.window) recent.pop_front();
    recent.push_back({doc.row, cluster});
    result.assignments.push_back({doc.row, cluster});
  }

  result.cluster_count = next_id;
  result.elapsed = Clock::now() - started;
  return result;
}

}  // namespace fsd
