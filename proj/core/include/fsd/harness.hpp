#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "fsd/ingest.hpp"
#include "fsd/types.hpp"

namespace fsd {

// Planted-event corpus: each event is a random unit center on the sphere, each of
// its documents the normalized center plus isotropic Gaussian noise, timestamped
// uniformly inside the event's interval.
struct SynthSpec {
  std::size_t n_events = 50;
  std::size_t docs_per_event = 100;
  std::size_t dim = 64;
  double noise_sigma = 0.05;
  std::int64_t event_duration_s = 86400;
  std::int64_t corpus_span_s = 50 * 86400;
  std::uint64_t seed = 1;

  void validate() const;
};

// Deterministic for a given spec. Documents come back sorted (row i == document i),
// with ids "<event>-<k>" and gold label "<event>". Timestamps start at 0.
CorpusBundle generate_synthetic(const SynthSpec& spec);

struct SweepRow {
  double threshold = 0.0;
  double ari = 0.0;
  double ami = 0.0;
  std::size_t cluster_count = 0;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  double best_threshold = 0.0;  // highest AMI; ties go to the smaller threshold
  double best_ami = 0.0;
};

// Grid t_min, t_min + t_step, ... <= t_max. `params.threshold` is ignored.
// Throws kInvalidParams unless 0 < t_min < t_max <= 2 and t_step > 0, and
// kNoGoldLabels when the corpus cannot be scored.
SweepReport sweep_threshold(const CorpusBundle& bundle, const FsdParams& params, double t_min,
                            double t_max, double t_step);

struct BenchRow {
  std::size_t batch = 0;
  double seconds = 0.0;
  std::optional<double> ami;  // absent when the corpus has no gold labels
  std::size_t cluster_count = 0;
  std::uint64_t distance_evaluations = 0;
};

// One timed run_fsd per batch size, executed serially. `params.batch` is ignored.
std::vector<BenchRow> bench_batch_sizes(const CorpusBundle& bundle, const FsdParams& params,
                                        const std::vector<std::size_t>& batch_sizes);

void write_sweep_csv(const SweepReport& report, std::ostream& out);
void write_bench_csv(const std::vector<BenchRow>& rows, std::ostream& out);

// Cosine distances between sampled document pairs, split by whether both documents
// share a gold label. Used to place a threshold between the two populations.
struct DistanceSample {
  std::vector<float> intra;
  std::vector<float> inter;
};
DistanceSample sample_distances(const CorpusBundle& bundle, std::size_t pairs, std::uint64_t seed);

// Linear-interpolated quantile, q in [0, 1]. The input is copied and sorted.
double quantile(std::vector<float> values, double q);

}  // namespace fsd
