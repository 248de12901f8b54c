#include "fsd/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <random>
#include <string>

#include "fsd/detector.hpp"
#include "fsd/error.hpp"
#include "fsd/metrics.hpp"
#include "fsd/vector_ops.hpp"

namespace fsd {
namespace {

std::size_t gold_labeled(const CorpusBundle& bundle) {
  return static_cast<std::size_t>(
      std::count_if(bundle.documents.begin(), bundle.documents.end(),
                    [](const Document& d) { return d.gold_label.has_value(); }));
}

std::vector<double> random_unit(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> v(dim);
  for (;;) {
    double sq = 0.0;
    for (auto& x : v) {
      x = gauss(rng);
      sq += x * x;
    }
    if (sq > 0.0) {
      const double norm = std::sqrt(sq);
      for (auto& x : v) x /= norm;
      return v;
    }
  }
}

std::string format_double(double value, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, value);
  return buf;
}

}  // namespace

void SynthSpec::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::kInvalidParams, msg); };
  if (n_events == 0) fail("n_events must be positive");
  if (docs_per_event == 0) fail("docs_per_event must be positive");
  if (dim == 0) fail("dim must be positive");
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) fail("noise_sigma must be >= 0");
  if (event_duration_s <= 0) fail("event_duration_s must be positive");
  if (corpus_span_s <= 0) fail("corpus_span_s must be positive");
  if (event_duration_s > corpus_span_s) fail("event_duration_s exceeds corpus_span_s");
}

CorpusBundle generate_synthetic(const SynthSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<std::int64_t> start_dist(0, spec.corpus_span_s - spec.event_duration_s);
  std::normal_distribution<double> noise(0.0, spec.noise_sigma > 0.0 ? spec.noise_sigma : 1.0);

  const std::size_t n = spec.n_events * spec.docs_per_event;
  CorpusBundle raw;
  raw.documents.reserve(n);
  std::vector<float> data;
  data.reserve(n * spec.dim);
  std::vector<double> v(spec.dim);

  for (std::size_t event = 0; event < spec.n_events; ++event) {
    const auto center = random_unit(rng, spec.dim);
    const std::int64_t start = start_dist(rng);
    std::uniform_int_distribution<std::int64_t> ts_dist(start, start + spec.event_duration_s - 1);
    for (std::size_t k = 0; k < spec.docs_per_event; ++k) {
      double sq = 0.0;
      for (std::size_t c = 0; c < spec.dim; ++c) {
        v[c] = center[c] + (spec.noise_sigma > 0.0 ? noise(rng) : 0.0);
        sq += v[c] * v[c];
      }
      const double norm = sq > 0.0 ? std::sqrt(sq) : 1.0;
      for (double x : v) data.push_back(static_cast<float>(x / norm));

      Document doc;
      doc.id = std::to_string(event) + "-" + std::to_string(k);
      doc.timestamp = ts_dist(rng);
      doc.gold_label = std::to_string(event);
      doc.row = raw.documents.size();
      raw.documents.push_back(std::move(doc));
    }
  }
  raw.matrix = EmbeddingMatrix(n, spec.dim, std::move(data));
  return sort_chronologically(raw);
}

SweepReport sweep_threshold(const CorpusBundle& bundle, const FsdParams& params, double t_min,
                            double t_max, double t_step) {
  if (!(t_min > 0.0 && t_min < t_max && t_max <= 2.0)) {
    throw Error(ErrorCode::kInvalidParams, "sweep needs 0 < t_min < t_max <= 2");
  }
  if (!(t_step > 0.0)) throw Error(ErrorCode::kInvalidParams, "sweep needs t_step > 0");
  if (gold_labeled(bundle) < 2) {
    throw Error(ErrorCode::kNoGoldLabels, "sweep needs at least 2 gold-labeled documents");
  }

  const auto steps = static_cast<std::size_t>(std::floor((t_max - t_min) / t_step + 1e-9));
  SweepReport report;
  bool have_best = false;
  for (std::size_t k = 0; k <= steps; ++k) {
    FsdParams p = params;
    p.threshold = std::min(t_min + static_cast<double>(k) * t_step, t_max);
    const auto result = run_fsd(bundle.documents, bundle.matrix, p);
    const auto score = evaluate(result.assignments, bundle.documents);
    report.rows.push_back({p.threshold, score.ari, score.ami, result.cluster_count});
    if (!have_best || score.ami > report.best_ami) {
      report.best_ami = score.ami;
      report.best_threshold = p.threshold;
      have_best = true;
    }
  }
  return report;
}

std::vector<BenchRow> bench_batch_sizes(const CorpusBundle& bundle, const FsdParams& params,
                                        const std::vector<std::size_t>& batch_sizes) {
  const bool scored = gold_labeled(bundle) >= 2;
  std::vector<BenchRow> rows;
  rows.reserve(batch_sizes.size());
  for (std::size_t b : batch_sizes) {
    FsdParams p = params;
    p.batch = b;
    const auto result = run_fsd(bundle.documents, bundle.matrix, p);
    BenchRow row;
    row.batch = b;
    row.seconds = result.elapsed.count();
    row.cluster_count = result.cluster_count;
    row.distance_evaluations = result.distance_evaluations;
    if (scored) row.ami = evaluate(result.assignments, bundle.documents).ami;
    rows.push_back(row);
  }
  return rows;
}

void write_sweep_csv(const SweepReport& report, std::ostream& out) {
  out << "threshold,ari,ami,clusters\n";
  for (const auto& r : report.rows) {
    out << format_double(r.threshold, 4) << ',' << format_double(r.ari, 6) << ','
        << format_double(r.ami, 6) << ',' << r.cluster_count << '\n';
  }
}

void write_bench_csv(const std::vector<BenchRow>& rows, std::ostream& out) {
  out << "batch,seconds,ami,clusters,distance_evaluations\n";
  for (const auto& r : rows) {
    out << r.batch << ',' << format_double(r.seconds, 6) << ','
        << (r.ami ? format_double(*r.ami, 6) : std::string()) << ',' << r.cluster_count << ','
        << r.distance_evaluations << '\n';
  }
}

DistanceSample sample_distances(const CorpusBundle& bundle, std::size_t pairs, std::uint64_t seed) {
  std::map<std::string, std::vector<RowIndex>> by_label;
  std::vector<const Document*> labeled;
  for (const auto& doc : bundle.documents) {
    if (!doc.gold_label) continue;
    by_label[*doc.gold_label].push_back(doc.row);
    labeled.push_back(&doc);
  }
  DistanceSample sample;
  if (labeled.size() < 2) return sample;

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, labeled.size() - 1);
  const bool has_intra = std::any_of(by_label.begin(), by_label.end(),
                                     [](const auto& kv) { return kv.second.size() >= 2; });
  const bool has_inter = by_label.size() >= 2;

  while (has_intra && sample.intra.size() < pairs) {
    const Document* a = labeled[pick(rng)];
    const auto& group = by_label[*a->gold_label];
    if (group.size() < 2) continue;
    std::uniform_int_distribution<std::size_t> in_group(0, group.size() - 1);
    const RowIndex b = group[in_group(rng)];
    if (b == a->row) continue;
    sample.intra.push_back(cosine_distance(bundle.matrix.row(a->row), bundle.matrix.row(b)));
  }
  while (has_inter && sample.inter.size() < pairs) {
    const Document* a = labeled[pick(rng)];
    const Document* b = labeled[pick(rng)];
    if (*a->gold_label == *b->gold_label) continue;
    sample.inter.push_back(cosine_distance(bundle.matrix.row(a->row), bundle.matrix.row(b->row)));
  }
  return sample;
}

double quantile(std::vector<float> values, double q) {
  if (values.empty()) throw Error(ErrorCode::kEmptySet, "quantile of no values");
  std::sort(values.begin(), values.end());
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

}  // namespace fsd
