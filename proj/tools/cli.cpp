#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>
#include <unordered_map>

#include "fsd/detector.hpp"
#include "fsd/error.hpp"
#include "fsd/harness.hpp"
#include "fsd/ingest.hpp"
#include "fsd/metrics.hpp"

namespace fsd::cli {
namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ClusterArgs {
  std::string docs;
  std::string embeddings;
  double threshold = 0.0;
  std::optional<std::size_t> window;
  std::size_t batch = 8;
  std::optional<std::size_t> workers;
  std::string out;
  std::string format;
  bool sort = false;
};

struct EvalArgs {
  std::string pred;
  std::string gold_docs;
};

struct SweepArgs {
  std::string docs;
  std::string embeddings;
  std::optional<std::size_t> window;
  std::size_t batch = 8;
  std::optional<std::size_t> workers;
  double t_min = 0.10;
  double t_max = 0.90;
  double t_step = 0.05;
  std::string out;
  bool sort = false;
};

struct BenchArgs {
  std::string docs;
  std::string embeddings;
  double threshold = 0.0;
  std::optional<std::size_t> window;
  std::vector<std::size_t> batch_sizes{1, 2, 4, 8, 16, 32};
  std::optional<std::size_t> workers;
  std::string out;
  bool sort = false;
};

struct SynthArgs {
  SynthSpec spec;
  std::string out_docs;
  std::string out_embeddings;
};

std::string fixed(double value, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, value);
  return buf;
}

// --workers, then FSD_WORKERS, then the logical CPU count.
std::size_t resolve_workers(const std::optional<std::size_t>& flag) {
  if (flag) {
    if (*flag == 0) throw UsageError("--workers must be positive");
    return *flag;
  }
  if (const char* env = std::getenv("FSD_WORKERS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (*end != '\0' || value <= 0) {
      throw UsageError(std::string("FSD_WORKERS must be a positive integer, got \"") + env + "\"");
    }
    return static_cast<std::size_t>(value);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Documents-per-day rule, raised to the batch size so the params stay valid.
std::size_t resolve_window(const std::optional<std::size_t>& flag, const CorpusBundle& bundle,
                           std::size_t batch) {
  if (flag) return *flag;
  return std::max(default_window(bundle.documents), batch);
}

// Writes to --out when given, otherwise to `out`.
template <typename Fn>
void emit(const std::string& path, std::ostream& out, Fn&& write) {
  if (path.empty()) {
    write(out);
    return;
  }
  std::ofstream file(path, std::ios::out | std::ios::trunc);
  if (!file) throw Error(ErrorCode::kIoError, "cannot open " + path + " for writing");
  write(file);
  file.flush();
  if (!file) throw Error(ErrorCode::kIoError, "write failed on " + path);
}

int cmd_cluster(const ClusterArgs& a, std::ostream& err) {
  AssignmentFormat format;
  if (a.format.empty()) {
    try {
      format = assignment_format_from_path(a.out);
    } catch (const Error&) {
      format = AssignmentFormat::kTsv;
    }
  } else {
    format = a.format == "jsonl" ? AssignmentFormat::kJsonl : AssignmentFormat::kTsv;
  }
  const auto bundle = load_corpus(a.docs, a.embeddings, a.sort);
  FsdParams params;
  params.threshold = a.threshold;
  params.batch = a.batch;
  params.window = resolve_window(a.window, bundle, a.batch);
  params.workers = resolve_workers(a.workers);
  params.validate();

  const auto result = run_fsd(bundle.documents, bundle.matrix, params);
  write_assignments(result, bundle.documents, a.out, format);

  err << "n=" << bundle.documents.size() << '\n'
      << "dim=" << bundle.matrix.dim() << '\n'
      << "threshold=" << params.threshold << '\n'
      << "window=" << params.window << '\n'
      << "batch=" << params.batch << '\n'
      << "workers=" << params.workers << '\n'
      << "cluster_count=" << result.cluster_count << '\n'
      << "elapsed_s=" << fixed(result.elapsed.count(), 6) << '\n'
      << "distance_evaluations=" << result.distance_evaluations << '\n';
  return kExitOk;
}

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  const auto gold = load_documents(a.gold_docs);
  const auto pred = read_assignments(a.pred);

  std::unordered_map<std::string, ClusterId> by_id;
  by_id.reserve(pred.size());
  for (const auto& rec : pred) {
    if (!by_id.emplace(rec.id, rec.cluster_id).second) {
      throw Error(ErrorCode::kIdMismatch, "id " + rec.id + " appears twice in " + a.pred);
    }
  }
  std::vector<Assignment> aligned;
  aligned.reserve(gold.size());
  std::size_t missing = 0;
  std::string first_missing;
  for (const auto& doc : gold) {
    const auto it = by_id.find(doc.id);
    if (it == by_id.end()) {
      if (missing++ == 0) first_missing = doc.id;
      continue;
    }
    aligned.push_back({doc.row, it->second});
  }
  if (missing > 0) {
    throw Error(ErrorCode::kIdMismatch, std::to_string(missing) + " gold id(s) missing from " +
                                            a.pred + ", first: " + first_missing);
  }
  if (pred.size() != gold.size()) {
    throw Error(ErrorCode::kIdMismatch, a.pred + " has " + std::to_string(pred.size()) +
                                            " ids not all present in " + a.gold_docs);
  }

  const auto score = evaluate(aligned, gold);
  out << "ARI=" << fixed(score.ari, 4) << '\n'
      << "AMI=" << fixed(score.ami, 4) << '\n'
      << "N=" << score.n_scored << '\n';
  return kExitOk;
}

int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  const auto bundle = load_corpus(a.docs, a.embeddings, a.sort);
  FsdParams params;
  params.batch = a.batch;
  params.window = resolve_window(a.window, bundle, a.batch);
  params.workers = resolve_workers(a.workers);
  params.threshold = 1.0;
  params.validate();

  const auto report = sweep_threshold(bundle, params, a.t_min, a.t_max, a.t_step);
  emit(a.out, out, [&](std::ostream& os) { write_sweep_csv(report, os); });
  err << "window=" << params.window << '\n'
      << "batch=" << params.batch << '\n'
      << "best_threshold=" << fixed(report.best_threshold, 4) << '\n'
      << "best_ami=" << fixed(report.best_ami, 6) << '\n';
  return kExitOk;
}

int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  if (a.batch_sizes.empty()) throw UsageError("--batch-sizes needs at least one value");
  const auto bundle = load_corpus(a.docs, a.embeddings, a.sort);
  const std::size_t largest = *std::max_element(a.batch_sizes.begin(), a.batch_sizes.end());
  FsdParams params;
  params.threshold = a.threshold;
  params.window = resolve_window(a.window, bundle, largest);
  params.workers = resolve_workers(a.workers);
  for (std::size_t b : a.batch_sizes) {
    params.batch = b;
    params.validate();
  }

  const auto rows = bench_batch_sizes(bundle, params, a.batch_sizes);
  emit(a.out, out, [&](std::ostream& os) { write_bench_csv(rows, os); });
  err << "n=" << bundle.documents.size() << '\n'
      << "window=" << params.window << '\n'
      << "workers=" << params.workers << '\n';
  return kExitOk;
}

int cmd_synth(const SynthArgs& a, std::ostream& err) {
  const auto bundle = generate_synthetic(a.spec);
  write_documents(bundle.documents, a.out_docs);
  save_embeddings(bundle.matrix, a.out_embeddings);
  err << "n=" << bundle.documents.size() << '\n'
      << "dim=" << bundle.matrix.dim() << '\n'
      << "window=" << default_window(bundle.documents) << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mini-batch first story detection over sentence embeddings", "fsd"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  ClusterArgs cluster;
  auto* c = app.add_subcommand("cluster", "Cluster a document stream");
  c->add_option("--docs", cluster.docs, "Document file (.jsonl, .csv, .tsv)")->required();
  c->add_option("--embeddings", cluster.embeddings, "FSDE embedding file")->required();
  c->add_option("--threshold", cluster.threshold, "Cosine distance threshold t in (0, 2]")->required();
  c->add_option("--window", cluster.window, "Window size w (default: documents per day)");
  c->add_option("--batch", cluster.batch, "Batch size b")->capture_default_str();
  c->add_option("--workers", cluster.workers, "Search threads (default: FSD_WORKERS or CPU count)");
  c->add_option("--out", cluster.out, "Assignment output path")->required();
  c->add_option("--format", cluster.format, "tsv or jsonl (default: from --out extension)")
      ->check(CLI::IsMember({"tsv", "jsonl"}));
  c->add_flag("--sort", cluster.sort, "Sort documents chronologically instead of rejecting");

  EvalArgs eval;
  auto* e = app.add_subcommand("eval", "Score assignments against gold labels (ARI, AMI)");
  e->add_option("--pred", eval.pred, "Assignment file (.tsv or .jsonl)")->required();
  e->add_option("--gold-docs", eval.gold_docs, "Document file with gold labels")->required();

  SweepArgs sweep;
  auto* s = app.add_subcommand("sweep", "Grid-search the threshold by AMI");
  s->add_option("--docs", sweep.docs)->required();
  s->add_option("--embeddings", sweep.embeddings)->required();
  s->add_option("--window", sweep.window);
  s->add_option("--batch", sweep.batch)->capture_default_str();
  s->add_option("--workers", sweep.workers);
  s->add_option("--t-min", sweep.t_min)->capture_default_str();
  s->add_option("--t-max", sweep.t_max)->capture_default_str();
  s->add_option("--t-step", sweep.t_step)->capture_default_str();
  s->add_option("--out", sweep.out, "CSV path (default: standard output)");
  s->add_flag("--sort", sweep.sort);

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Time clustering across batch sizes");
  b->add_option("--docs", bench.docs)->required();
  b->add_option("--embeddings", bench.embeddings)->required();
  b->add_option("--threshold", bench.threshold)->required();
  b->add_option("--window", bench.window);
  b->add_option("--batch-sizes", bench.batch_sizes, "Comma-separated batch sizes")
      ->delimiter(',')
      ->capture_default_str();
  b->add_option("--workers", bench.workers);
  b->add_option("--out", bench.out, "CSV path (default: standard output)");
  b->add_flag("--sort", bench.sort);

  SynthArgs synth;
  auto* y = app.add_subcommand("synth", "Generate a planted-event corpus");
  y->add_option("--events", synth.spec.n_events)->capture_default_str();
  y->add_option("--docs-per-event", synth.spec.docs_per_event)->capture_default_str();
  y->add_option("--dim", synth.spec.dim)->capture_default_str();
  y->add_option("--noise", synth.spec.noise_sigma)->capture_default_str();
  y->add_option("--event-duration", synth.spec.event_duration_s, "Seconds")->capture_default_str();
  y->add_option("--span", synth.spec.corpus_span_s, "Seconds")->capture_default_str();
  y->add_option("--seed", synth.spec.seed)->capture_default_str();
  y->add_option("--out-docs", synth.out_docs, "JSONL document output")->required();
  y->add_option("--out-embeddings", synth.out_embeddings, "FSDE output")->required();

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& ex) {
    err << "error: " << ex.what() << "\n\n";
    const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return kExitUsage;
  }

  try {
    if (c->parsed()) return cmd_cluster(cluster, err);
    if (e->parsed()) return cmd_eval(eval, out);
    if (s->parsed()) return cmd_sweep(sweep, out, err);
    if (b->parsed()) return cmd_bench(bench, out, err);
    if (y->parsed()) return cmd_synth(synth, err);
  } catch (const UsageError& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitUsage;
  } catch (const Error& ex) {
    err << "error: " << ex.what() << '\n';
    switch (error_class(ex.code())) {
      case ErrorClass::kArgument: return kExitUsage;
      case ErrorClass::kIngest: return kExitIngest;
      case ErrorClass::kRuntime: return kExitRuntime;
    }
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace fsd::cli
