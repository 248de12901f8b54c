#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fsd/detector.hpp"
#include "fsd/types.hpp"

namespace fsd {

enum class DocFormat { kJsonl, kCsv, kTsv };
enum class AssignmentFormat { kTsv, kJsonl };

// By extension: .jsonl/.json/.ndjson, .csv, .tsv/.tab. Throws kInvalidParams otherwise.
DocFormat doc_format_from_path(const std::filesystem::path& path);
AssignmentFormat assignment_format_from_path(const std::filesystem::path& path);

// Integer epoch seconds or ISO-8601 with an explicit zone ("Z", "+hh:mm", "-hhmm").
// Fractional seconds are truncated. Throws kAmbiguousTimestamp when the zone is
// missing and kParseError for anything else that does not parse.
Timestamp parse_timestamp(std::string_view text);

// Documents in file order; row = 0-based record index. Required fields: id,
// timestamp. Optional: label (gold event), text (ignored here). Errors carry the
// 1-based line number: kParseError, kMissingField, kAmbiguousTimestamp.
std::vector<Document> read_documents(std::istream& in, DocFormat format);
std::vector<Document> load_documents(const std::filesystem::path& path, DocFormat format);
std::vector<Document> load_documents(const std::filesystem::path& path);

// JSONL with id, timestamp and (when present) label.
void write_documents(std::span<const Document> documents, const std::filesystem::path& path);

// FSDE v1, little-endian:
//   offset 0   char[4]  "FSDE"
//   offset 4   u32      version (1)
//   offset 8   u64      n
//   offset 16  u32      dim
//   offset 20  f32[n*dim] row-major
inline constexpr std::uint32_t kFsdeVersion = 1;
inline constexpr std::size_t kFsdeHeaderBytes = 20;

// Rows come back exactly as stored (not normalized). Throws kBadMagic,
// kVersionUnsupported, kTruncatedFile, kParseError (trailing bytes), kIoError.
EmbeddingMatrix read_embeddings(std::istream& in);
EmbeddingMatrix load_embeddings(const std::filesystem::path& path);
void write_embeddings(const EmbeddingMatrix& matrix, std::ostream& out);
void save_embeddings(const EmbeddingMatrix& matrix, const std::filesystem::path& path);

// Documents paired positionally with matrix rows: documents[i].row == i.
struct CorpusBundle {
  std::vector<Document> documents;
  EmbeddingMatrix matrix;
};

// Stable sort by (timestamp, file position); matrix rows move with their documents
// and rows are renumbered so documents[i].row == i again.
CorpusBundle sort_chronologically(const CorpusBundle& bundle);

bool is_chronological(std::span<const Document> documents);

// Loads both files, checks the counts agree, normalizes rows, and optionally sorts.
// Without `sort`, an out-of-order file throws kUnsortedCorpus.
CorpusBundle load_corpus(const std::filesystem::path& docs_path,
                         const std::filesystem::path& embeddings_path, bool sort = false);

struct AssignmentRecord {
  std::string id;
  ClusterId cluster_id = 0;
  Timestamp timestamp = 0;

  friend bool operator==(const AssignmentRecord&, const AssignmentRecord&) = default;
};

// TSV: header "id\tcluster_id\ttimestamp", then one line per document.
// JSONL: {"id":"42","cluster_id":0,"timestamp":1350000000} per line.
// `documents` must be the corpus the result was computed on (same order).
void write_assignments(const FsdResult& result, std::span<const Document> documents,
                       std::ostream& out, AssignmentFormat format);
void write_assignments(const FsdResult& result, std::span<const Document> documents,
                       const std::filesystem::path& path, AssignmentFormat format);

std::vector<AssignmentRecord> read_assignments(std::istream& in, AssignmentFormat format);
std::vector<AssignmentRecord> read_assignments(const std::filesystem::path& path);

}  // namespace fsd
