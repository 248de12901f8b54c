#include "fsd/ingest.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "fsd/error.hpp"
#include "fsd/vector_ops.hpp"

namespace fsd {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string lower_extension(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

std::string at_line(std::size_t line) { return "line " + std::to_string(line) + ": "; }

[[noreturn]] void rethrow_at(const Error& e, std::size_t line) {
  std::string what = e.what();
  // Strip the "Code: " prefix added by Error so it is not repeated.
  const auto colon = what.find(": ");
  if (colon != std::string::npos) what = what.substr(colon + 2);
  throw Error(e.code(), at_line(line) + what);
}

std::ifstream open_in(const fs::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string() + " for reading");
  return in;
}

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot open " + path.string() + " for writing");
  return out;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

// ---- JSONL -----------------------------------------------------------------

std::string scalar_to_string(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  if (v.is_number_float() || v.is_boolean()) return v.dump();
  throw Error(ErrorCode::kParseError, "expected a string or number, got " + std::string(v.type_name()));
}

Timestamp json_timestamp(const json& v) {
  if (v.is_number_integer()) return v.get<Timestamp>();
  if (v.is_number_unsigned()) {
    const auto u = v.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(INT64_MAX)) {
      throw Error(ErrorCode::kParseError, "timestamp out of range");
    }
    return static_cast<Timestamp>(u);
  }
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d != static_cast<double>(static_cast<Timestamp>(d))) {
      throw Error(ErrorCode::kParseError, "non-integral timestamp " + v.dump());
    }
    return static_cast<Timestamp>(d);
  }
  if (v.is_string()) return parse_timestamp(v.get<std::string>());
  throw Error(ErrorCode::kParseError, "timestamp must be a number or string");
}

std::vector<Document> read_jsonl(std::istream& in) {
  std::vector<Document> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      json obj;
      try {
        obj = json::parse(line);
      } catch (const json::parse_error& e) {
        throw Error(ErrorCode::kParseError, e.what());
      }
      if (!obj.is_object()) throw Error(ErrorCode::kParseError, "expected a JSON object");
      Document doc;
      const auto id = obj.find("id");
      if (id == obj.end() || id->is_null()) throw Error(ErrorCode::kMissingField, "id");
      doc.id = scalar_to_string(*id);
      const auto ts = obj.find("timestamp");
      if (ts == obj.end() || ts->is_null()) throw Error(ErrorCode::kMissingField, "timestamp");
      doc.timestamp = json_timestamp(*ts);
      const auto label = obj.find("label");
      if (label != obj.end() && !label->is_null()) doc.gold_label = scalar_to_string(*label);
      doc.row = docs.size();
      docs.push_back(std::move(doc));
    } catch (const Error& e) {
      rethrow_at(e, line_no);
    }
  }
  return docs;
}

// ---- CSV / TSV ---------------------------------------------------------------

// Reads one record. CSV honours RFC 4180 quoting (including quoted newlines); TSV
// splits on tabs only. Returns false at end of input. `line_no` advances by the
// number of physical lines consumed.
bool read_record(std::istream& in, char sep, bool quoting, std::vector<std::string>& fields,
                 std::size_t& line_no) {
  fields.clear();
  std::string line;
  if (!std::getline(in, line)) return false;
  ++line_no;
  strip_cr(line);
  if (!quoting) {
    std::size_t start = 0;
    for (;;) {
      const auto pos = line.find(sep, start);
      fields.push_back(line.substr(start, pos - start));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    return true;
  }
  std::string field;
  bool in_quotes = false;
  std::size_t i = 0;
  for (;;) {
    if (i == line.size()) {
      if (!in_quotes) break;
      std::string next;
      if (!std::getline(in, next)) {
        throw Error(ErrorCode::kParseError, at_line(line_no) + "unterminated quoted field");
      }
      ++line_no;
      strip_cr(next);
      field += '\n';
      line = std::move(next);
      i = 0;
      continue;
    }
    const char c = line[i++];
    if (in_quotes) {
      if (c == '"') {
        if (i < line.size() && line[i] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && field.empty()) {
      in_quotes = true;
    } else if (c == sep) {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  return true;
}

std::vector<Document> read_delimited(std::istream& in, char sep, bool quoting) {
  std::vector<std::string> fields;
  std::size_t line_no = 0;
  if (!read_record(in, sep, quoting, fields, line_no)) return {};
  std::optional<std::size_t> id_col, ts_col, label_col;
  for (std::size_t c = 0; c < fields.size(); ++c) {
    std::string name = fields[c];
    if (c == 0 && name.starts_with("\xEF\xBB\xBF")) name.erase(0, 3);  // UTF-8 BOM
    if (name == "id") id_col = c;
    else if (name == "timestamp") ts_col = c;
    else if (name == "label") label_col = c;
  }
  if (!id_col) throw Error(ErrorCode::kMissingField, at_line(1) + "header lacks column id");
  if (!ts_col) throw Error(ErrorCode::kMissingField, at_line(1) + "header lacks column timestamp");
  const std::size_t width = fields.size();

  std::vector<Document> docs;
  for (;;) {
    const std::size_t record_line = line_no + 1;
    if (!read_record(in, sep, quoting, fields, line_no)) break;
    if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
    try {
      if (fields.size() != width) {
        throw Error(ErrorCode::kParseError, "expected " + std::to_string(width) +
                                                " fields, found " + std::to_string(fields.size()));
      }
      Document doc;
      doc.id = fields[*id_col];
      if (doc.id.empty()) throw Error(ErrorCode::kMissingField, "id");
      if (fields[*ts_col].empty()) throw Error(ErrorCode::kMissingField, "timestamp");
      doc.timestamp = parse_timestamp(fields[*ts_col]);
      if (label_col && !fields[*label_col].empty()) doc.gold_label = fields[*label_col];
      doc.row = docs.size();
      docs.push_back(std::move(doc));
    } catch (const Error& e) {
      rethrow_at(e, record_line);
    }
  }
  return docs;
}

// ---- FSDE --------------------------------------------------------------------

template <typename T>
T swap_bytes(T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  std::reverse(bytes, bytes + sizeof(T));
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

template <typename T>
T load_le(const unsigned char* p) {
  T value;
  std::memcpy(&value, p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) value = swap_bytes(value);
  return value;
}

template <typename T>
void store_le(std::ostream& out, T value) {
  if constexpr (std::endian::native == std::endian::big) value = swap_bytes(value);
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

}  // namespace

DocFormat doc_format_from_path(const fs::path& path) {
  const auto ext = lower_extension(path);
  if (ext == ".jsonl" || ext == ".json" || ext == ".ndjson") return DocFormat::kJsonl;
  if (ext == ".csv") return DocFormat::kCsv;
  if (ext == ".tsv" || ext == ".tab") return DocFormat::kTsv;
  throw Error(ErrorCode::kInvalidParams, "cannot infer document format of " + path.string());
}

AssignmentFormat assignment_format_from_path(const fs::path& path) {
  const auto ext = lower_extension(path);
  if (ext == ".jsonl" || ext == ".json" || ext == ".ndjson") return AssignmentFormat::kJsonl;
  if (ext == ".tsv" || ext == ".tab" || ext == ".txt") return AssignmentFormat::kTsv;
  throw Error(ErrorCode::kInvalidParams, "cannot infer assignment format of " + path.string());
}

std::vector<Document> read_documents(std::istream& in, DocFormat format) {
  switch (format) {
    case DocFormat::kJsonl: return read_jsonl(in);
    case DocFormat::kCsv: return read_delimited(in, ',', true);
    case DocFormat::kTsv: return read_delimited(in, '\t', false);
  }
  return {};
}

std::vector<Document> load_documents(const fs::path& path, DocFormat format) {
  auto in = open_in(path);
  return read_documents(in, format);
}

std::vector<Document> load_documents(const fs::path& path) {
  return load_documents(path, doc_format_from_path(path));
}

void write_documents(std::span<const Document> documents, const fs::path& path) {
  auto out = open_out(path);
  for (const auto& doc : documents) {
    ordered_json obj;
    obj["id"] = doc.id;
    obj["timestamp"] = doc.timestamp;
    if (doc.gold_label) obj["label"] = *doc.gold_label;
    out << obj.dump() << '\n';
  }
  if (!out) throw Error(ErrorCode::kIoError, "write failed on " + path.string());
}

EmbeddingMatrix read_embeddings(std::istream& in) {
  unsigned char header[kFsdeHeaderBytes];
  in.read(reinterpret_cast<char*>(header), sizeof header);
  const auto got = static_cast<std::size_t>(in.gcount());
  if (got < 4 || std::memcmp(header, "FSDE", 4) != 0) {
    throw Error(ErrorCode::kBadMagic, "not an FSDE file");
  }
  if (got >= 8) {
    const auto version = load_le<std::uint32_t>(header + 4);
    if (version != kFsdeVersion) {
      throw Error(ErrorCode::kVersionUnsupported, "FSDE version " + std::to_string(version));
    }
  }
  if (got < kFsdeHeaderBytes) {
    throw Error(ErrorCode::kTruncatedFile, "header: expected " + std::to_string(kFsdeHeaderBytes) +
                                               " bytes, got " + std::to_string(got));
  }
  const auto n = load_le<std::uint64_t>(header + 8);
  const auto dim = load_le<std::uint32_t>(header + 16);
  const std::uint64_t values = n * dim;
  if (dim != 0 && values / dim != n) throw Error(ErrorCode::kParseError, "n * dim overflows");
  const std::uint64_t payload = values * sizeof(float);
  if (payload / sizeof(float) != values) throw Error(ErrorCode::kParseError, "payload overflows");

  // Probe the remaining size when the stream can tell us, so absurd headers fail
  // before allocating.
  const auto here = in.tellg();
  if (here != std::streampos(-1)) {
    in.seekg(0, std::ios::end);
    const auto end = in.tellg();
    in.seekg(here);
    const auto remaining = static_cast<std::uint64_t>(end - here);
    if (remaining < payload) {
      throw Error(ErrorCode::kTruncatedFile,
                  "expected " + std::to_string(kFsdeHeaderBytes + payload) + " bytes, got " +
                      std::to_string(kFsdeHeaderBytes + remaining));
    }
    if (remaining > payload) {
      throw Error(ErrorCode::kParseError, std::to_string(remaining - payload) +
                                              " trailing bytes after FSDE payload");
    }
  }

  std::vector<float> data(values);
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(payload));
  const auto read = static_cast<std::uint64_t>(in.gcount());
  if (read < payload) {
    throw Error(ErrorCode::kTruncatedFile, "expected " +
                                               std::to_string(kFsdeHeaderBytes + payload) +
                                               " bytes, got " +
                                               std::to_string(kFsdeHeaderBytes + read));
  }
  if constexpr (std::endian::native == std::endian::big) {
    for (auto& x : data) x = std::bit_cast<float>(swap_bytes(std::bit_cast<std::uint32_t>(x)));
  }
  return EmbeddingMatrix(static_cast<std::size_t>(n), dim, std::move(data));
}

EmbeddingMatrix load_embeddings(const fs::path& path) {
  auto in = open_in(path, std::ios::in | std::ios::binary);
  return read_embeddings(in);
}

void write_embeddings(const EmbeddingMatrix& matrix, std::ostream& out) {
  out.write("FSDE", 4);
  store_le<std::uint32_t>(out, kFsdeVersion);
  store_le<std::uint64_t>(out, matrix.rows());
  store_le<std::uint32_t>(out, static_cast<std::uint32_t>(matrix.dim()));
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(matrix.data().data()),
              static_cast<std::streamsize>(matrix.data().size_bytes()));
  } else {
    for (float x : matrix.data()) store_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(x));
  }
}

void save_embeddings(const EmbeddingMatrix& matrix, const fs::path& path) {
  auto out = open_out(path, std::ios::out | std::ios::binary);
  write_embeddings(matrix, out);
  out.flush();
  if (!out) throw Error(ErrorCode::kIoError, "write failed on " + path.string());
}

bool is_chronological(std::span<const Document> documents) {
  return std::is_sorted(documents.begin(), documents.end(),
                        [](const Document& a, const Document& b) { return a.timestamp < b.timestamp; });
}

CorpusBundle sort_chronologically(const CorpusBundle& bundle) {
  std::vector<std::size_t> order(bundle.documents.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return bundle.documents[a].timestamp < bundle.documents[b].timestamp;
  });

  const std::size_t dim = bundle.matrix.dim();
  CorpusBundle sorted;
  sorted.documents.reserve(order.size());
  std::vector<float> data;
  data.reserve(bundle.matrix.data().size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    Document doc = bundle.documents[order[i]];
    const auto src = bundle.matrix.row(doc.row);
    data.insert(data.end(), src.begin(), src.end());
    doc.row = i;
    sorted.documents.push_back(std::move(doc));
  }
  sorted.matrix = EmbeddingMatrix(order.size(), dim, std::move(data));
  return sorted;
}

CorpusBundle load_corpus(const fs::path& docs_path, const fs::path& embeddings_path, bool sort) {
  CorpusBundle bundle;
  bundle.documents = load_documents(docs_path);
  const auto raw = load_embeddings(embeddings_path);
  if (raw.rows() != bundle.documents.size()) {
    throw Error(ErrorCode::kLengthMismatch, docs_path.string() + " has " +
                                                std::to_string(bundle.documents.size()) +
                                                " documents but " + embeddings_path.string() +
                                                " has " + std::to_string(raw.rows()) + " rows");
  }
  bundle.matrix = normalize_rows(raw);
  if (!is_chronological(bundle.documents)) {
    if (!sort) {
      validate_corpus(bundle.documents, bundle.matrix);  // throws kUnsortedCorpus
    }
    bundle = sort_chronologically(bundle);
  }
  return bundle;
}

void write_assignments(const FsdResult& result, std::span<const Document> documents,
                       std::ostream& out, AssignmentFormat format) {
  if (result.assignments.size() != documents.size()) {
    throw Error(ErrorCode::kLengthMismatch, std::to_string(result.assignments.size()) +
                                                " assignments for " +
                                                std::to_string(documents.size()) + " documents");
  }
  if (format == AssignmentFormat::kTsv) out << "id\tcluster_id\ttimestamp\n";
  for (std::size_t i = 0; i < documents.size(); ++i) {
    const Document& doc = documents[i];
    const ClusterId cluster = result.assignments[i].cluster_id;
    if (format == AssignmentFormat::kTsv) {
      if (doc.id.find_first_of("\t\n\r") != std::string::npos) {
        throw Error(ErrorCode::kIoError, "id " + doc.id + " cannot be written as TSV");
      }
      out << doc.id << '\t' << cluster << '\t' << doc.timestamp << '\n';
    } else {
      ordered_json obj;
      obj["id"] = doc.id;
      obj["cluster_id"] = cluster;
      obj["timestamp"] = doc.timestamp;
      out << obj.dump() << '\n';
    }
  }
  if (!out) throw Error(ErrorCode::kIoError, "failed writing assignments");
}

void write_assignments(const FsdResult& result, std::span<const Document> documents,
                       const fs::path& path, AssignmentFormat format) {
  auto out = open_out(path);
  write_assignments(result, documents, out, format);
  out.flush();
  if (!out) throw Error(ErrorCode::kIoError, "write failed on " + path.string());
}

std::vector<AssignmentRecord> read_assignments(std::istream& in, AssignmentFormat format) {
  std::vector<AssignmentRecord> records;
  std::string line;
  std::size_t line_no = 0;
  auto parse_cluster = [](const std::string& s) {
    ClusterId value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw Error(ErrorCode::kParseError, "bad cluster id \"" + s + "\"");
    }
    return value;
  };

  if (format == AssignmentFormat::kTsv) {
    if (!std::getline(in, line)) return records;
    ++line_no;
    strip_cr(line);
    if (line != "id\tcluster_id\ttimestamp") {
      throw Error(ErrorCode::kParseError, at_line(1) + "expected header id<TAB>cluster_id<TAB>timestamp");
    }
  }
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    try {
      AssignmentRecord rec;
      if (format == AssignmentFormat::kTsv) {
        const auto t1 = line.find('\t');
        const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
        if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos) {
          throw Error(ErrorCode::kParseError, "expected 3 tab-separated fields");
        }
        rec.id = line.substr(0, t1);
        rec.cluster_id = parse_cluster(line.substr(t1 + 1, t2 - t1 - 1));
        rec.timestamp = parse_timestamp(line.substr(t2 + 1));
      } else {
        json obj;
        try {
          obj = json::parse(line);
        } catch (const json::parse_error& e) {
          throw Error(ErrorCode::kParseError, e.what());
        }
        if (!obj.is_object()) throw Error(ErrorCode::kParseError, "expected a JSON object");
        for (const char* field : {"id", "cluster_id", "timestamp"}) {
          if (!obj.contains(field) || obj[field].is_null()) throw Error(ErrorCode::kMissingField, field);
        }
        rec.id = scalar_to_string(obj["id"]);
        if (!obj["cluster_id"].is_number_unsigned() && !obj["cluster_id"].is_number_integer()) {
          throw Error(ErrorCode::kParseError, "cluster_id must be an integer");
        }
        const auto cid = obj["cluster_id"].get<std::int64_t>();
        if (cid < 0 || cid > static_cast<std::int64_t>(UINT32_MAX)) {
          throw Error(ErrorCode::kParseError, "cluster_id out of range");
        }
        rec.cluster_id = static_cast<ClusterId>(cid);
        rec.timestamp = json_timestamp(obj["timestamp"]);
      }
      records.push_back(std::move(rec));
    } catch (const Error& e) {
      rethrow_at(e, line_no);
    }
  }
  return records;
}

std::vector<AssignmentRecord> read_assignments(const fs::path& path) {
  auto in = open_in(path);
  return read_assignments(in, assignment_format_from_path(path));
}

}  // namespace fsd
