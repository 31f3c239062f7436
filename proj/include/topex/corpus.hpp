#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace topex {

using TermId = std::uint32_t;
using DocId = std::uint32_t;
using TokenList = std::vector<std::string>;

struct RawDocument {
  DocId doc_id = 0;
  std::string title;
  std::string body;

  bool operator==(const RawDocument&) const = default;
};

// Terms are kept in lexicographic order so ids are reproducible.
class Vocabulary {
 public:
  Vocabulary() = default;
  // `terms` must be sorted and unique; `doc_freq` is parallel to it.
  Vocabulary(std::vector<std::string> terms, std::vector<std::uint32_t> doc_freq);

  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  const std::string& term(TermId id) const { return terms_.at(id); }
  const std::vector<std::string>& terms() const { return terms_; }
  std::uint32_t doc_freq(TermId id) const { return doc_freq_.at(id); }
  const std::vector<std::uint32_t>& doc_freqs() const { return doc_freq_; }

  bool contains(std::string_view term) const;
  // Throws std::out_of_range for unknown terms.
  TermId id(std::string_view term) const;

  bool operator==(const Vocabulary& other) const {
    return terms_ == other.terms_ && doc_freq_ == other.doc_freq_;
  }

 private:
  std::vector<std::string> terms_;
  std::vector<std::uint32_t> doc_freq_;
  std::map<std::string, TermId, std::less<>> index_;
};

struct TokenizedCorpus {
  std::vector<std::vector<TermId>> docs;
  Vocabulary vocabulary;
  std::vector<std::string> titles;

  std::size_t num_docs() const { return docs.size(); }
  std::size_t num_tokens() const;
  // Documents emptied by tokenization or pruning stay in the corpus so the
  // document axis keeps one entry per input row; they are skipped in training.
  bool is_empty(DocId d) const { return docs.at(d).empty(); }
  std::size_t num_nonempty() const;

  bool operator==(const TokenizedCorpus&) const = default;
};

struct PreprocessConfig {
  double df_ratio_threshold = 0.5;
  std::set<std::string, std::less<>> stopwords;
  std::size_t min_token_length = 3;

  // Throws ConfigError unless 0 < t <= 1 and min_token_length >= 1.
  void validate() const;
};

// Column names used when ingesting the CSV source.
struct IngestColumns {
  std::string title = "title";
  std::string body = "body";
};

// Reads a CSV stream with a header row. One RawDocument per data row, ids in
// row order. Throws CorpusError on an empty source, a missing column, or a
// row with the wrong number of fields.
std::vector<RawDocument> ingest(std::istream& source, const IngestColumns& columns = {});
std::vector<RawDocument> ingest_file(const std::filesystem::path& path,
                                     const IngestColumns& columns = {});

// Lowercases ASCII, splits on anything that is not [a-z0-9] or a non-ASCII
// byte, then drops short tokens and stopwords. Text order is preserved.
TokenList tokenize(const RawDocument& doc, const PreprocessConfig& cfg);
TokenList tokenize(std::string_view text, const PreprocessConfig& cfg);

// Terms sorted lexicographically; doc_freq counts documents, not tokens.
Vocabulary build_vocabulary(const std::vector<TokenList>& docs);

struct PruneResult {
  TokenizedCorpus corpus;
  std::set<std::string> removed_terms;
};

// Removes every term whose doc_freq / D exceeds `t` and re-densifies ids.
// `titles` is copied into the corpus; when empty, titles are left empty.
PruneResult prune_high_frequency(const std::vector<TokenList>& docs, double t,
                                 std::vector<std::string> titles = {});

// ingest -> tokenize -> prune, the full preprocessing path.
PruneResult preprocess(const std::vector<RawDocument>& raw, const PreprocessConfig& cfg);

// A small general-purpose English stopword list.
const std::set<std::string, std::less<>>& default_stopwords();

// One lowercase word per line; blank lines and '#' comments are ignored.
std::set<std::string, std::less<>> load_stopwords(const std::filesystem::path& path);

// Plain `key=value` lines. Whitespace around keys and values is trimmed,
// blank lines and lines starting with '#' are skipped.
std::map<std::string, std::string> read_key_values(std::istream& in);
std::map<std::string, std::string> read_key_values_file(const std::filesystem::path& path);

}  // namespace topex
