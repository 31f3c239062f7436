#include "topex/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "topex/csv.hpp"
#include "topex/error.hpp"

namespace topex {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n\f\v");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n\f\v");
  return s.substr(first, last - first + 1);
}

bool is_token_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
}

std::size_t column_index(const csv::Row& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    // Tolerate a UTF-8 byte order mark on the first header cell.
    std::string_view cell = header[i];
    if (i == 0 && cell.starts_with("\xEF\xBB\xBF")) cell.remove_prefix(3);
    if (trim(cell) == name) return i;
  }
  throw CorpusError("header has no column named '" + name + "'");
}

}  // namespace

Vocabulary::Vocabulary(std::vector<std::string> terms, std::vector<std::uint32_t> doc_freq)
    : terms_(std::move(terms)), doc_freq_(std::move(doc_freq)) {
  if (terms_.size() != doc_freq_.size())
    throw std::invalid_argument("vocabulary terms and doc_freq differ in length");
  for (TermId id = 0; id < terms_.size(); ++id) {
    if (!index_.emplace(terms_[id], id).second)
      throw std::invalid_argument("duplicate vocabulary term '" + terms_[id] + "'");
  }
}

bool Vocabulary::contains(std::string_view term) const { return index_.find(term) != index_.end(); }

TermId Vocabulary::id(std::string_view term) const {
  const auto it = index_.find(term);
  if (it == index_.end()) throw std::out_of_range("unknown term '" + std::string(term) + "'");
  return it->second;
}

std::size_t TokenizedCorpus::num_tokens() const {
  return std::accumulate(docs.begin(), docs.end(), std::size_t{0},
                         [](std::size_t acc, const auto& d) { return acc + d.size(); });
}

std::size_t TokenizedCorpus::num_nonempty() const {
  return static_cast<std::size_t>(
      std::count_if(docs.begin(), docs.end(), [](const auto& d) { return !d.empty(); }));
}

void PreprocessConfig::validate() const {
  if (!(df_ratio_threshold > 0.0 && df_ratio_threshold <= 1.0))
    throw ConfigError("df_ratio_threshold must lie in (0, 1]");
  if (min_token_length < 1) throw ConfigError("min_token_length must be at least 1");
}

std::vector<RawDocument> ingest(std::istream& source, const IngestColumns& columns) {
  const auto rows = csv::parse(source);
  if (rows.empty()) throw CorpusError("empty corpus");

  const auto& header = rows.front();
  const std::size_t title_col = column_index(header, columns.title);
  const std::size_t body_col = column_index(header, columns.body);

  std::vector<RawDocument> docs;
  docs.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() == 1 && row[0].empty()) continue;  // blank line
    if (row.size() != header.size()) {
      std::ostringstream msg;
      msg << "row " << r << ": expected " << header.size() << " fields, found " << row.size();
      throw CorpusError(msg.str());
    }
    RawDocument doc;
    doc.doc_id = static_cast<DocId>(docs.size());
    doc.title = std::string(trim(row[title_col]));
    doc.body = row[body_col];
    if (doc.title.empty()) throw CorpusError("row " + std::to_string(r) + ": empty title");
    docs.push_back(std::move(doc));
  }
  if (docs.empty()) throw CorpusError("empty corpus");
  return docs;
}

std::vector<RawDocument> ingest_file(const std::filesystem::path& path,
                                     const IngestColumns& columns) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorpusError("cannot open corpus file " + path.string());
  return ingest(in, columns);
}

TokenList tokenize(std::string_view text, const PreprocessConfig& cfg) {
  TokenList tokens;
  std::string current;
  auto flush = [&] {
    if (current.size() >= cfg.min_token_length && !cfg.stopwords.contains(current))
      tokens.push_back(current);
    current.clear();
  };
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (is_token_byte(c)) {
      current.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : ch);
    } else if (!current.empty()) {
      flush();
    }
  }
  if (!current.empty()) flush();
  return tokens;
}

TokenList tokenize(const RawDocument& doc, const PreprocessConfig& cfg) {
  return tokenize(doc.body, cfg);
}

Vocabulary build_vocabulary(const std::vector<TokenList>& docs) {
  std::map<std::string, std::uint32_t> df;
  for (const auto& doc : docs) {
    std::set<std::string_view> seen(doc.begin(), doc.end());
    for (auto term : seen) ++df[std::string(term)];
  }
  std::vector<std::string> terms;
  std::vector<std::uint32_t> freq;
  terms.reserve(df.size());
  freq.reserve(df.size());
  for (auto& [term, count] : df) {
    terms.push_back(term);
    freq.push_back(count);
  }
  return Vocabulary(std::move(terms), std::move(freq));
}

PruneResult prune_high_frequency(const std::vector<TokenList>& docs, double t,
                                 std::vector<std::string> titles) {
  if (!(t > 0.0 && t <= 1.0)) throw ConfigError("df_ratio_threshold must lie in (0, 1]");
  if (docs.empty()) throw CorpusError("empty corpus");
  if (!titles.empty() && titles.size() != docs.size())
    throw std::invalid_argument("titles and documents differ in count");

  const double num_docs = static_cast<double>(docs.size());
  const Vocabulary full = build_vocabulary(docs);

  PruneResult result;
  std::vector<std::string> kept_terms;
  std::vector<std::uint32_t> kept_df;
  for (TermId id = 0; id < full.size(); ++id) {
    if (static_cast<double>(full.doc_freq(id)) / num_docs > t) {
      result.removed_terms.insert(full.term(id));
    } else {
      kept_terms.push_back(full.term(id));
      kept_df.push_back(full.doc_freq(id));
    }
  }

  auto& corpus = result.corpus;
  corpus.vocabulary = Vocabulary(std::move(kept_terms), std::move(kept_df));
  corpus.titles = std::move(titles);
  corpus.docs.reserve(docs.size());
  for (const auto& doc : docs) {
    std::vector<TermId> ids;
    ids.reserve(doc.size());
    for (const auto& token : doc) {
      if (corpus.vocabulary.contains(token)) ids.push_back(corpus.vocabulary.id(token));
    }
    corpus.docs.push_back(std::move(ids));
  }
  return result;
}

PruneResult preprocess(const std::vector<RawDocument>& raw, const PreprocessConfig& cfg) {
  cfg.validate();
  std::vector<TokenList> tokens;
  std::vector<std::string> titles;
  tokens.reserve(raw.size());
  titles.reserve(raw.size());
  for (const auto& doc : raw) {
    tokens.push_back(tokenize(doc, cfg));
    titles.push_back(doc.title);
  }
  return prune_high_frequency(tokens, cfg.df_ratio_threshold, std::move(titles));
}

const std::set<std::string, std::less<>>& default_stopwords() {
  static const std::set<std::string, std::less<>> words = {
      "a",       "about",   "above",  "after",   "again",  "against", "all",     "also",
      "am",      "an",      "and",    "any",     "are",    "as",      "at",      "be",
      "because", "been",    "before", "being",   "below",  "between", "both",    "but",
      "by",      "can",     "could",  "did",     "do",     "does",    "doing",   "down",
      "during",  "each",    "few",    "for",     "from",   "further", "had",     "has",
      "have",    "having",  "he",     "her",     "here",   "hers",    "herself", "him",
      "himself", "his",     "how",    "however", "i",      "if",      "in",      "into",
      "is",      "it",      "its",    "itself",  "just",   "may",     "me",      "more",
      "most",    "must",    "my",     "myself",  "no",     "nor",     "not",     "now",
      "of",      "off",     "on",     "once",    "one",    "only",    "or",      "other",
      "our",     "ours",    "out",    "over",    "own",    "paper",   "same",    "she",
      "should",  "so",      "some",   "such",    "than",   "that",    "the",     "their",
      "theirs",  "them",    "then",   "there",   "these",  "they",    "this",    "those",
      "through", "thus",    "to",     "too",     "two",    "under",   "until",   "up",
      "use",     "used",    "using",  "very",    "via",    "was",     "we",      "were",
      "what",    "when",    "where",  "which",   "while",  "who",     "whom",    "why",
      "will",    "with",    "within", "without", "would",  "you",     "your",    "yours"};
  return words;
}

std::set<std::string, std::less<>> load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot open stopword file " + path.string());
  std::set<std::string, std::less<>> words;
  std::string line;
  while (std::getline(in, line)) {
    const auto word = trim(line);
    if (word.empty() || word.front() == '#') continue;
    words.emplace(word);
  }
  return words;
}

std::map<std::string, std::string> read_key_values(std::istream& in) {
  std::map<std::string, std::string> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto content = trim(line);
    if (content.empty() || content.front() == '#') continue;
    const auto eq = content.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
    const auto key = trim(content.substr(0, eq));
    if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    values[std::string(key)] = std::string(trim(content.substr(eq + 1)));
  }
  return values;
}

std::map<std::string, std::string> read_key_values_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return read_key_values(in);
}

}  // namespace topex
