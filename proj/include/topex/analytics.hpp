#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "topex/lda.hpp"

namespace topex {

enum class DisplayMode { kRank, kProbability };

std::string_view to_string(DisplayMode mode);
// Accepts "rank" and "probability".
std::optional<DisplayMode> parse_mode(std::string_view text);

struct WeightedTerm {
  TermId term_id = 0;
  std::string term;
  double p = 0.0;

  bool operator==(const WeightedTerm&) const = default;
};

using TopicWordList = std::vector<std::vector<WeightedTerm>>;
using WordScores = std::vector<WeightedTerm>;

struct AnalyticsConfig {
  std::size_t top_words_per_topic = 10;
  std::size_t top_words_per_doc = 10;

  // Throws ConfigError when either count is zero.
  void validate() const;
};

// Rank 1 is the most probable topic; ties go to the lower topic index.
std::vector<std::uint32_t> rank_topics(std::span<const double> theta_row);

// The k highest-phi terms of every topic (k capped at V), descending, ties by
// ascending term id.
TopicWordList top_topic_words(const Matrix& phi, std::span<const std::string> vocabulary,
                              std::size_t k);

// Word relevance for one document: score(x) = sum over topics i of
// phi(i, x) * theta_thresholded(doc, i), accumulated in ascending i. Returns
// the n best terms, descending, ties by ascending term id. Throws
// std::out_of_range for an unknown document.
WordScores doc_word_scores(const TopicModel& model, DocId doc, std::size_t n);

// Same as above with an already thresholded theta row.
WordScores word_scores_for_row(const Matrix& phi, std::span<const std::string> vocabulary,
                               std::span<const double> theta_row, std::size_t n);

// Everything the views consume, derived once from an immutable model.
class Analytics {
 public:
  Analytics(const TopicModel& model, AnalyticsConfig cfg = {});

  std::size_t num_docs() const { return titles_.size(); }
  std::size_t num_topics() const { return k_; }

  const std::string& title(DocId d) const { return titles_.at(d); }
  const std::vector<std::uint32_t>& ranks(DocId d) const { return ranks_.at(d); }
  std::span<const double> probabilities(DocId d) const { return thresholded_.row(d); }
  const WordScores& top_words(DocId d) const { return doc_words_.at(d); }
  const TopicWordList& topic_words() const { return topic_words_; }
  const Matrix& thresholded_theta() const { return thresholded_; }

  // Axis value of topic i for document d in the given mode.
  double axis_value(DocId d, std::size_t topic, DisplayMode mode) const;

  // Per-document axis rows: rank rows or thresholded probability rows.
  std::vector<std::vector<double>> distribution_view(DisplayMode mode) const;

  // {"topics":[{"id","label","words":[{"term","p"}]}]}
  nlohmann::json topics_json() const;
  // {"mode", "docs":[{"id","title","top_words","ranks","probs","values"}]}
  nlohmann::json documents_json(DisplayMode mode) const;

 private:
  std::size_t k_;
  std::vector<std::string> titles_;
  Matrix thresholded_;
  std::vector<std::vector<std::uint32_t>> ranks_;
  std::vector<WordScores> doc_words_;
  TopicWordList topic_words_;
};

// Display label of a 0-based topic id: "T1" for topic 0.
std::string topic_label(std::size_t topic);

}  // namespace topex
