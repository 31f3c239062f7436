#include "topex/analytics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "topex/error.hpp"

namespace topex {
namespace {

// Indices of the n largest values, descending, ties by ascending index.
std::vector<std::size_t> top_indices(std::span<const double> values, std::size_t n) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto by_value = [&](std::size_t a, std::size_t b) {
    return values[a] > values[b] || (values[a] == values[b] && a < b);
  };
  n = std::min(n, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n), order.end(), by_value);
  order.resize(n);
  return order;
}

}  // namespace

std::string_view to_string(DisplayMode mode) {
  return mode == DisplayMode::kRank ? "rank" : "probability";
}

std::optional<DisplayMode> parse_mode(std::string_view text) {
  if (text == "rank") return DisplayMode::kRank;
  if (text == "probability") return DisplayMode::kProbability;
  return std::nullopt;
}

std::string topic_label(std::size_t topic) { return "T" + std::to_string(topic + 1); }

void AnalyticsConfig::validate() const {
  if (top_words_per_topic < 1) throw ConfigError("top_words_per_topic must be at least 1");
  if (top_words_per_doc < 1) throw ConfigError("top_words_per_doc must be at least 1");
}

std::vector<std::uint32_t> rank_topics(std::span<const double> theta_row) {
  const auto order = top_indices(theta_row, theta_row.size());
  std::vector<std::uint32_t> ranks(theta_row.size());
  for (std::size_t r = 0; r < order.size(); ++r) ranks[order[r]] = static_cast<std::uint32_t>(r + 1);
  return ranks;
}

TopicWordList top_topic_words(const Matrix& phi, std::span<const std::string> vocabulary,
                              std::size_t k) {
  if (vocabulary.size() != phi.cols()) throw std::invalid_argument("vocabulary size does not match phi");
  TopicWordList out(phi.rows());
  for (std::size_t i = 0; i < phi.rows(); ++i) {
    const auto row = phi.row(i);
    for (const auto x : top_indices(row, k))
      out[i].push_back({static_cast<TermId>(x), vocabulary[x], row[x]});
  }
  return out;
}

WordScores word_scores_for_row(const Matrix& phi, std::span<const std::string> vocabulary,
                               std::span<const double> theta_row, std::size_t n) {
  if (theta_row.size() != phi.rows()) throw std::invalid_argument("theta row length does not match K");
  if (vocabulary.size() != phi.cols()) throw std::invalid_argument("vocabulary size does not match phi");
  std::vector<double> scores(phi.cols(), 0.0);
  for (std::size_t x = 0; x < phi.cols(); ++x) {
    double s = 0.0;
    for (std::size_t i = 0; i < phi.rows(); ++i) s += phi(i, x) * theta_row[i];
    scores[x] = s;
  }
  WordScores out;
  for (const auto x : top_indices(scores, n))
    out.push_back({static_cast<TermId>(x), vocabulary[x], scores[x]});
  return out;
}

WordScores doc_word_scores(const TopicModel& model, DocId doc, std::size_t n) {
  if (doc >= model.num_docs()) throw std::out_of_range("document id " + std::to_string(doc) + " out of range");
  const auto row = apply_min_threshold(model.theta.row(doc), model.hyper.min_topic_prob);
  return word_scores_for_row(model.phi, model.vocabulary, row, n);
}

Analytics::Analytics(const TopicModel& model, AnalyticsConfig cfg)
    : k_(model.num_topics()), titles_(model.titles) {
  cfg.validate();
  if (titles_.size() != model.num_docs()) throw std::invalid_argument("model titles do not match D");

  const std::size_t num_docs = model.num_docs();
  thresholded_ = Matrix(num_docs, k_);
  ranks_.reserve(num_docs);
  doc_words_.reserve(num_docs);
  for (std::size_t d = 0; d < num_docs; ++d) {
    const auto row = apply_min_threshold(model.theta.row(d), model.hyper.min_topic_prob);
    std::copy(row.begin(), row.end(), thresholded_.row(d).begin());
    ranks_.push_back(rank_topics(row));
    doc_words_.push_back(word_scores_for_row(model.phi, model.vocabulary, row, cfg.top_words_per_doc));
  }
  topic_words_ = top_topic_words(model.phi, model.vocabulary, cfg.top_words_per_topic);
}

double Analytics::axis_value(DocId d, std::size_t topic, DisplayMode mode) const {
  return mode == DisplayMode::kRank ? static_cast<double>(ranks_.at(d).at(topic))
                                    : thresholded_(d, topic);
}

std::vector<std::vector<double>> Analytics::distribution_view(DisplayMode mode) const {
  std::vector<std::vector<double>> rows(num_docs());
  for (DocId d = 0; d < num_docs(); ++d) {
    rows[d].reserve(k_);
    for (std::size_t i = 0; i < k_; ++i) rows[d].push_back(axis_value(d, i, mode));
  }
  return rows;
}

nlohmann::json Analytics::topics_json() const {
  auto topics = nlohmann::json::array();
  for (std::size_t i = 0; i < topic_words_.size(); ++i) {
    auto words = nlohmann::json::array();
    for (const auto& w : topic_words_[i]) words.push_back({{"term", w.term}, {"p", w.p}});
    topics.push_back({{"id", i}, {"label", topic_label(i)}, {"words", std::move(words)}});
  }
  return {{"topics", std::move(topics)}};
}

nlohmann::json Analytics::documents_json(DisplayMode mode) const {
  auto docs = nlohmann::json::array();
  for (DocId d = 0; d < num_docs(); ++d) {
    auto words = nlohmann::json::array();
    for (const auto& w : doc_words_[d]) words.push_back({{"term", w.term}, {"p", w.p}});
    const auto probs = probabilities(d);
    nlohmann::json values = mode == DisplayMode::kRank ? nlohmann::json(ranks_[d])
                                                        : nlohmann::json(std::vector<double>(probs.begin(), probs.end()));
    docs.push_back({{"id", d},
                    {"title", titles_[d]},
                    {"top_words", std::move(words)},
                    {"ranks", ranks_[d]},
                    {"probs", std::vector<double>(probs.begin(), probs.end())},
                    {"values", std::move(values)}});
  }
  return {{"mode", to_string(mode)}, {"docs", std::move(docs)}};
}

}  // namespace topex
