#include "topex/lda.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "topex/error.hpp"

namespace topex {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) throw std::invalid_argument("matrix data has wrong size");
}

Hyperparams Hyperparams::for_topics(std::uint32_t k) {
  Hyperparams h;
  h.k = k;
  h.alpha = k > 0 ? 50.0 / k : 0.0;
  return h;
}

void Hyperparams::validate() const {
  if (k < 1) throw ConfigError("k must be at least 1");
  if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
  if (!(beta > 0.0)) throw ConfigError("beta must be positive");
  if (iterations < 1) throw ConfigError("iterations must be at least 1");
  if (burn_in >= iterations) throw ConfigError("burn_in must be smaller than iterations");
  if (!(min_topic_prob >= 0.0 && min_topic_prob < 1.0))
    throw ConfigError("min_topic_prob must lie in [0, 1)");
}

GibbsSampler::GibbsSampler(const TokenizedCorpus& corpus, const Hyperparams& hyper)
    : corpus_(corpus),
      hyper_(hyper),
      alpha_(hyper.alpha),
      k_(hyper.k),
      v_(corpus.vocabulary.size()),
      rng_(hyper.seed) {
  hyper_.validate();
  if (corpus_.num_nonempty() == 0 || v_ == 0) throw CorpusError("empty corpus");

  const std::size_t num_docs = corpus_.num_docs();
  z_.resize(num_docs);
  doc_topic_.assign(num_docs * k_, 0);
  topic_word_.assign(k_ * v_, 0);
  topic_total_.assign(k_, 0);
  cumulative_.resize(k_);

  for (std::size_t d = 0; d < num_docs; ++d) {
    const auto& words = corpus_.docs[d];
    z_[d].resize(words.size());
    for (std::size_t n = 0; n < words.size(); ++n) {
      const TermId w = words[n];
      if (w >= v_) throw std::invalid_argument("token id out of vocabulary range");
      const auto topic = static_cast<std::uint32_t>(
          std::min<std::size_t>(static_cast<std::size_t>(uniform() * static_cast<double>(k_)), k_ - 1));
      z_[d][n] = topic;
      ++doc_topic_[d * k_ + topic];
      ++topic_word_[topic * v_ + w];
      ++topic_total_[topic];
    }
  }
}

double GibbsSampler::uniform() {
  return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

std::uint32_t GibbsSampler::draw_topic(std::size_t doc, TermId word) {
  const double vbeta = static_cast<double>(v_) * hyper_.beta;
  const std::uint32_t* doc_row = &doc_topic_[doc * k_];
  double total = 0.0;
  for (std::size_t i = 0; i < k_; ++i) {
    total += (doc_row[i] + alpha_) * (topic_word_[i * v_ + word] + hyper_.beta) /
             (topic_total_[i] + vbeta);
    cumulative_[i] = total;
  }
  const double u = uniform() * total;
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  return static_cast<std::uint32_t>(
      std::min<std::ptrdiff_t>(it - cumulative_.begin(), static_cast<std::ptrdiff_t>(k_) - 1));
}

void GibbsSampler::sweep() {
  for (std::size_t d = 0; d < corpus_.num_docs(); ++d) {
    const auto& words = corpus_.docs[d];
    auto& topics = z_[d];
    for (std::size_t n = 0; n < words.size(); ++n) {
      const TermId w = words[n];
      const std::uint32_t old_topic = topics[n];
      --doc_topic_[d * k_ + old_topic];
      --topic_word_[old_topic * v_ + w];
      --topic_total_[old_topic];

      const std::uint32_t new_topic = draw_topic(d, w);
      topics[n] = new_topic;
      ++doc_topic_[d * k_ + new_topic];
      ++topic_word_[new_topic * v_ + w];
      ++topic_total_[new_topic];
    }
  }
  ++sweeps_;
}

TopicModel GibbsSampler::estimate() const {
  TopicModel model;
  model.hyper = hyper_;
  model.vocabulary = corpus_.vocabulary.terms();
  model.titles = corpus_.titles;
  if (model.titles.empty()) {
    for (std::size_t d = 0; d < corpus_.num_docs(); ++d) model.titles.push_back("D" + std::to_string(d));
  }

  const double vbeta = static_cast<double>(v_) * hyper_.beta;
  model.phi = Matrix(k_, v_);
  for (std::size_t i = 0; i < k_; ++i) {
    const double denom = topic_total_[i] + vbeta;
    for (std::size_t x = 0; x < v_; ++x) model.phi(i, x) = (topic_word_[i * v_ + x] + hyper_.beta) / denom;
  }

  const double kalpha = static_cast<double>(k_) * alpha_;
  model.theta = Matrix(corpus_.num_docs(), k_);
  for (std::size_t d = 0; d < corpus_.num_docs(); ++d) {
    if (corpus_.docs[d].empty()) {
      for (std::size_t i = 0; i < k_; ++i) model.theta(d, i) = 1.0 / static_cast<double>(k_);
      continue;
    }
    const double denom = static_cast<double>(corpus_.docs[d].size()) + kalpha;
    for (std::size_t i = 0; i < k_; ++i) model.theta(d, i) = (doc_topic_[d * k_ + i] + alpha_) / denom;
  }
  return model;
}

bool GibbsSampler::counts_consistent() const {
  std::vector<std::uint32_t> doc_topic(doc_topic_.size(), 0);
  std::vector<std::uint32_t> topic_word(topic_word_.size(), 0);
  std::vector<std::uint32_t> topic_total(k_, 0);
  for (std::size_t d = 0; d < corpus_.num_docs(); ++d) {
    std::size_t row_sum = 0;
    for (std::size_t n = 0; n < z_[d].size(); ++n) {
      const auto t = z_[d][n];
      if (t >= k_) return false;
      ++doc_topic[d * k_ + t];
      ++topic_word[t * v_ + corpus_.docs[d][n]];
      ++topic_total[t];
    }
    for (std::size_t i = 0; i < k_; ++i) row_sum += doc_topic_[d * k_ + i];
    if (row_sum != corpus_.docs[d].size()) return false;
  }
  for (std::size_t i = 0; i < k_; ++i) {
    std::size_t row_sum = 0;
    for (std::size_t x = 0; x < v_; ++x) row_sum += topic_word_[i * v_ + x];
    if (row_sum != topic_total_[i]) return false;
  }
  return doc_topic == doc_topic_ && topic_word == topic_word_ && topic_total == topic_total_;
}

TopicModel train_gibbs(const TokenizedCorpus& corpus, const Hyperparams& hyper,
                       const SweepObserver& observer) {
  hyper.validate();
  GibbsSampler sampler(corpus, hyper);
  for (std::uint32_t it = 1; it <= hyper.iterations; ++it) {
    sampler.sweep();
    if (observer) observer(it, sampler);
  }
  return sampler.estimate();
}

std::vector<double> apply_min_threshold(std::span<const double> theta_row, double tau) {
  if (!(tau >= 0.0 && tau < 1.0)) throw ConfigError("min_topic_prob must lie in [0, 1)");
  std::vector<double> out(theta_row.begin(), theta_row.end());
  if (out.empty()) return out;
  const auto argmax = static_cast<std::size_t>(std::max_element(out.begin(), out.end()) - out.begin());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] < tau && i != argmax) out[i] = 0.0;
  }
  return out;
}

double log_likelihood(const TokenizedCorpus& corpus, const TopicModel& model) {
  const std::size_t k = model.num_topics();
  if (model.num_docs() != corpus.num_docs() || model.vocab_size() != corpus.vocabulary.size() ||
      model.theta.cols() != k)
    throw std::invalid_argument("model dimensions do not match the corpus");
  double ll = 0.0;
  for (std::size_t d = 0; d < corpus.num_docs(); ++d) {
    for (const TermId w : corpus.docs[d]) {
      if (w >= model.vocab_size()) throw std::invalid_argument("token id out of vocabulary range");
      double p = 0.0;
      for (std::size_t i = 0; i < k; ++i) p += model.theta(d, i) * model.phi(i, w);
      ll += std::log(p);
    }
  }
  return ll;
}

}  // namespace topex
