#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "topex/corpus.hpp"

namespace topex {

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  const std::vector<double>& data() const { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct Hyperparams {
  std::uint32_t k = 20;
  double alpha = 50.0 / 20;
  double beta = 0.01;
  std::uint32_t iterations = 1000;
  std::uint32_t burn_in = 200;
  std::uint64_t seed = 0;
  double min_topic_prob = 0.01;

  // Defaults with alpha = 50 / k.
  static Hyperparams for_topics(std::uint32_t k);

  // Throws ConfigError on k < 1, alpha <= 0, beta <= 0, burn_in >= iterations,
  // iterations < 1, or min_topic_prob outside [0, 1).
  void validate() const;

  bool operator==(const Hyperparams&) const = default;
};

// Name of the generator written into model files. Topic draws use
// std::mt19937_64 with doubles built from the top 53 bits of each output.
inline constexpr const char* kRngName = "mt19937_64";

struct TopicModel {
  Hyperparams hyper;
  Matrix phi;    // K x V, phi(i, x) = P(word x | topic i)
  Matrix theta;  // D x K, theta(y, i) = P(topic i | doc y), pre-threshold
  std::vector<std::string> vocabulary;
  std::vector<std::string> titles;

  std::size_t num_topics() const { return phi.rows(); }
  std::size_t vocab_size() const { return phi.cols(); }
  std::size_t num_docs() const { return theta.rows(); }

  bool operator==(const TopicModel&) const = default;
};

// Collapsed Gibbs sampler over a fixed corpus. The sampler keeps the corpus
// by reference; it must outlive the sampler.
class GibbsSampler {
 public:
  GibbsSampler(const TokenizedCorpus& corpus, const Hyperparams& hyper);

  // One full pass resampling every token's topic.
  void sweep();
  std::uint32_t sweeps_done() const { return sweeps_; }

  // Smoothed point estimate from the current assignment.
  TopicModel estimate() const;

  // Every doc-topic row sums to the doc length and every topic-word row sums
  // to the topic total, and both agree with the stored assignments.
  bool counts_consistent() const;

  const std::vector<std::vector<std::uint32_t>>& assignments() const { return z_; }

 private:
  double uniform();
  std::uint32_t draw_topic(std::size_t doc, TermId word);

  const TokenizedCorpus& corpus_;
  Hyperparams hyper_;
  double alpha_;
  std::size_t k_;
  std::size_t v_;
  std::mt19937_64 rng_;
  std::uint32_t sweeps_ = 0;

  std::vector<std::vector<std::uint32_t>> z_;
  std::vector<std::uint32_t> doc_topic_;   // D x K
  std::vector<std::uint32_t> topic_word_;  // K x V
  std::vector<std::uint32_t> topic_total_; // K
  std::vector<double> cumulative_;
};

// Called after each sweep with the 1-based sweep number.
using SweepObserver = std::function<void(std::uint32_t, const GibbsSampler&)>;

// Runs hyper.iterations sweeps and returns the final-state estimate.
// Throws CorpusError when every document is empty, ConfigError on bad
// hyperparameters. Same seed and corpus give a bit-identical model.
TopicModel train_gibbs(const TokenizedCorpus& corpus, const Hyperparams& hyper,
                       const SweepObserver& observer = {});

// Zeroes entries below tau without renormalizing. If every entry falls below
// tau the largest one (lowest index on ties) survives. Throws ConfigError
// when tau >= 1 or tau < 0.
std::vector<double> apply_min_threshold(std::span<const double> theta_row, double tau);

// Sum over tokens of log sum_i theta(d, i) * phi(i, w). Throws
// std::invalid_argument when the model and corpus dimensions disagree.
double log_likelihood(const TokenizedCorpus& corpus, const TopicModel& model);

}  // namespace topex
