#pragma once

#include <filesystem>
#include <istream>
#include <ostream>

#include "topex/lda.hpp"

namespace topex {

// Current model file version. Files with any other version are rejected.
inline constexpr int kModelFormatVersion = 1;

// JSON container: format tag, version, k, v, d, alpha, beta, iterations,
// burn_in, seed, rng, min_topic_prob, phi and theta as flat row-major arrays,
// vocabulary, titles. Doubles are written in shortest round-trip form, so
// save followed by load is bit-exact and output bytes are deterministic.
void save_model(const TopicModel& model, std::ostream& out);
void save_model(const TopicModel& model, const std::filesystem::path& path);

// Throws FormatError on unreadable, corrupt, or wrong-version input.
TopicModel load_model(std::istream& in);
TopicModel load_model(const std::filesystem::path& path);

}  // namespace topex
