#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "support/synthetic.hpp"
#include "topex/error.hpp"
#include "topex/model_io.hpp"

namespace topex {
namespace {

std::string dump(const TopicModel& m) {
  std::ostringstream out;
  save_model(m, out);
  return out.str();
}

TopicModel parse(const std::string& text) {
  std::istringstream in(text);
  return load_model(in);
}

TEST(ModelIo, RoundTripIsBitExact) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto m = testing::make_random_model(1 + seed % 5, 1 + seed % 9, 1 + seed % 7, seed, 0.05);
    m.hyper.seed = 0xFFFFFFFFFFFFFFFFULL - seed;
    m.titles[0] = "Quotes \" and, commas\nnewline";
    const auto loaded = parse(dump(m));
    EXPECT_EQ(loaded, m);
    EXPECT_EQ(dump(loaded), dump(m));
  }
}

TEST(ModelIo, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "topex_model_io_test.json";
  const auto m = testing::make_random_model(20, 15, 322, 4);
  save_model(m, path);
  const auto loaded = load_model(path);
  EXPECT_EQ(loaded.num_docs(), 322u);
  EXPECT_EQ(loaded.theta.rows(), 322u);
  EXPECT_EQ(loaded.theta.cols(), 20u);
  EXPECT_EQ(loaded, m);
  std::filesystem::remove(path);
}

TEST(ModelIo, HeaderFields) {
  const auto m = testing::make_random_model(2, 3, 4, 5);
  const auto j = nlohmann::json::parse(dump(m));
  for (const char* key : {"version", "k", "v", "d", "alpha", "beta", "iterations", "burn_in", "seed", "rng",
                          "phi", "theta", "vocabulary", "titles"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["rng"], "mt19937_64");
  EXPECT_EQ(j["k"], 2);
  EXPECT_EQ(j["phi"].size(), 6u);
  EXPECT_EQ(j["theta"].size(), 8u);
}

TEST(ModelIo, RejectsWrongMagic) {
  EXPECT_THROW(parse("\x89PNG\r\n\x1a\n garbage"), FormatError);
  EXPECT_THROW(parse("{\"format\":\"something-else\",\"version\":1}"), FormatError);
  EXPECT_THROW(parse(""), FormatError);
}

TEST(ModelIo, RejectsVersionMismatch) {
  auto j = nlohmann::json::parse(dump(testing::make_random_model(2, 3, 4, 5)));
  j["version"] = kModelFormatVersion + 1;
  try {
    parse(j.dump());
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("version"), std::string::npos);
  }
}

TEST(ModelIo, RejectsCorruptShapes) {
  const auto base = nlohmann::json::parse(dump(testing::make_random_model(2, 3, 4, 5)));
  auto j = base;
  j["phi"].erase(0);
  EXPECT_THROW(parse(j.dump()), FormatError);
  j = base;
  j["titles"].push_back("extra");
  EXPECT_THROW(parse(j.dump()), FormatError);
  j = base;
  j.erase("theta");
  EXPECT_THROW(parse(j.dump()), FormatError);
  j = base;
  j["alpha"] = "high";
  EXPECT_THROW(parse(j.dump()), FormatError);
  const auto text = base.dump();
  EXPECT_THROW(parse(text.substr(0, text.size() / 2)), FormatError);
}

TEST(ModelIo, MissingFile) {
  EXPECT_THROW(load_model(std::filesystem::path("/nonexistent/model.json")), FormatError);
}

}  // namespace
}  // namespace topex
