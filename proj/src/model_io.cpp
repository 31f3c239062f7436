#include "topex/model_io.hpp"

#include <fstream>
#include <iterator>

#include "json.hpp"
#include "topex/error.hpp"

namespace topex {
namespace {

constexpr const char* kFormatTag = "topex-model";

template <typename T>
T field(const nlohmann::json& j, const char* name) {
  const auto it = j.find(name);
  if (it == j.end()) throw FormatError(std::string("model file is missing field '") + name + "'");
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw FormatError(std::string("model field '") + name + "' has the wrong type");
  }
}

}  // namespace

void save_model(const TopicModel& model, std::ostream& out) {
  const auto& h = model.hyper;
  nlohmann::ordered_json j;
  j["format"] = kFormatTag;
  j["version"] = kModelFormatVersion;
  j["k"] = model.num_topics();
  j["v"] = model.vocab_size();
  j["d"] = model.num_docs();
  j["alpha"] = h.alpha;
  j["beta"] = h.beta;
  j["iterations"] = h.iterations;
  j["burn_in"] = h.burn_in;
  j["seed"] = h.seed;
  j["rng"] = kRngName;
  j["min_topic_prob"] = h.min_topic_prob;
  j["phi"] = model.phi.data();
  j["theta"] = model.theta.data();
  j["vocabulary"] = model.vocabulary;
  j["titles"] = model.titles;
  out << j.dump() << '\n';
  if (!out) throw std::ios_base::failure("failed to write model");
}

void save_model(const TopicModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::ios_base::failure("cannot open " + path.string() + " for writing");
  save_model(model, out);
}

TopicModel load_model(std::istream& in) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("model file is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("format") || !j["format"].is_string() ||
      j["format"].get<std::string>() != kFormatTag)
    throw FormatError("not a topex model file");

  const int version = field<int>(j, "version");
  if (version != kModelFormatVersion)
    throw FormatError("unsupported model version " + std::to_string(version));

  const auto rng = field<std::string>(j, "rng");
  if (rng != kRngName) throw FormatError("unknown rng '" + rng + "'");

  TopicModel model;
  auto& h = model.hyper;
  const auto k = field<std::size_t>(j, "k");
  const auto v = field<std::size_t>(j, "v");
  const auto d = field<std::size_t>(j, "d");
  h.k = static_cast<std::uint32_t>(k);
  h.alpha = field<double>(j, "alpha");
  h.beta = field<double>(j, "beta");
  h.iterations = field<std::uint32_t>(j, "iterations");
  h.burn_in = field<std::uint32_t>(j, "burn_in");
  h.seed = field<std::uint64_t>(j, "seed");
  h.min_topic_prob = field<double>(j, "min_topic_prob");

  auto phi = field<std::vector<double>>(j, "phi");
  auto theta = field<std::vector<double>>(j, "theta");
  if (phi.size() != k * v) throw FormatError("phi has " + std::to_string(phi.size()) + " entries, expected k*v");
  if (theta.size() != d * k) throw FormatError("theta has " + std::to_string(theta.size()) + " entries, expected d*k");
  model.phi = Matrix(k, v, std::move(phi));
  model.theta = Matrix(d, k, std::move(theta));
  model.vocabulary = field<std::vector<std::string>>(j, "vocabulary");
  model.titles = field<std::vector<std::string>>(j, "titles");
  if (model.vocabulary.size() != v) throw FormatError("vocabulary size does not match v");
  if (model.titles.size() != d) throw FormatError("titles count does not match d");
  try {
    h.validate();
  } catch (const ConfigError& e) {
    throw FormatError(std::string("model hyperparameters invalid: ") + e.what());
  }
  return model;
}

TopicModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open model file " + path.string());
  return load_model(in);
}

}  // namespace topex
