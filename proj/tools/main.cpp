// topex: train topic models over a CSV corpus, inspect them, export filtered
// selections, and serve the exploration API.

#include <charconv>
#include <csignal>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "topex/analytics.hpp"
#include "topex/corpus.hpp"
#include "topex/error.hpp"
#include "topex/filter.hpp"
#include "topex/lda.hpp"
#include "topex/model_io.hpp"
#include "topex/server.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

// Raised for missing or invalid settings after flags and config are merged.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flags win over config-file keys, which win over defaults.
class Settings {
 public:
  void load(const std::string& path) { values_ = topex::read_key_values_file(path); }

  template <typename T>
  std::optional<T> get(const std::optional<T>& flag, const std::string& key) const {
    if (flag) return flag;
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return parse<T>(key, it->second);
  }

  template <typename T>
  T get(const std::optional<T>& flag, const std::string& key, T fallback) const {
    return get(flag, key).value_or(fallback);
  }

 private:
  template <typename T>
  static T parse(const std::string& key, const std::string& text) {
    if constexpr (std::is_same_v<T, std::string>) {
      return text;
    } else {
      T value{};
      const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
      if (ec != std::errc() || end != text.data() + text.size())
        throw UsageError("config key '" + key + "' has invalid value '" + text + "'");
      return value;
    }
  }

  std::map<std::string, std::string> values_;
};

std::string shortest(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return ec == std::errc() ? std::string(buf, end) : std::to_string(v);
}

struct TrainFlags {
  std::optional<std::string> config, corpus, model, stopword_file, title_column, body_column;
  std::optional<std::uint32_t> k, iterations, burn_in;
  std::optional<double> alpha, beta, df_ratio_threshold, min_topic_prob;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> min_token_length;
};

int run_train(const TrainFlags& f) {
  Settings s;
  if (f.config) s.load(*f.config);

  const auto corpus_path = s.get(f.corpus, "corpus_path");
  if (!corpus_path) throw UsageError("--corpus is required");
  const auto model_path = s.get(f.model, "model_path", std::string("model.json"));

  topex::IngestColumns columns;
  columns.title = s.get(f.title_column, "title_column", columns.title);
  columns.body = s.get(f.body_column, "body_column", columns.body);

  topex::PreprocessConfig pre;
  pre.df_ratio_threshold = s.get(f.df_ratio_threshold, "df_ratio_threshold", pre.df_ratio_threshold);
  pre.min_token_length = s.get(f.min_token_length, "min_token_length", pre.min_token_length);
  if (const auto stopwords = s.get(f.stopword_file, "stopword_file"))
    pre.stopwords = topex::load_stopwords(*stopwords);
  else
    pre.stopwords = topex::default_stopwords();

  auto hyper = topex::Hyperparams::for_topics(s.get(f.k, "k", std::uint32_t{20}));
  if (hyper.k < 1) throw UsageError("--k must be at least 1");
  hyper.alpha = s.get(f.alpha, "alpha", hyper.alpha);
  hyper.beta = s.get(f.beta, "beta", hyper.beta);
  hyper.iterations = s.get(f.iterations, "iterations", hyper.iterations);
  hyper.burn_in = s.get(f.burn_in, "burn_in", hyper.burn_in);
  hyper.seed = s.get(f.seed, "seed", std::uint64_t{0});
  hyper.min_topic_prob = s.get(f.min_topic_prob, "min_topic_prob", hyper.min_topic_prob);
  try {
    pre.validate();
    hyper.validate();
  } catch (const topex::ConfigError& e) {
    throw UsageError(e.what());
  }

  const auto raw = topex::ingest_file(*corpus_path, columns);
  auto prepared = topex::preprocess(raw, pre);
  const auto& corpus = prepared.corpus;
  std::cerr << "corpus: " << corpus.num_docs() << " documents, " << corpus.vocabulary.size()
            << " terms, " << corpus.num_tokens() << " tokens, " << prepared.removed_terms.size()
            << " high-frequency terms pruned\n";

  const auto report_every = std::max<std::uint32_t>(1, hyper.iterations / 10);
  const auto model = topex::train_gibbs(corpus, hyper, [&](std::uint32_t sweep, const topex::GibbsSampler&) {
    if (sweep % report_every == 0) std::cerr << "sweep " << sweep << "/" << hyper.iterations << "\n";
  });
  topex::save_model(model, std::filesystem::path(model_path));

  std::cout << "docs\t" << corpus.num_docs() << "\n"
            << "empty_docs\t" << corpus.num_docs() - corpus.num_nonempty() << "\n"
            << "vocabulary\t" << corpus.vocabulary.size() << "\n"
            << "topics\t" << hyper.k << "\n"
            << "pruned_terms\t" << prepared.removed_terms.size() << "\n"
            << "log_likelihood\t" << shortest(topex::log_likelihood(corpus, model)) << "\n"
            << "model\t" << model_path << "\n";
  return kExitOk;
}

int run_top_words(const std::string& model_path, std::size_t k) {
  if (k < 1) throw UsageError("--k must be at least 1");
  const auto model = topex::load_model(std::filesystem::path(model_path));
  const auto words = topex::top_topic_words(model.phi, model.vocabulary, k);
  std::cout << "topic\trank\tterm\tp\n";
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (std::size_t r = 0; r < words[i].size(); ++r)
      std::cout << topex::topic_label(i) << '\t' << r + 1 << '\t' << words[i][r].term << '\t'
                << shortest(words[i][r].p) << '\n';
  }
  return kExitOk;
}

int run_export(const std::string& model_path, const std::optional<std::string>& filter_path) {
  const auto model = topex::load_model(std::filesystem::path(model_path));
  const topex::Analytics analytics(model);
  topex::FilterState state;
  if (filter_path) {
    std::ifstream in(*filter_path);
    if (!in) throw std::runtime_error("cannot open filter file " + *filter_path);
    std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    if (text.find_first_not_of(" \t\r\n") != std::string::npos) {
      try {
        state = topex::filter_state_from_json(nlohmann::json::parse(text));
      } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(std::string("filter file is not valid JSON: ") + e.what());
      }
    }
  }
  topex::export_csv(topex::apply(state, analytics), analytics, std::cout);
  return kExitOk;
}

topex::ApiServer* g_server = nullptr;

void handle_signal(int) {
  if (g_server) g_server->stop();
}

struct ServeFlags {
  std::optional<std::string> config, model, static_dir, host;
  std::optional<int> port;
  std::optional<long> session_ttl_seconds;
};

int run_serve(const ServeFlags& f) {
  Settings s;
  if (f.config) s.load(*f.config);
  const auto model_path = s.get(f.model, "model_path");
  if (!model_path) throw UsageError("--model is required");

  topex::ServerConfig cfg;
  cfg.host = s.get(f.host, "host", cfg.host);
  cfg.port = s.get(f.port, "port", cfg.port);
  cfg.session_ttl = std::chrono::seconds(s.get(f.session_ttl_seconds, "session_ttl_seconds", 3600L));
  if (const auto dir = s.get(f.static_dir, "static_dir")) cfg.static_dir = *dir;

  auto explorer = std::make_shared<const topex::Explorer>(topex::load_model(std::filesystem::path(*model_path)));
  topex::ApiServer server(cfg);
  server.set_explorer(std::move(explorer));
  g_server = &server;
  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);
  std::cerr << "listening on " << cfg.host << ":" << cfg.port << "\n";
  const bool ok = server.listen();
  g_server = nullptr;
  if (!ok) {
    std::cerr << "error: could not listen on port " << cfg.port << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topic model training and corpus exploration"};
  app.require_subcommand(1);

  TrainFlags train;
  auto* train_cmd = app.add_subcommand("train", "Preprocess a CSV corpus, train LDA, and write a model file");
  train_cmd->add_option("--config", train.config, "key=value config file");
  train_cmd->add_option("--corpus", train.corpus, "CSV corpus with title and body columns");
  train_cmd->add_option("--model", train.model, "Output model path (default model.json)");
  train_cmd->add_option("--k", train.k, "Number of topics (default 20)");
  train_cmd->add_option("--alpha", train.alpha, "Document-topic concentration (default 50/k)");
  train_cmd->add_option("--beta", train.beta, "Topic-word concentration (default 0.01)");
  train_cmd->add_option("--iterations", train.iterations, "Gibbs sweeps (default 1000)");
  train_cmd->add_option("--burn-in", train.burn_in, "Burn-in sweeps (default 200)");
  train_cmd->add_option("--seed", train.seed, "RNG seed (default 0)");
  train_cmd->add_option("--df-ratio-threshold", train.df_ratio_threshold,
                        "Prune terms present in more than this fraction of documents (default 0.5)");
  train_cmd->add_option("--min-topic-prob", train.min_topic_prob, "Topic probability floor (default 0.01)");
  train_cmd->add_option("--stopword-file", train.stopword_file, "One stopword per line");
  train_cmd->add_option("--min-token-length", train.min_token_length, "Shortest kept token (default 3)");
  train_cmd->add_option("--title-column", train.title_column, "Title column name (default title)");
  train_cmd->add_option("--body-column", train.body_column, "Body column name (default body)");

  std::string top_model;
  std::size_t top_k = 10;
  auto* top_cmd = app.add_subcommand("top-words", "Print the top words of every topic as TSV");
  top_cmd->add_option("--model", top_model, "Model file")->required();
  top_cmd->add_option("--k", top_k, "Words per topic")->capture_default_str();

  std::string export_model;
  std::optional<std::string> export_filter;
  auto* export_cmd = app.add_subcommand("export", "Write the filtered selection as CSV to stdout");
  export_cmd->add_option("--model", export_model, "Model file")->required();
  export_cmd->add_option("--filter", export_filter, "Filter state JSON file");

  ServeFlags serve;
  auto* serve_cmd = app.add_subcommand("serve", "Serve the exploration API");
  serve_cmd->add_option("--config", serve.config, "key=value config file");
  serve_cmd->add_option("--model", serve.model, "Model file")->envname("TOPEX_MODEL_PATH");
  serve_cmd->add_option("--port", serve.port, "Port (default 8080)")->envname("TOPEX_PORT");
  serve_cmd->add_option("--host", serve.host, "Bind address (default 0.0.0.0)");
  serve_cmd->add_option("--session-ttl-seconds", serve.session_ttl_seconds, "Idle session expiry (default 3600)")
      ->envname("TOPEX_SESSION_TTL_SECONDS");
  serve_cmd->add_option("--static-dir", serve.static_dir, "UI bundle directory")->envname("TOPEX_STATIC_DIR");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*train_cmd) return run_train(train);
    if (*top_cmd) return run_top_words(top_model, top_k);
    if (*export_cmd) return run_export(export_model, export_filter);
    if (*serve_cmd) return run_serve(serve);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
