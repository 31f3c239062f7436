#include "topex/filter.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "topex/csv.hpp"
#include "topex/error.hpp"

namespace topex {
namespace {

std::string normalize_keyword(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  std::string out(text.substr(first, last - first + 1));
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool has_top_word(const Analytics& analytics, DocId d, const std::string& keyword) {
  const auto& words = analytics.top_words(d);
  return std::any_of(words.begin(), words.end(),
                     [&](const WeightedTerm& w) { return normalize_keyword(w.term) == keyword; });
}

template <typename T>
std::set<T> id_set(const nlohmann::json& j, const char* name) {
  if (!j.is_array()) throw StateError(std::string("'") + name + "' must be an array");
  std::set<T> out;
  for (const auto& v : j) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
      throw StateError(std::string("'") + name + "' entries must be non-negative integers");
    out.insert(v.get<T>());
  }
  return out;
}

}  // namespace

void FilterState::validate(std::size_t num_topics) const {
  const double k = static_cast<double>(num_topics);
  for (const auto& [topic, range] : axis_ranges) {
    const std::string where = "range on topic " + std::to_string(topic);
    if (topic >= num_topics) throw StateError(where + ": unknown topic");
    if (hidden_topics.contains(topic)) throw StateError(where + ": topic is hidden");
    if (!(range.lo <= range.hi)) throw StateError(where + ": lo > hi");
    if (mode == DisplayMode::kRank) {
      if (range.lo < 1.0 || range.hi > k) throw StateError(where + ": rank bounds must lie in [1, K]");
    } else if (range.lo < 0.0 || range.hi > 1.0) {
      throw StateError(where + ": probability bounds must lie in [0, 1]");
    }
  }
  for (const auto topic : hidden_topics) {
    if (topic >= num_topics) throw StateError("hidden topic " + std::to_string(topic) + " is unknown");
  }
  if (kept_docs) {
    for (const auto d : *kept_docs) {
      if (excluded_docs.contains(d))
        throw StateError("document " + std::to_string(d) + " is both kept and excluded");
    }
  }
}

bool Selection::contains(DocId d) const { return std::binary_search(doc_ids.begin(), doc_ids.end(), d); }

Selection apply(const FilterState& state, const Analytics& analytics) {
  state.validate(analytics.num_topics());
  const std::string keyword = state.keyword ? normalize_keyword(*state.keyword) : std::string();

  Selection out;
  for (DocId d = 0; d < analytics.num_docs(); ++d) {
    if (state.excluded_docs.contains(d)) continue;
    if (state.kept_docs && !state.kept_docs->contains(d)) continue;
    const bool in_ranges = std::all_of(state.axis_ranges.begin(), state.axis_ranges.end(), [&](const auto& entry) {
      return entry.second.contains(analytics.axis_value(d, entry.first, state.mode));
    });
    if (!in_ranges) continue;
    if (!keyword.empty() && !has_top_word(analytics, d, keyword)) continue;
    out.doc_ids.push_back(d);
  }
  return out;
}

KeepResult keep(const FilterState& state, const Selection& current) {
  if (current.doc_ids.empty()) return {state, true};
  FilterState next = state;
  std::set<DocId> kept(current.doc_ids.begin(), current.doc_ids.end());
  if (state.kept_docs) {
    std::erase_if(kept, [&](DocId d) { return !state.kept_docs->contains(d); });
  }
  for (const auto d : state.excluded_docs) kept.erase(d);
  next.kept_docs = std::move(kept);
  next.axis_ranges.clear();
  next.keyword.reset();
  return {std::move(next), false};
}

FilterState exclude(const FilterState& state, const std::set<DocId>& docs) {
  FilterState next = state;
  next.excluded_docs.insert(docs.begin(), docs.end());
  if (next.kept_docs) {
    for (const auto d : docs) next.kept_docs->erase(d);
  }
  return next;
}

FilterState remove_topic(const FilterState& state, std::uint32_t topic) {
  FilterState next = state;
  next.hidden_topics.insert(topic);
  next.axis_ranges.erase(topic);
  return next;
}

FilterState restore_topic(const FilterState& state, std::uint32_t topic) {
  FilterState next = state;
  next.hidden_topics.erase(topic);
  return next;
}

Selection search(std::string_view query, const Analytics& analytics) {
  const std::string keyword = normalize_keyword(query);
  Selection out;
  for (DocId d = 0; d < analytics.num_docs(); ++d) {
    if (keyword.empty() || has_top_word(analytics, d, keyword)) out.doc_ids.push_back(d);
  }
  return out;
}

void export_csv(const Selection& selection, const Analytics& analytics, std::ostream& out) {
  csv::Row header{"doc_id", "title", "top_words"};
  for (std::size_t i = 0; i < analytics.num_topics(); ++i) header.push_back(topic_label(i) + "_rank");
  csv::write_row(out, header);

  std::vector<DocId> ids = selection.doc_ids;
  std::sort(ids.begin(), ids.end());
  for (const auto d : ids) {
    csv::Row row{std::to_string(d), analytics.title(d)};
    std::string words;
    for (const auto& w : analytics.top_words(d)) {
      if (!words.empty()) words.push_back(';');
      words += w.term;
    }
    row.push_back(std::move(words));
    for (const auto r : analytics.ranks(d)) row.push_back(std::to_string(r));
    csv::write_row(out, row);
  }
  out.flush();
  if (!out) throw std::ios_base::failure("failed to write CSV export");
}

std::string export_csv(const Selection& selection, const Analytics& analytics) {
  std::ostringstream out;
  export_csv(selection, analytics, out);
  return out.str();
}

nlohmann::json to_json(const FilterState& state) {
  nlohmann::json ranges = nlohmann::json::object();
  for (const auto& [topic, range] : state.axis_ranges)
    ranges[std::to_string(topic)] = {range.lo, range.hi};
  nlohmann::json j;
  j["mode"] = to_string(state.mode);
  j["axis_ranges"] = std::move(ranges);
  j["keyword"] = state.keyword ? nlohmann::json(*state.keyword) : nlohmann::json(nullptr);
  j["excluded"] = state.excluded_docs;
  j["kept"] = state.kept_docs ? nlohmann::json(*state.kept_docs) : nlohmann::json(nullptr);
  j["hidden"] = state.hidden_topics;
  return j;
}

FilterState filter_state_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw StateError("filter state must be a JSON object");
  FilterState state;
  if (const auto it = j.find("mode"); it != j.end()) {
    if (!it->is_string()) throw StateError("'mode' must be a string");
    const auto mode = parse_mode(it->get<std::string>());
    if (!mode) throw StateError("unknown mode '" + it->get<std::string>() + "'");
    state.mode = *mode;
  }
  if (const auto it = j.find("axis_ranges"); it != j.end() && !it->is_null()) {
    if (!it->is_object()) throw StateError("'axis_ranges' must be an object");
    for (const auto& [key, value] : it->items()) {
      std::uint32_t topic = 0;
      try {
        std::size_t used = 0;
        const unsigned long parsed = std::stoul(key, &used);
        if (used != key.size() || key.front() == '-') throw std::invalid_argument(key);
        topic = static_cast<std::uint32_t>(parsed);
      } catch (const std::exception&) {
        throw StateError("axis_ranges key '" + key + "' is not a topic id");
      }
      if (!value.is_array() || value.size() != 2 || !value[0].is_number() || !value[1].is_number())
        throw StateError("axis range for topic " + key + " must be [lo, hi]");
      state.axis_ranges[topic] = {value[0].get<double>(), value[1].get<double>()};
    }
  }
  if (const auto it = j.find("keyword"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw StateError("'keyword' must be a string");
    auto keyword = normalize_keyword(it->get<std::string>());
    if (!keyword.empty()) state.keyword = std::move(keyword);
  }
  if (const auto it = j.find("excluded"); it != j.end() && !it->is_null())
    state.excluded_docs = id_set<DocId>(*it, "excluded");
  if (const auto it = j.find("kept"); it != j.end() && !it->is_null())
    state.kept_docs = id_set<DocId>(*it, "kept");
  if (const auto it = j.find("hidden"); it != j.end() && !it->is_null())
    state.hidden_topics = id_set<std::uint32_t>(*it, "hidden");
  return state;
}

nlohmann::json to_json(const Selection& selection) {
  return {{"doc_ids", selection.doc_ids}, {"count", selection.count()}};
}

}  // namespace topex
