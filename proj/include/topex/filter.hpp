#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "topex/analytics.hpp"

namespace topex {

struct AxisRange {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double v) const { return lo <= v && v <= hi; }
  bool operator==(const AxisRange&) const = default;
};

// Interactive filter state. Topic ids are 0-based.
struct FilterState {
  DisplayMode mode = DisplayMode::kRank;
  std::map<std::uint32_t, AxisRange> axis_ranges;
  std::optional<std::string> keyword;
  std::set<DocId> excluded_docs;
  std::optional<std::set<DocId>> kept_docs;  // nullopt is the whole corpus
  std::set<std::uint32_t> hidden_topics;

  // Throws StateError when a bound is inverted or outside the mode's domain,
  // a topic id is >= num_topics, a hidden topic has a range, or kept and
  // excluded overlap. Rank bounds live in [1, K], probability bounds in [0, 1].
  void validate(std::size_t num_topics) const;

  bool operator==(const FilterState&) const = default;
};

struct Selection {
  std::vector<DocId> doc_ids;  // ascending
  std::size_t count() const { return doc_ids.size(); }

  bool contains(DocId d) const;
  bool operator==(const Selection&) const = default;
};

// Documents passing every active constraint: axis ranges in the active mode,
// keyword match against the top-n words, not excluded, inside the kept set.
// Hidden topics never constrain. Throws StateError on an invalid state.
Selection apply(const FilterState& state, const Analytics& analytics);

struct KeepResult {
  FilterState state;
  // Set when `current` was empty; the state is then returned unchanged.
  bool warning = false;
};

// Restricts future filtering to `current` and clears brushes and keyword.
KeepResult keep(const FilterState& state, const Selection& current);

// Adds `docs` to the excluded set and drops them from the kept set.
FilterState exclude(const FilterState& state, const std::set<DocId>& docs);

// Hides a topic axis, discarding any range on it.
FilterState remove_topic(const FilterState& state, std::uint32_t topic);
// Shows a hidden axis again. Its old range is not restored.
FilterState restore_topic(const FilterState& state, std::uint32_t topic);

// Case-insensitive exact match of the trimmed query against each document's
// top-n words. An empty query selects everything.
Selection search(std::string_view query, const Analytics& analytics);

// RFC-4180 CSV, CRLF line endings, header
// doc_id,title,top_words,T1_rank,...,TK_rank; top_words joined with ';'.
// Throws std::ios_base::failure when the stream goes bad.
void export_csv(const Selection& selection, const Analytics& analytics, std::ostream& out);
std::string export_csv(const Selection& selection, const Analytics& analytics);

// {"mode","axis_ranges":{"17":[1,3]},"keyword","excluded","kept","hidden"}
nlohmann::json to_json(const FilterState& state);
// Missing fields take their defaults. Throws StateError on malformed JSON.
FilterState filter_state_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Selection& selection);

}  // namespace topex
