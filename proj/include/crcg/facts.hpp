#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crcg/types.hpp"

namespace crcg {

// Two emission styles for the logic-fact text format. The CRAFT style packs
// an object's attribute facts with no separator and emits
// counterfact/option/feature query facts; the CLEVRER style separates packed
// facts with a space and emits question/choice query facts.
enum class FactDialect { craft, clevrer };

struct OptionFact {
  int index = 0;
  int qobj1 = 0;
  EventKind kind = EventKind::collide;
  int qobj2 = 0;
  bool operator==(const OptionFact&) const = default;
};

struct ChoiceFact {
  int choice = 0;
  int slot = 0;
  std::string feature;
  bool operator==(const ChoiceFact&) const = default;
};

struct CountingFact {
  EventKind kind = EventKind::collide;
  int qobj = 0;
  bool operator==(const CountingFact&) const = default;
};

struct QueryFacts {
  bool remove_any = false;
  std::vector<int> removed_qobjs;                               // counterfact(remove,qobj(I))
  std::vector<std::pair<int, std::vector<std::string>>> qobjs;  // qobj index -> feature values
  std::vector<OptionFact> options;
  std::optional<CountingFact> counting;
  bool negated = false;
  std::vector<std::pair<bool, std::string>> question;  // question(yes|no, feature)
  std::vector<ChoiceFact> choices;

  const std::vector<std::string>* qobj_features(int index) const;
  bool operator==(const QueryFacts&) const = default;
};

struct FactsDocument {
  FactDialect dialect = FactDialect::craft;
  std::vector<ObjectRecord> objects;
  EventSet events;
  QueryFacts query;

  bool operator==(const FactsDocument&) const = default;
};

// Renders the document in its dialect's layout, one block per section.
std::string emit_facts(const FactsDocument& doc);

// Parses fact text in either dialect. Whitespace and line breaks between
// facts are free-form; '%' starts a comment. Malformed facts raise
// parse_error with the 1-based line number.
FactsDocument parse_facts(const std::string& text);

// Expands the document's query facts into resolved-selector-free queries,
// applying the choice/question-to-option conversion for the CLEVRER dialect.
// Returns (option index, query) pairs; counting documents yield one entry.
std::vector<std::pair<int, Query>> facts_to_queries(const FactsDocument& doc);

}  // namespace crcg
