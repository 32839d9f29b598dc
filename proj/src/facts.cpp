#include "crcg/facts.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "crcg/core.hpp"

namespace crcg {

const std::vector<std::string>* QueryFacts::qobj_features(int index) const {
  for (const auto& [i, feats] : qobjs)
    if (i == index) return &feats;
  return nullptr;
}

namespace {

// Attribute emission order differs between the two dialects; absent
// attributes are skipped.
const char* kCraftOrder[] = {"size", "color", "shape", "material"};
const char* kClevrerOrder[] = {"color", "material", "shape", "size"};

std::string object_line(const ObjectRecord& o, FactDialect dialect) {
  std::string sep = dialect == FactDialect::clevrer ? ". " : ".";
  const auto& order = dialect == FactDialect::clevrer ? kClevrerOrder : kCraftOrder;
  std::string line;
  for (const char* attr : order) {
    auto it = o.features.find(attr);
    if (it == o.features.end()) continue;
    if (!line.empty()) line += sep;
    line += std::string(attr) + "(" + std::to_string(o.id) + "," + it->second + ")";
  }
  return line.empty() ? line : line + ".";
}

std::string qobj_text(int index) { return "qobj(" + std::to_string(index) + ")"; }

std::string packed_qobj_features(const QueryFacts& q, int index) {
  std::string line;
  if (const auto* feats = q.qobj_features(index))
    for (const auto& f : *feats) line += "feature(" + qobj_text(index) + "," + f + ").";
  return line;
}

struct Emitter {
  std::string out;
  bool any_block = false;

  void block(const std::vector<std::string>& lines) {
    if (lines.empty()) return;
    if (any_block) out += "\n";
    for (const auto& l : lines) out += l + "\n";
    any_block = true;
  }
  // Appends to the previous block without a separating blank line.
  void append(const std::vector<std::string>& lines) {
    for (const auto& l : lines) out += l + "\n";
    if (!lines.empty()) any_block = true;
  }
};

}  // namespace

std::string emit_facts(const FactsDocument& doc) {
  Emitter em;

  std::vector<std::string> object_lines;
  for (const auto& o : doc.objects) {
    std::string line = object_line(o, doc.dialect);
    if (!line.empty()) object_lines.push_back(line);
  }
  em.block(object_lines);

  std::vector<std::string> event_lines;
  for (const auto& e : doc.events)
    if (e.kind == EventKind::collide)
      event_lines.push_back("collision(" + std::to_string(e.a) + "," + std::to_string(e.b) + "," +
                            std::to_string(e.frame) + ").");
  for (const auto& e : doc.events)
    if (e.kind == EventKind::enter)
      event_lines.push_back("enter(" + std::to_string(e.a) + "," + std::to_string(e.b) + "," +
                            std::to_string(e.frame) + ").");
  if (doc.dialect == FactDialect::craft)
    em.append(event_lines);
  else
    em.block(event_lines);

  const QueryFacts& q = doc.query;
  if (q.remove_any) {
    em.block({"counterfact(remove,any)."});
  } else if (!q.removed_qobjs.empty()) {
    std::vector<std::string> lines;
    for (int idx : q.removed_qobjs) {
      lines.push_back("counterfact(remove," + qobj_text(idx) + ").");
      if (const auto* feats = q.qobj_features(idx))
        for (const auto& f : *feats) lines.push_back("feature(" + qobj_text(idx) + "," + f + ").");
    }
    em.block(lines);
  }

  if (q.counting) {
    std::vector<std::string> lines;
    lines.push_back("query(counting," + to_string(q.counting->kind) + "," +
                    qobj_text(q.counting->qobj) + ").");
    std::string feats = packed_qobj_features(q, q.counting->qobj);
    if (!feats.empty()) lines.push_back(feats);
    em.block(lines);
  }

  for (const auto& opt : q.options) {
    std::vector<std::string> lines;
    lines.push_back("option(" + std::to_string(opt.index) + ", " + qobj_text(opt.qobj1) + ", " +
                    to_string(opt.kind) + ", " + qobj_text(opt.qobj2) + ").");
    std::string f1 = packed_qobj_features(q, opt.qobj1);
    if (!f1.empty()) lines.push_back(f1);
    std::string f2 = packed_qobj_features(q, opt.qobj2);
    if (!f2.empty()) lines.push_back(f2);
    em.block(lines);
  }

  if (!q.question.empty()) {
    std::string line;
    for (const auto& [yes, feat] : q.question)
      line += std::string("question(") + (yes ? "yes" : "no") + "," + feat + ").";
    em.block({line});
  }

  if (!q.choices.empty()) {
    std::vector<std::string> lines;
    std::string line;
    int cur_choice = q.choices.front().choice, cur_slot = q.choices.front().slot;
    std::vector<std::string> group;
    for (const auto& c : q.choices) {
      if (c.choice != cur_choice || c.slot != cur_slot) {
        group.push_back(line);
        line.clear();
        if (c.choice != cur_choice) {
          em.block(group);
          group.clear();
        }
        cur_choice = c.choice;
        cur_slot = c.slot;
      }
      line += "choice(" + std::to_string(c.choice) + ", " + std::to_string(c.slot) + ", " +
              c.feature + ").";
    }
    group.push_back(line);
    em.block(group);
  }

  if (q.negated && q.question.empty()) em.block({"query(negated)."});

  return em.out;
}

namespace {

struct Arg {
  enum class Kind { number, symbol, qobj } kind = Kind::symbol;
  long number = 0;
  std::string symbol;
  int qobj = 0;
};

class FactReader {
public:
  explicit FactReader(const std::string& text) : text_(text) {}

  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }

  int line() const { return line_; }

  std::pair<std::string, std::vector<Arg>> read_fact() {
    skip_space();
    std::string pred = read_ident();
    expect('(');
    std::vector<Arg> args;
    while (true) {
      args.push_back(read_arg());
      skip_space();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      break;
    }
    expect(')');
    expect('.');
    return {pred, args};
  }

private:
  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void expect(char c) {
    skip_space();
    if (peek() != c)
      fail(ErrorCode::parse_error,
           "line " + std::to_string(line_) + ": expected '" + c + "'" +
               (pos_ < text_.size() ? std::string(", found '") + text_[pos_] + "'" : ", found end of input"));
    ++pos_;
  }

  std::string read_ident() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    if (start == pos_)
      fail(ErrorCode::parse_error, "line " + std::to_string(line_) + ": expected identifier");
    return text_.substr(start, pos_ - start);
  }

  Arg read_arg() {
    skip_space();
    Arg arg;
    char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-') {
      std::size_t start = pos_;
      if (c == '-') ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      arg.kind = Arg::Kind::number;
      arg.number = std::stol(text_.substr(start, pos_ - start));
      return arg;
    }
    std::string ident = read_ident();
    skip_space();
    if (ident == "qobj" && peek() == '(') {
      ++pos_;
      skip_space();
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_)
        fail(ErrorCode::parse_error, "line " + std::to_string(line_) + ": expected qobj index");
      arg.kind = Arg::Kind::qobj;
      arg.qobj = std::stoi(text_.substr(start, pos_ - start));
      expect(')');
      return arg;
    }
    arg.kind = Arg::Kind::symbol;
    arg.symbol = ident;
    return arg;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

EventKind event_kind_from_symbol(const std::string& s, int line) {
  if (s == "collide") return EventKind::collide;
  if (s == "enter") return EventKind::enter;
  fail(ErrorCode::parse_error, "line " + std::to_string(line) + ": unknown event kind '" + s + "'");
}

bool is_attribute(const std::string& pred) {
  return pred == "size" || pred == "color" || pred == "shape" || pred == "material";
}

}  // namespace

FactsDocument parse_facts(const std::string& text) {
  FactsDocument doc;
  FactReader reader(text);

  auto arg_error = [&](const std::string& pred) -> void {
    fail(ErrorCode::parse_error,
         "line " + std::to_string(reader.line()) + ": bad arguments for " + pred);
  };
  auto record_for = [&](ObjectId id) -> ObjectRecord& {
    for (auto& o : doc.objects)
      if (o.id == id) return o;
    doc.objects.push_back(ObjectRecord{id, {}});
    return doc.objects.back();
  };
  auto qobj_feats = [&](int index) -> std::vector<std::string>& {
    for (auto& [i, feats] : doc.query.qobjs)
      if (i == index) return feats;
    doc.query.qobjs.push_back({index, {}});
    return doc.query.qobjs.back().second;
  };

  while (!reader.at_end()) {
    int line = reader.line();
    auto [pred, args] = reader.read_fact();
    auto num = [&](std::size_t i) {
      if (i >= args.size() || args[i].kind != Arg::Kind::number) arg_error(pred);
      return static_cast<int>(args[i].number);
    };
    auto sym = [&](std::size_t i) -> const std::string& {
      if (i >= args.size() || args[i].kind != Arg::Kind::symbol) arg_error(pred);
      return args[i].symbol;
    };
    auto qobj = [&](std::size_t i) {
      if (i >= args.size() || args[i].kind != Arg::Kind::qobj) arg_error(pred);
      return args[i].qobj;
    };

    if (is_attribute(pred)) {
      if (args.size() != 2) arg_error(pred);
      record_for(num(0)).features[pred] = sym(1);
    } else if (pred == "collision" || pred == "enter") {
      if (args.size() != 3) arg_error(pred);
      doc.events.push_back(Event{pred == "collision" ? EventKind::collide : EventKind::enter,
                                 num(0), num(1), num(2)});
    } else if (pred == "counterfact") {
      if (args.size() != 2 || sym(0) != "remove") arg_error(pred);
      if (args[1].kind == Arg::Kind::symbol && args[1].symbol == "any")
        doc.query.remove_any = true;
      else
        doc.query.removed_qobjs.push_back(qobj(1));
    } else if (pred == "feature") {
      if (args.size() != 2) arg_error(pred);
      qobj_feats(qobj(0)).push_back(sym(1));
    } else if (pred == "option") {
      if (args.size() != 4) arg_error(pred);
      doc.query.options.push_back(
          OptionFact{num(0), qobj(1), event_kind_from_symbol(sym(2), line), qobj(3)});
    } else if (pred == "query") {
      if (args.size() == 1 && sym(0) == "negated") {
        doc.query.negated = true;
      } else if (args.size() == 3 && sym(0) == "counting") {
        doc.query.counting = CountingFact{event_kind_from_symbol(sym(1), line), qobj(2)};
      } else {
        arg_error(pred);
      }
    } else if (pred == "question") {
      if (args.size() != 2) arg_error(pred);
      const std::string& polarity = sym(0);
      if (polarity != "yes" && polarity != "no") arg_error(pred);
      doc.query.question.push_back({polarity == "yes", sym(1)});
      if (polarity == "no") doc.query.negated = true;
    } else if (pred == "choice") {
      if (args.size() != 3) arg_error(pred);
      doc.query.choices.push_back(ChoiceFact{num(0), num(1), sym(2)});
    } else {
      fail(ErrorCode::parse_error,
           "line " + std::to_string(line) + ": unknown predicate '" + pred + "'");
    }
  }

  doc.dialect = (!doc.query.question.empty() || !doc.query.choices.empty() ||
                 std::any_of(doc.objects.begin(), doc.objects.end(),
                             [](const ObjectRecord& o) { return o.features.count("material") > 0; }))
                    ? FactDialect::clevrer
                    : FactDialect::craft;
  return doc;
}

std::vector<std::pair<int, Query>> facts_to_queries(const FactsDocument& doc) {
  const QueryFacts& q = doc.query;

  auto qobj_selector = [&](int index) {
    const auto* feats = q.qobj_features(index);
    return Selector::of_features(feats ? *feats : std::vector<std::string>{});
  };

  std::vector<Selector> removed;
  // The CLEVRER encoding derives the removed qobj's features from the
  // question facts; the CRAFT encoding states them directly.
  if (!q.question.empty()) {
    std::vector<std::string> feats;
    for (const auto& [_, f] : q.question) feats.push_back(f);
    removed.push_back(Selector::of_features(std::move(feats)));
  } else {
    for (int idx : q.removed_qobjs) removed.push_back(qobj_selector(idx));
  }

  std::vector<std::pair<int, Query>> out;

  if (q.counting) {
    Query query;
    query.variant = QueryVariant::counting;
    query.removed = removed;
    query.intervened = removed;
    query.kind = q.counting->kind;
    query.o2 = qobj_selector(q.counting->qobj);
    query.negated = q.negated;
    out.push_back({0, query});
    return out;
  }

  auto make_pair_query = [&](const Selector& o1, EventKind kind, const Selector& o2) {
    Query query;
    query.variant = q.remove_any ? QueryVariant::remove_any : QueryVariant::pair_event;
    if (!q.remove_any) {
      query.removed = removed;
      query.intervened = removed;
    }
    query.o1 = o1;
    query.o2 = o2;
    query.kind = kind;
    query.negated = q.negated;
    return query;
  };

  for (const auto& opt : q.options)
    out.push_back({opt.index, make_pair_query(qobj_selector(opt.qobj1), opt.kind,
                                              qobj_selector(opt.qobj2))});

  if (!q.choices.empty()) {
    // option(C, qobj(C*10+1), collide, qobj(C*10+2)) :- choice(C,_,_).
    std::map<int, std::pair<std::vector<std::string>, std::vector<std::string>>> per_choice;
    for (const auto& c : q.choices) {
      auto& slots = per_choice[c.choice];
      (c.slot == 1 ? slots.first : slots.second).push_back(c.feature);
    }
    for (const auto& [idx, slots] : per_choice)
      out.push_back({idx, make_pair_query(Selector::of_features(slots.first), EventKind::collide,
                                          Selector::of_features(slots.second))});
  }

  return out;
}

}  // namespace crcg
