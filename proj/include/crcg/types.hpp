#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace crcg {

using ObjectId = int;

enum class ErrorCode {
  malformed_event,
  no_referent,
  ambiguous_referent,
  missing_sample,
  insufficient_observations,
  dense_trace_required,
  incomplete_state,
  invalid_config,
  parse_error,
  unsupported_question,
  missing_baseline,
  invalid_variant,
  transport,
  ambiguous_completion,
  cannot_score,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double k) const { return {x * k, y * k}; }
  Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
};

// An object's identity and static attributes. Feature names are open-ended
// strings (size/color/shape/material are the ones the datasets use) so
// different attribute vocabularies fit without schema changes.
struct ObjectRecord {
  ObjectId id = 0;
  std::map<std::string, std::string> features;

  bool immovable() const {
    auto it = features.find("shape");
    return it != features.end() && (it->second == "basket" || it->second == "ground");
  }

  bool has_feature_value(const std::string& value) const {
    for (const auto& [k, v] : features)
      if (v == value) return true;
    return false;
  }

  bool operator==(const ObjectRecord&) const = default;
};

struct ObjState {
  int frame = 1;
  Vec2 pos;
  std::optional<Vec2> vel;  // perception usually carries positions only
};

// Per-object, per-frame states. Frames are 1-based and strictly increasing
// per object; gaps are allowed (perception may miss frames).
class Trace {
public:
  void add(ObjectId o, const ObjState& s);

  const ObjState* find(ObjectId o, int frame) const;
  std::span<const ObjState> of(ObjectId o) const;
  bool has_object(ObjectId o) const { return states_.count(o) > 0; }
  std::vector<ObjectId> objects() const;
  bool dense(ObjectId o, int first, int last) const;
  int last_frame() const;
  bool empty() const { return states_.empty(); }

private:
  std::map<ObjectId, std::vector<ObjState>> states_;
};

enum class EventKind { collide, enter };

// A collision <a,b,frame> or an enter event (a enters b) at a frame.
// Collide events are stored with a single orientation (a < b after
// normalization) and expanded symmetrically wherever they are queried.
struct Event {
  EventKind kind = EventKind::collide;
  ObjectId a = 0;
  ObjectId b = 0;
  int frame = 0;

  bool operator==(const Event&) const = default;
};

using EventSet = std::vector<Event>;

// Either a concrete object id or a conjunction of feature values that must
// all appear among an object's feature values.
struct Selector {
  std::optional<ObjectId> id;
  std::vector<std::string> features;

  static Selector of_id(ObjectId i) { return Selector{i, {}}; }
  static Selector of_features(std::vector<std::string> f) { return Selector{std::nullopt, std::move(f)}; }
  bool operator==(const Selector&) const = default;
};

enum class QueryVariant { pair_event, remove_any, counting };

// A counterfactual question: intervene on some objects (remove all of them,
// or for replace-style interventions keep a subset), then ask either whether
// an event between o1 and o2 happens (pair_event / remove_any) or how many
// objects have an event with the target o2 (counting).
struct Query {
  QueryVariant variant = QueryVariant::pair_event;
  std::vector<Selector> intervened;  // empty for remove_any
  std::vector<Selector> removed;     // subset of intervened
  Selector o1;
  Selector o2;
  EventKind kind = EventKind::collide;
  bool negated = false;
};

enum class Determination { yes, no, undetermined };

struct Answer {
  enum class Kind { yes, no, count, undetermined };
  Kind kind = Kind::undetermined;
  int n = 0;

  static Answer yes() { return {Kind::yes, 0}; }
  static Answer no() { return {Kind::no, 0}; }
  static Answer count(int n) { return {Kind::count, n}; }
  static Answer undetermined() { return {Kind::undetermined, 0}; }
  static Answer yes_no(bool b) { return b ? yes() : no(); }

  bool operator==(const Answer&) const = default;
};

std::string to_string(EventKind k);
std::string to_string(Determination d);
std::string to_string(const Answer& a);

}  // namespace crcg
