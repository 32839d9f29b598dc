#include "crcg/core.hpp"

#include <algorithm>
#include <fstream>

namespace crcg {

void Trace::add(ObjectId o, const ObjState& s) {
  auto& v = states_[o];
  auto it = std::lower_bound(v.begin(), v.end(), s.frame,
                             [](const ObjState& a, int f) { return a.frame < f; });
  if (it != v.end() && it->frame == s.frame)
    fail(ErrorCode::invalid_config,
         "duplicate state for object " + std::to_string(o) + " at frame " + std::to_string(s.frame));
  v.insert(it, s);
}

const ObjState* Trace::find(ObjectId o, int frame) const {
  auto it = states_.find(o);
  if (it == states_.end()) return nullptr;
  const auto& v = it->second;
  auto sit = std::lower_bound(v.begin(), v.end(), frame,
                              [](const ObjState& a, int f) { return a.frame < f; });
  if (sit == v.end() || sit->frame != frame) return nullptr;
  return &*sit;
}

std::span<const ObjState> Trace::of(ObjectId o) const {
  auto it = states_.find(o);
  if (it == states_.end()) return {};
  return it->second;
}

std::vector<ObjectId> Trace::objects() const {
  std::vector<ObjectId> out;
  out.reserve(states_.size());
  for (const auto& [o, _] : states_) out.push_back(o);
  return out;
}

bool Trace::dense(ObjectId o, int first, int last) const {
  for (int f = first; f <= last; ++f)
    if (!find(o, f)) return false;
  return true;
}

int Trace::last_frame() const {
  int last = 0;
  for (const auto& [_, v] : states_)
    if (!v.empty()) last = std::max(last, v.back().frame);
  return last;
}

std::string to_string(EventKind k) { return k == EventKind::collide ? "collide" : "enter"; }

std::string to_string(Determination d) {
  switch (d) {
    case Determination::yes: return "yes";
    case Determination::no: return "no";
    default: return "undetermined";
  }
}

std::string to_string(const Answer& a) {
  switch (a.kind) {
    case Answer::Kind::yes: return "yes";
    case Answer::Kind::no: return "no";
    case Answer::Kind::count: return std::to_string(a.n);
    default: return "undetermined";
  }
}

EventSet normalize_events(EventSet events) {
  for (auto& e : events) {
    if (e.a == e.b)
      fail(ErrorCode::malformed_event,
           "event relates object " + std::to_string(e.a) + " to itself at frame " + std::to_string(e.frame));
    if (e.kind == EventKind::collide && e.a > e.b) std::swap(e.a, e.b);
  }
  auto key = [](const Event& e) { return std::tuple(e.frame, e.a, e.b, e.kind); };
  std::sort(events.begin(), events.end(),
            [&](const Event& l, const Event& r) { return key(l) < key(r); });
  events.erase(std::unique(events.begin(), events.end()), events.end());
  return events;
}

static bool event_matches(const Event& e, EventKind kind, ObjectId a, ObjectId b) {
  if (e.kind != kind) return false;
  if (kind == EventKind::collide) return (e.a == a && e.b == b) || (e.a == b && e.b == a);
  return e.a == a && e.b == b;
}

bool has_event(const EventSet& events, EventKind kind, ObjectId a, ObjectId b) {
  return std::any_of(events.begin(), events.end(),
                     [&](const Event& e) { return event_matches(e, kind, a, b); });
}

std::vector<int> event_frames(const EventSet& events, EventKind kind, ObjectId a, ObjectId b) {
  std::vector<int> frames;
  for (const auto& e : events)
    if (event_matches(e, kind, a, b)) frames.push_back(e.frame);
  std::sort(frames.begin(), frames.end());
  return frames;
}

static std::string selector_text(const Selector& sel) {
  if (sel.id) return "#" + std::to_string(*sel.id);
  std::string s = "{";
  for (std::size_t i = 0; i < sel.features.size(); ++i) {
    if (i) s += ",";
    s += sel.features[i];
  }
  return s + "}";
}

ObjectId resolve_selector(const Selector& sel, const std::vector<ObjectRecord>& objects) {
  if (sel.id) {
    for (const auto& o : objects)
      if (o.id == *sel.id) return o.id;
    fail(ErrorCode::no_referent, "no object with id " + std::to_string(*sel.id));
  }
  std::vector<ObjectId> matches;
  for (const auto& o : objects) {
    bool ok = true;
    for (const auto& f : sel.features)
      if (!o.has_feature_value(f)) {
        ok = false;
        break;
      }
    if (ok) matches.push_back(o.id);
  }
  if (matches.empty()) fail(ErrorCode::no_referent, "no object matches " + selector_text(sel));
  if (matches.size() > 1)
    fail(ErrorCode::ambiguous_referent,
         selector_text(sel) + " matches " + std::to_string(matches.size()) + " objects");
  return matches.front();
}

std::vector<ObjectId> resolve_selectors(const std::vector<Selector>& sels,
                                        const std::vector<ObjectRecord>& objects) {
  std::vector<ObjectId> out;
  out.reserve(sels.size());
  for (const auto& s : sels) out.push_back(resolve_selector(s, objects));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

const ObjectRecord* Scene::object(ObjectId id) const {
  for (const auto& o : objects)
    if (o.id == id) return &o;
  return nullptr;
}

std::vector<ObjectId> Scene::object_ids() const {
  std::vector<ObjectId> ids;
  ids.reserve(objects.size());
  for (const auto& o : objects) ids.push_back(o.id);
  return ids;
}

using nlohmann::json;

static json event_to_json(const Event& e) {
  return json{{"kind", to_string(e.kind)}, {"a", e.a}, {"b", e.b}, {"frame", e.frame}};
}

static Event event_from_json(const json& j) {
  Event e;
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "collide")
    e.kind = EventKind::collide;
  else if (kind == "enter")
    e.kind = EventKind::enter;
  else
    fail(ErrorCode::parse_error, "unknown event kind '" + kind + "'");
  e.a = j.at("a").get<int>();
  e.b = j.at("b").get<int>();
  e.frame = j.at("frame").get<int>();
  return e;
}

json scene_to_json(const Scene& scene) {
  json objs = json::array();
  for (const auto& o : scene.objects)
    objs.push_back(json{{"id", o.id}, {"features", o.features}});
  json traces = json::object();
  for (ObjectId o : scene.traces.objects()) {
    json rows = json::array();
    for (const auto& s : scene.traces.of(o)) rows.push_back(json::array({s.frame, s.pos.x, s.pos.y}));
    traces[std::to_string(o)] = std::move(rows);
  }
  json events = json::array();
  for (const auto& e : scene.events) events.push_back(event_to_json(e));
  return json{{"objects", objs}, {"max_v", scene.max_v}, {"traces", traces}, {"events", events}};
}

Scene scene_from_json(const json& j) {
  Scene scene;
  for (const auto& jo : j.at("objects")) {
    ObjectRecord rec;
    rec.id = jo.at("id").get<int>();
    if (jo.contains("features"))
      rec.features = jo.at("features").get<std::map<std::string, std::string>>();
    scene.objects.push_back(std::move(rec));
  }
  scene.max_v = j.at("max_v").get<int>();
  if (j.contains("traces"))
    for (const auto& [key, rows] : j.at("traces").items()) {
      ObjectId o = std::stoi(key);
      for (const auto& row : rows) {
        ObjState s;
        s.frame = row.at(0).get<int>();
        s.pos = {row.at(1).get<double>(), row.at(2).get<double>()};
        scene.traces.add(o, s);
      }
    }
  if (j.contains("events"))
    for (const auto& je : j.at("events")) scene.events.push_back(event_from_json(je));
  scene.events = normalize_events(std::move(scene.events));
  return scene;
}

Scene load_scene(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::invalid_config, "cannot open scene file " + path.string());
  json j;
  in >> j;
  return scene_from_json(j);
}

void save_scene(const Scene& scene, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::invalid_config, "cannot write scene file " + path.string());
  out << scene_to_json(scene).dump(2) << "\n";
}

static json selector_to_json(const Selector& sel) {
  if (sel.id) return json(*sel.id);
  return json(sel.features);
}

static Selector selector_from_json(const json& j) {
  if (j.is_number_integer()) return Selector::of_id(j.get<int>());
  if (j.is_string()) return Selector::of_features({j.get<std::string>()});
  return Selector::of_features(j.get<std::vector<std::string>>());
}

json query_to_json(const Query& q) {
  json j;
  switch (q.variant) {
    case QueryVariant::pair_event: j["variant"] = "pair"; break;
    case QueryVariant::remove_any: j["variant"] = "remove-any"; break;
    case QueryVariant::counting: j["variant"] = "counting"; break;
  }
  json removed = json::array();
  for (const auto& s : q.removed) removed.push_back(selector_to_json(s));
  j["remove"] = removed;
  if (q.intervened != q.removed) {
    json intervened = json::array();
    for (const auto& s : q.intervened) intervened.push_back(selector_to_json(s));
    j["intervened"] = intervened;
  }
  if (q.variant != QueryVariant::counting) j["o1"] = selector_to_json(q.o1);
  j["o2"] = selector_to_json(q.o2);
  j["kind"] = to_string(q.kind);
  j["negated"] = q.negated;
  return j;
}

Query query_from_json(const json& j) {
  Query q;
  std::string variant = j.value("variant", "pair");
  if (variant == "pair")
    q.variant = QueryVariant::pair_event;
  else if (variant == "remove-any")
    q.variant = QueryVariant::remove_any;
  else if (variant == "counting")
    q.variant = QueryVariant::counting;
  else
    fail(ErrorCode::parse_error, "unknown query variant '" + variant + "'");
  if (j.contains("remove"))
    for (const auto& js : j.at("remove")) q.removed.push_back(selector_from_json(js));
  if (j.contains("intervened"))
    for (const auto& js : j.at("intervened")) q.intervened.push_back(selector_from_json(js));
  else
    q.intervened = q.removed;
  if (j.contains("o1")) q.o1 = selector_from_json(j.at("o1"));
  q.o2 = selector_from_json(j.at("o2"));
  std::string kind = j.value("kind", "collide");
  if (kind == "collide")
    q.kind = EventKind::collide;
  else if (kind == "enter")
    q.kind = EventKind::enter;
  else
    fail(ErrorCode::parse_error, "unknown event kind '" + kind + "'");
  q.negated = j.value("negated", false);
  return q;
}

}  // namespace crcg
