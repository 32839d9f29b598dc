#pragma once

#include <filesystem>

#include "crcg/types.hpp"
#include "json.hpp"

namespace crcg {

// Canonicalizes an event set: collide pairs ordered a < b, duplicates of the
// same (kind, pair, frame) merged, result sorted by frame then pair.
// Throws malformed_event if any event relates an object to itself.
EventSet normalize_events(EventSet events);

// True if the set contains a matching event at any frame (collide matches in
// either order; enter is directional).
bool has_event(const EventSet& events, EventKind kind, ObjectId a, ObjectId b);

// Frames at which a matching event occurs, ascending.
std::vector<int> event_frames(const EventSet& events, EventKind kind, ObjectId a, ObjectId b);

// Resolves a selector to the unique object whose feature values subsume the
// selector's features. Throws no_referent / ambiguous_referent otherwise.
ObjectId resolve_selector(const Selector& sel, const std::vector<ObjectRecord>& objects);

std::vector<ObjectId> resolve_selectors(const std::vector<Selector>& sels,
                                        const std::vector<ObjectRecord>& objects);

// A perceived scene: static objects, observation horizon, per-frame traces
// and the events detected from them.
struct Scene {
  std::vector<ObjectRecord> objects;
  int max_v = 127;
  Trace traces;
  EventSet events;

  const ObjectRecord* object(ObjectId id) const;
  std::vector<ObjectId> object_ids() const;
};

nlohmann::json scene_to_json(const Scene& scene);
Scene scene_from_json(const nlohmann::json& j);
Scene load_scene(const std::filesystem::path& path);
void save_scene(const Scene& scene, const std::filesystem::path& path);

nlohmann::json query_to_json(const Query& q);
Query query_from_json(const nlohmann::json& j);

}  // namespace crcg
