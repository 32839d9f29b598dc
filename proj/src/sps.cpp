#include "crcg/sps.hpp"

#include <algorithm>
#include <limits>

namespace crcg::sps {

Vec2 estimate_velocity(const Trace& trace, ObjectId o, int i, int t_res) {
  const ObjState* s0 = trace.find(o, i);
  const ObjState* s1 = trace.find(o, i + t_res);
  if (!s0 || !s1)
    fail(ErrorCode::missing_sample, "object " + std::to_string(o) + " has no state at frame " +
                                        std::to_string(s0 ? i + t_res : i));
  return (s1->pos - s0->pos) * (1.0 / t_res);
}

double estimate_friction(const Trace& trace, ObjectId o, int t_res, int max_v) {
  Vec2 v_penultimate = estimate_velocity(trace, o, max_v - 2 * t_res, t_res);
  Vec2 v_last = estimate_velocity(trace, o, max_v - t_res, t_res);
  double g_sigma = (v_penultimate.norm() - v_last.norm()) / t_res;
  return std::max(0.0, g_sigma);
}

std::vector<Vec2> predict_linear(Vec2 start, Vec2 v, double g_sigma, int frames) {
  std::vector<Vec2> positions;
  positions.reserve(static_cast<std::size_t>(frames));
  double speed = v.norm();
  Vec2 dir = speed > 0.0 ? v * (1.0 / speed) : Vec2{0.0, 0.0};
  Vec2 pos = start;
  for (int k = 0; k < frames; ++k) {
    speed = std::max(0.0, speed - g_sigma);
    pos += dir * speed;
    positions.push_back(pos);
  }
  return positions;
}

EventSet detect_collisions(const Trace& positions,
                           const std::function<double(ObjectId, ObjectId)>& pair_threshold,
                           int merge_gap) {
  EventSet events;
  std::vector<ObjectId> ids = positions.objects();
  for (std::size_t i = 0; i < ids.size(); ++i)
    for (std::size_t j = i + 1; j < ids.size(); ++j) {
      ObjectId a = ids[i], b = ids[j];
      double threshold = pair_threshold(a, b);
      auto sa = positions.of(a);
      auto sb = positions.of(b);
      int last_contact = std::numeric_limits<int>::min();
      std::size_t ib = 0;
      for (const auto& st : sa) {
        while (ib < sb.size() && sb[ib].frame < st.frame) ++ib;
        if (ib >= sb.size()) break;
        if (sb[ib].frame != st.frame) continue;
        if ((st.pos - sb[ib].pos).norm() < threshold) {
          if (st.frame - last_contact > merge_gap)
            events.push_back(Event{EventKind::collide, a, b, st.frame});
          last_contact = st.frame;
        }
      }
    }
  return normalize_events(std::move(events));
}

EventSet detect_collisions(const Trace& positions, double threshold, int merge_gap) {
  return detect_collisions(
      positions, [threshold](ObjectId, ObjectId) { return threshold; }, merge_gap);
}

EventSet post_video_events(const Trace& perception, int max_v, int max_s, double threshold,
                           int t_res) {
  Trace extended;
  for (ObjectId o : perception.objects()) {
    Vec2 v = estimate_velocity(perception, o, max_v - t_res, t_res);
    double g_sigma = estimate_friction(perception, o, t_res, max_v);
    const ObjState* last = perception.find(o, max_v);
    if (!last)
      fail(ErrorCode::missing_sample,
           "object " + std::to_string(o) + " has no state at frame " + std::to_string(max_v));
    std::vector<Vec2> path = predict_linear(last->pos, v, g_sigma, max_s - max_v);
    for (int k = 0; k < static_cast<int>(path.size()); ++k)
      extended.add(o, ObjState{max_v + 1 + k, path[static_cast<std::size_t>(k)], std::nullopt});
  }
  return detect_collisions(extended, threshold);
}

}  // namespace crcg::sps
