#include "crcg/iod.hpp"

#include <algorithm>
#include <vector>

namespace crcg::iod {

Trace smooth(const Trace& trace, int max_v, const SmoothingConfig& config) {
  if (config.window < 1 || config.window % 2 == 0)
    fail(ErrorCode::invalid_config, "smoothing window must be odd and >= 1");

  Trace out;
  for (ObjectId o : trace.objects()) {
    auto observed = trace.of(o);
    if (observed.size() < 2)
      fail(ErrorCode::insufficient_observations,
           "object " + std::to_string(o) + " has " + std::to_string(observed.size()) +
               " observed frames, need at least 2");

    std::vector<Vec2> filled(static_cast<std::size_t>(max_v), Vec2{});
    std::size_t next = 0;  // next observed sample with frame >= current
    for (int f = 1; f <= max_v; ++f) {
      while (next < observed.size() && observed[next].frame < f) ++next;
      Vec2 pos;
      if (next < observed.size() && observed[next].frame == f) {
        pos = observed[next].pos;
      } else if (next == 0) {
        pos = observed.front().pos;  // leading gap
      } else if (next == observed.size()) {
        pos = observed.back().pos;  // trailing gap
      } else {
        const ObjState& lo = observed[next - 1];
        const ObjState& hi = observed[next];
        double w = static_cast<double>(f - lo.frame) / static_cast<double>(hi.frame - lo.frame);
        pos = lo.pos + (hi.pos - lo.pos) * w;
      }
      filled[static_cast<std::size_t>(f - 1)] = pos;
    }

    if (config.window > 1) {
      int half = config.window / 2;
      std::vector<Vec2> averaged(filled.size());
      for (int f = 0; f < max_v; ++f) {
        int lo = std::max(0, f - half);
        int hi = std::min(max_v - 1, f + half);
        Vec2 sum{};
        for (int k = lo; k <= hi; ++k) sum += filled[static_cast<std::size_t>(k)];
        averaged[static_cast<std::size_t>(f)] = sum * (1.0 / (hi - lo + 1));
      }
      filled.swap(averaged);
    }

    for (int f = 1; f <= max_v; ++f)
      out.add(o, ObjState{f, filled[static_cast<std::size_t>(f - 1)], std::nullopt});
  }
  return out;
}

}  // namespace crcg::iod
