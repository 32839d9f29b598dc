#pragma once

#include <functional>

#include "crcg/types.hpp"

namespace crcg::sps {

// Defaults for CLEVRER-scaled scenes.
inline constexpr double kDefaultCollideThreshold = 23.0;
inline constexpr int kDefaultMaxS = 185;
inline constexpr int kEpisodeMergeGap = 5;

struct KinematicEstimate {
  Vec2 v;               // scene units per frame at the estimation frame
  double g_sigma = 0.0; // frictional deceleration, scene units per frame^2
  int t_res = 1;        // frames between consecutive position samples
};

// Finite-difference velocity at frame i from the positions at i and i+t_res,
// normalized to scene units per frame. Throws missing_sample when either
// frame is absent (run iod::smooth first).
Vec2 estimate_velocity(const Trace& trace, ObjectId o, int i, int t_res);

// Solves the friction decay from the last two velocity samples of the video
// (frames max_v - 2*t_res, max_v - t_res, max_v); negative raw estimates are
// clamped to zero.
double estimate_friction(const Trace& trace, ObjectId o, int t_res, int max_v);

// Straight-line positions for the next `frames` frames: speed decays by
// g_sigma per frame and freezes at zero, direction is fixed.
std::vector<Vec2> predict_linear(Vec2 start, Vec2 v, double g_sigma, int frames);

// One event per contact episode, at the first frame where the pairwise
// distance drops below the threshold; episodes separated by fewer than
// merge_gap frames are merged. Only frames where both objects have states
// are considered.
EventSet detect_collisions(const Trace& positions, double threshold,
                           int merge_gap = kEpisodeMergeGap);
EventSet detect_collisions(const Trace& positions,
                           const std::function<double(ObjectId, ObjectId)>& pair_threshold,
                           int merge_gap = kEpisodeMergeGap);

// Extends every object linearly past the end of the video and returns the
// collisions detected strictly after max_v (up to max_s).
EventSet post_video_events(const Trace& perception, int max_v, int max_s = kDefaultMaxS,
                           double threshold = kDefaultCollideThreshold, int t_res = 1);

}  // namespace crcg::sps
