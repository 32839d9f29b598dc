#pragma once

#include "crcg/types.hpp"

namespace crcg::iod {

struct SmoothingConfig {
  int window = 1;  // centered moving average; odd, 1 disables
};

// Fills every missing frame of each object's trajectory over 1..max_v:
// interior gaps by linear interpolation between the nearest observed
// neighbors, leading/trailing gaps by holding the nearest observed position.
// With window > 1 a centered moving average runs over the filled positions.
// Objects with fewer than two observations raise insufficient_observations.
Trace smooth(const Trace& trace, int max_v, const SmoothingConfig& config = {});

}  // namespace crcg::iod
