#pragma once

#include <cstdint>
#include <map>

#include "crcg/rng.hpp"
#include "crcg/types.hpp"
#include "json.hpp"

namespace crcg::world {

struct Rect {
  double xmin = 0.0, ymin = 0.0, xmax = 200.0, ymax = 200.0;
};

struct BodyInit {
  Vec2 pos;
  Vec2 vel;
  double radius = 4.0;
  double friction = 0.0;  // frictional deceleration per frame (g*sigma folded together)
};

// Ground-truth world: unit-mass circles on a frictional plane, elastic
// collisions (restitution 1), wall reflection, fixed timestep of one frame.
struct WorldConfig {
  std::vector<BodyInit> bodies;  // object id = index
  Rect arena;
  int max_v = 127;
  int max_s = 185;
  std::uint64_t seed = 0;

  void validate() const;  // invalid_config on overlap or bad bounds
};

// Per-step parameter perturbation applied by a noisy simulation model.
struct SimNoise {
  double sigma_s = 0.0;
  std::uint64_t seed = 0;
};

// Positional jitter and frame dropout applied to the truth trace.
struct PerceptionNoise {
  double sigma_p = 0.0;
  double p_drop = 0.0;
  std::uint64_t seed = 0;
};

// Calibration of sigma_s = 1.0: per-step velocity jitter in scene units per
// frame per axis, and the friction perturbation per step.
inline constexpr double kVelocityNoisePerSigma = 0.02;
inline constexpr double kFrictionNoisePerSigma = 0.002;
inline constexpr int kContactMergeGap = 5;

struct Body {
  Vec2 pos;
  Vec2 vel;
};

using BodyStates = std::map<ObjectId, Body>;

struct StepOutput {
  EventSet events;                                   // episode-start collisions at this frame
  std::vector<std::pair<ObjectId, ObjectId>> contacts;  // all overlapping pairs at this frame
};

// Frame-by-frame simulation model: advances the active objects' states from
// frame t to t+1 and reports the collisions at t. With sigma_s = 0 this is
// the exact truth integrator. Instances keep per-pair contact memory, so use
// one instance per simulation run.
class Stepper {
public:
  Stepper(const WorldConfig& config, std::vector<ObjectId> active, SimNoise noise = {});

  StepOutput step(int frame, BodyStates& states);
  BodyStates initial_states() const;
  const std::vector<ObjectId>& active() const { return active_; }
  double radius(ObjectId o) const { return config_->bodies[static_cast<std::size_t>(o)].radius; }

private:
  const WorldConfig* config_;
  std::vector<ObjectId> active_;
  SimNoise noise_;
  Rng rng_;
  std::map<std::pair<ObjectId, ObjectId>, int> last_contact_;
};

struct SimulationResult {
  Trace trace;      // states at frames 1..frames (with velocities)
  EventSet events;  // collisions detected at frames 1..frames
};

// Deterministic oracle run without the removed objects. frames = 0 means
// config.max_v.
SimulationResult simulate_truth(const WorldConfig& config,
                                const std::vector<ObjectId>& removed = {}, int frames = 0);

// Degrades the truth into a perception result: jittered positions, dropped
// frames, velocities discarded, events re-detected from the degraded trace
// at the contact threshold (sum of radii per pair).
SimulationResult perceive(const SimulationResult& truth, const WorldConfig& config,
                          const PerceptionNoise& noise);

struct GenParams {
  int n_min = 3;
  int n_max = 6;
  Rect arena;
  double radius = 4.0;
  double speed_min = 0.5;
  double speed_max = 1.8;
  double friction_max = 0.003;
  int max_v = 127;
  int max_s = 185;
};

WorldConfig generate_world(const GenParams& params, Rng& rng);

// Distinct colors per scene so single-feature selectors resolve uniquely.
std::vector<ObjectRecord> assign_features(std::size_t n, Rng& rng);

nlohmann::json world_to_json(const WorldConfig& config);
WorldConfig world_from_json(const nlohmann::json& j);

}  // namespace crcg::world
