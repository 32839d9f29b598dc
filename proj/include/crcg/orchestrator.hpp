#pragma once

#include <functional>
#include <optional>

#include "crcg/core.hpp"
#include "crcg/graph.hpp"
#include "crcg/sps.hpp"
#include "crcg/world.hpp"

namespace crcg {

struct ResolvedQuery {
  QueryVariant variant = QueryVariant::pair_event;
  std::vector<ObjectId> intervened;
  std::vector<ObjectId> removed;
  ObjectId o1 = -1;
  ObjectId o2 = -1;
  EventKind kind = EventKind::collide;
  bool negated = false;
};

ResolvedQuery resolve_query(const Query& query, const std::vector<ObjectRecord>& objects);

// Causal-graph pass shared by every pipeline: relations via the fixpoint,
// then the determination for the query. fixpoint_ms covers the symbolic
// computation only.
struct GraphAnalysis {
  CausalGraph graph;
  NodeSet affected;
  NodeSet sim;
  Determination determination = Determination::undetermined;
  double fixpoint_ms = 0.0;
};

GraphAnalysis analyze(const std::vector<ObjectRecord>& objects, const EventSet& events,
                      const ResolvedQuery& query);

struct EnhancedResult {
  Trace traces;                         // simulated states over 1..max_s
  EventSet events;                      // collisions detected during the run
  std::map<ObjectId, int> handoff;      // frame at which each object left the
                                        // perception-backed set
};

// The enhanced simulation: every object rides its perception states until
// its sim node, the end of the video, or a simulated collision with an
// already-simulated object; from then on the frame-by-frame model takes
// over. With use_perception = false everything is simulated from frame 1
// (the naive baseline), seeded from the frame-1 perception states.
EnhancedResult enhanced_simulate(const std::vector<ObjectId>& o_u, const NodeSet& sim,
                                 world::Stepper& sim_model, const Trace& perception, int max_v,
                                 int max_s, bool use_perception = true);

Answer answer_pair(EventKind kind, ObjectId o1, ObjectId o2, bool negated, const EventSet& c_hat);

// Determined results override the baseline prediction; otherwise the
// baseline answer passes through verbatim. Throws missing_baseline when an
// undetermined query has no baseline to fall back to.
Answer approx_answer(Determination det, bool negated, const std::optional<Answer>& p_q);

// Counting with the perception-only guard: any sim node anywhere makes the
// count undetermined.
Answer answer_counting(EventKind kind, ObjectId target, const EventSet& events,
                       const std::vector<ObjectId>& removed, const NodeSet& sim);

enum class PipelineKind { naive, approx, full };

struct PipelineOptions {
  world::SimNoise sim_noise;
  bool predictive = false;
  // In-video perception events whose endpoints are unaffected are merged
  // into the simulated event set before answering.
  bool merge_perception_events = true;
  int iod_window = 0;  // 0 = perception used as-is, >= 1 = run iod::smooth
  double collide_thresh = sps::kDefaultCollideThreshold;
};

struct QueryOutcome {
  Answer answer;
  Determination determination = Determination::undetermined;
  std::vector<Node> sim;
  EventSet events;  // the event set the answer was read from
  double fixpoint_ms = 0.0;
  std::map<ObjectId, int> handoff;
};

using BaselineFn = std::function<Answer(const Query&)>;

// Full pipeline (causal graph + enhanced simulation).
QueryOutcome run_full(const Scene& scene, const world::WorldConfig& config, const Query& query,
                      const PipelineOptions& options = {});

// Simulation of everything from frame 1, ignoring the causal graph.
QueryOutcome run_naive(const Scene& scene, const world::WorldConfig& config, const Query& query,
                       const PipelineOptions& options = {});

// Determination override over a black-box baseline; the baseline is invoked
// only when the result is not determined.
QueryOutcome run_approx(const Scene& scene, const Query& query, const BaselineFn& baseline,
                        const PipelineOptions& options = {});

}  // namespace crcg
