#include "crcg/orchestrator.hpp"

#include <algorithm>
#include <chrono>
#include <set>

#include "crcg/iod.hpp"

namespace crcg {

ResolvedQuery resolve_query(const Query& query, const std::vector<ObjectRecord>& objects) {
  ResolvedQuery rq;
  rq.variant = query.variant;
  rq.kind = query.kind;
  rq.negated = query.negated;
  rq.intervened = resolve_selectors(query.intervened, objects);
  rq.removed = resolve_selectors(query.removed, objects);
  for (ObjectId r : rq.removed)
    if (std::find(rq.intervened.begin(), rq.intervened.end(), r) == rq.intervened.end())
      fail(ErrorCode::invalid_config, "removed object " + std::to_string(r) + " is not intervened");
  if (query.variant != QueryVariant::counting) rq.o1 = resolve_selector(query.o1, objects);
  rq.o2 = resolve_selector(query.o2, objects);
  if (query.variant != QueryVariant::counting && rq.o1 == rq.o2)
    fail(ErrorCode::invalid_config,
         "query endpoints resolve to the same object " + std::to_string(rq.o1));
  return rq;
}

GraphAnalysis analyze(const std::vector<ObjectRecord>& objects, const EventSet& events,
                      const ResolvedQuery& query) {
  GraphAnalysis out;
  out.graph = CausalGraph::build(objects, events);

  bool remove_any = query.variant == QueryVariant::remove_any;
  auto start = std::chrono::steady_clock::now();
  AncestorRelation anc = ancestors(out.graph);
  out.affected = affected(out.graph, anc, query.intervened, remove_any);
  out.sim = sim_nodes(out.graph, out.affected, query.removed);
  if (query.variant != QueryVariant::counting)
    out.determination = determine(query.kind, query.o1, query.o2, events, out.affected,
                                  query.removed, remove_any);
  auto end = std::chrono::steady_clock::now();
  out.fixpoint_ms = std::chrono::duration<double, std::milli>(end - start).count();
  return out;
}

namespace {

Vec2 perception_velocity(const Trace& perception, ObjectId o, int frame) {
  const ObjState* cur = perception.find(o, frame);
  if (cur && cur->vel) return *cur->vel;
  const ObjState* prev = perception.find(o, frame - 1);
  if (cur && prev) return cur->pos - prev->pos;
  const ObjState* next = perception.find(o, frame + 1);
  if (cur && next) return next->pos - cur->pos;
  return Vec2{};
}

}  // namespace

EnhancedResult enhanced_simulate(const std::vector<ObjectId>& o_u, const NodeSet& sim,
                                 world::Stepper& sim_model, const Trace& perception, int max_v,
                                 int max_s, bool use_perception) {
  if (max_s < max_v) fail(ErrorCode::invalid_config, "max_s must be >= max_v");
  for (ObjectId o : o_u) {
    if (!perception.find(o, 1))
      fail(ErrorCode::dense_trace_required,
           "object " + std::to_string(o) + " has no perception state at frame 1");
    if (use_perception && !perception.dense(o, 1, max_v))
      fail(ErrorCode::dense_trace_required,
           "object " + std::to_string(o) + " has gaps in 1.." + std::to_string(max_v) +
               "; run iod::smooth first");
  }

  EnhancedResult result;
  world::BodyStates states;
  std::set<ObjectId> on_perception;
  for (ObjectId o : o_u) {
    states[o] = world::Body{perception.find(o, 1)->pos, perception_velocity(perception, o, 1)};
    if (use_perception)
      on_perception.insert(o);
    else
      result.handoff[o] = 1;
  }

  for (int t = 1; t <= max_s; ++t) {
    for (ObjectId o : o_u) result.traces.add(o, ObjState{t, states[o].pos, states[o].vel});

    world::StepOutput out = sim_model.step(t, states);
    for (const auto& e : out.events) result.events.push_back(e);

    std::set<ObjectId> snapshot = on_perception;
    for (ObjectId o : snapshot) {
      bool drop = (t == max_v) || sim.contains(o, t);
      if (!drop)
        for (const auto& [a, b] : out.contacts) {
          ObjectId other = a == o ? b : (b == o ? a : -1);
          if (other >= 0 && !snapshot.count(other)) {
            drop = true;
            break;
          }
        }
      if (drop) {
        on_perception.erase(o);
        result.handoff[o] = t;
      } else {
        const ObjState* next = perception.find(o, t + 1);
        states[o] = world::Body{next->pos, perception_velocity(perception, o, t + 1)};
      }
    }
  }
  result.events = normalize_events(std::move(result.events));
  return result;
}

Answer answer_pair(EventKind kind, ObjectId o1, ObjectId o2, bool negated, const EventSet& c_hat) {
  bool happened = has_event(c_hat, kind, o1, o2);
  return Answer::yes_no(happened != negated);
}

Answer approx_answer(Determination det, bool negated, const std::optional<Answer>& p_q) {
  if (det == Determination::yes) return Answer::yes_no(!negated);
  if (det == Determination::no) return Answer::yes_no(negated);
  if (!p_q) fail(ErrorCode::missing_baseline, "result not determined and no baseline prediction");
  return *p_q;
}

Answer answer_counting(EventKind kind, ObjectId target, const EventSet& events,
                       const std::vector<ObjectId>& removed, const NodeSet& sim) {
  if (sim.size() > 0) return Answer::undetermined();
  std::set<ObjectId> counted;
  for (const auto& e : events) {
    if (e.kind != kind) continue;
    ObjectId other = -1;
    if (kind == EventKind::collide)
      other = e.a == target ? e.b : (e.b == target ? e.a : -1);
    else if (e.b == target)
      other = e.a;
    if (other < 0) continue;
    if (std::find(removed.begin(), removed.end(), other) != removed.end()) continue;
    counted.insert(other);
  }
  return Answer::count(static_cast<int>(counted.size()));
}

namespace {

Trace dense_perception(const Scene& scene, const std::vector<ObjectId>& o_u,
                       const PipelineOptions& options) {
  if (options.iod_window >= 1)
    return iod::smooth(scene.traces, scene.max_v, iod::SmoothingConfig{options.iod_window});
  return scene.traces;
}

// Perception events whose endpoints exist and are unaffected at the event
// frame still hold in the counterfactual world.
EventSet merge_unaffected_perception(EventSet c_hat, const Scene& scene,
                                     const GraphAnalysis& analysis,
                                     const std::vector<ObjectId>& removed) {
  auto is_removed = [&](ObjectId o) {
    return std::find(removed.begin(), removed.end(), o) != removed.end();
  };
  for (const auto& e : scene.events) {
    if (e.frame > scene.max_v) continue;
    if (is_removed(e.a) || is_removed(e.b)) continue;
    if (analysis.affected.contains(e.a, e.frame) || analysis.affected.contains(e.b, e.frame))
      continue;
    c_hat.push_back(e);
  }
  return normalize_events(std::move(c_hat));
}

QueryOutcome run_simulating(const Scene& scene, const world::WorldConfig& config,
                            const Query& query, const PipelineOptions& options,
                            bool use_perception) {
  ResolvedQuery rq = resolve_query(query, scene.objects);
  GraphAnalysis analysis = analyze(scene.objects, scene.events, rq);

  QueryOutcome outcome;
  outcome.determination = analysis.determination;
  outcome.fixpoint_ms = analysis.fixpoint_ms;
  outcome.sim.assign(analysis.sim.nodes().begin(), analysis.sim.nodes().end());

  if (rq.variant == QueryVariant::remove_any) {
    if (analysis.determination != Determination::undetermined) {
      outcome.answer = approx_answer(analysis.determination, rq.negated, std::nullopt);
      outcome.events = scene.events;
      return outcome;
    }
    // Per-object enumeration: the event happens under "remove any" if some
    // single removal makes it happen.
    bool any_yes = false;
    for (const auto& rec : scene.objects) {
      if (rec.immovable() || rec.id == rq.o1) continue;
      Query sub;
      sub.variant = QueryVariant::pair_event;
      sub.removed = {Selector::of_id(rec.id)};
      sub.intervened = sub.removed;
      sub.o1 = Selector::of_id(rq.o1);
      sub.o2 = Selector::of_id(rq.o2);
      sub.kind = rq.kind;
      QueryOutcome sub_outcome = run_simulating(scene, config, sub, options, use_perception);
      if (sub_outcome.answer == Answer::yes()) {
        any_yes = true;
        break;
      }
    }
    outcome.answer = Answer::yes_no(any_yes != rq.negated);
    outcome.events = scene.events;
    return outcome;
  }

  std::vector<ObjectId> o_u;
  for (const auto& rec : scene.objects)
    if (std::find(rq.removed.begin(), rq.removed.end(), rec.id) == rq.removed.end())
      o_u.push_back(rec.id);

  Trace perception = dense_perception(scene, o_u, options);
  world::Stepper stepper(config, o_u, options.sim_noise);
  NodeSet no_sim;
  EnhancedResult er =
      enhanced_simulate(o_u, use_perception ? analysis.sim : no_sim, stepper, perception,
                        scene.max_v, config.max_s, use_perception);

  EventSet c_hat = er.events;
  if (use_perception && options.merge_perception_events)
    c_hat = merge_unaffected_perception(std::move(c_hat), scene, analysis, rq.removed);
  if (options.predictive) {
    EventSet post = sps::post_video_events(perception, scene.max_v, config.max_s,
                                           options.collide_thresh);
    c_hat.insert(c_hat.end(), post.begin(), post.end());
    c_hat = normalize_events(std::move(c_hat));
  }

  outcome.events = c_hat;
  outcome.handoff = er.handoff;

  if (rq.variant == QueryVariant::counting) {
    NodeSet empty;
    Answer counted = answer_counting(rq.kind, rq.o2, scene.events, rq.removed, analysis.sim);
    outcome.answer = counted.kind == Answer::Kind::undetermined
                         ? answer_counting(rq.kind, rq.o2, c_hat, rq.removed, empty)
                         : counted;
  } else {
    outcome.answer = answer_pair(rq.kind, rq.o1, rq.o2, rq.negated, c_hat);
  }
  return outcome;
}

}  // namespace

QueryOutcome run_full(const Scene& scene, const world::WorldConfig& config, const Query& query,
                      const PipelineOptions& options) {
  return run_simulating(scene, config, query, options, true);
}

QueryOutcome run_naive(const Scene& scene, const world::WorldConfig& config, const Query& query,
                       const PipelineOptions& options) {
  return run_simulating(scene, config, query, options, false);
}

QueryOutcome run_approx(const Scene& scene, const Query& query, const BaselineFn& baseline,
                        const PipelineOptions& options) {
  ResolvedQuery rq = resolve_query(query, scene.objects);
  GraphAnalysis analysis = analyze(scene.objects, scene.events, rq);

  QueryOutcome outcome;
  outcome.determination = analysis.determination;
  outcome.fixpoint_ms = analysis.fixpoint_ms;
  outcome.sim.assign(analysis.sim.nodes().begin(), analysis.sim.nodes().end());
  outcome.events = scene.events;

  if (rq.variant == QueryVariant::counting) {
    Answer counted = answer_counting(rq.kind, rq.o2, scene.events, rq.removed, analysis.sim);
    if (counted.kind != Answer::Kind::undetermined) {
      outcome.answer = counted;
      return outcome;
    }
    if (!baseline) fail(ErrorCode::missing_baseline, "count not determined and no baseline");
    outcome.answer = baseline(query);
    return outcome;
  }

  std::optional<Answer> p_q;
  if (analysis.determination == Determination::undetermined && baseline) p_q = baseline(query);
  outcome.answer = approx_answer(analysis.determination, rq.negated, p_q);
  return outcome;
}

}  // namespace crcg
