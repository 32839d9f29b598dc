#include "crcg/world.hpp"

#include <algorithm>

#include "crcg/sps.hpp"

namespace crcg::world {

void WorldConfig::validate() const {
  if (bodies.size() < 1 || bodies.size() > 32)
    fail(ErrorCode::invalid_config, "unsupported object count " + std::to_string(bodies.size()));
  if (max_s < max_v) fail(ErrorCode::invalid_config, "max_s must be >= max_v");
  if (arena.xmax <= arena.xmin || arena.ymax <= arena.ymin)
    fail(ErrorCode::invalid_config, "degenerate arena");
  for (std::size_t i = 0; i < bodies.size(); ++i) {
    if (bodies[i].radius <= 0.0) fail(ErrorCode::invalid_config, "non-positive radius");
    if (bodies[i].friction < 0.0) fail(ErrorCode::invalid_config, "negative friction");
    for (std::size_t j = i + 1; j < bodies.size(); ++j) {
      double gap = (bodies[i].pos - bodies[j].pos).norm();
      if (gap < bodies[i].radius + bodies[j].radius)
        fail(ErrorCode::invalid_config, "objects " + std::to_string(i) + " and " +
                                            std::to_string(j) + " overlap at placement");
    }
  }
}

Stepper::Stepper(const WorldConfig& config, std::vector<ObjectId> active, SimNoise noise)
    : config_(&config), active_(std::move(active)), noise_(noise),
      rng_(Rng(noise.seed).substream("sim-noise")) {
  std::sort(active_.begin(), active_.end());
}

BodyStates Stepper::initial_states() const {
  BodyStates states;
  for (ObjectId o : active_) {
    const BodyInit& b = config_->bodies[static_cast<std::size_t>(o)];
    states[o] = Body{b.pos, b.vel};
  }
  return states;
}

StepOutput Stepper::step(int frame, BodyStates& states) {
  for (ObjectId o : active_)
    if (!states.count(o))
      fail(ErrorCode::incomplete_state,
           "object " + std::to_string(o) + " has no state at frame " + std::to_string(frame));

  if (noise_.sigma_s > 0.0)
    for (ObjectId o : active_) {
      Body& b = states[o];
      b.vel.x += rng_.gauss(0.0, noise_.sigma_s * kVelocityNoisePerSigma);
      b.vel.y += rng_.gauss(0.0, noise_.sigma_s * kVelocityNoisePerSigma);
    }

  StepOutput out;
  for (std::size_t i = 0; i < active_.size(); ++i)
    for (std::size_t j = i + 1; j < active_.size(); ++j) {
      ObjectId a = active_[i], b = active_[j];
      Body& ba = states[a];
      Body& bb = states[b];
      Vec2 rel = bb.pos - ba.pos;
      double dist = rel.norm();
      if (dist >= radius(a) + radius(b)) continue;

      out.contacts.push_back({a, b});
      auto key = std::pair(a, b);
      auto it = last_contact_.find(key);
      if (it == last_contact_.end() || frame - it->second > kContactMergeGap)
        out.events.push_back(Event{EventKind::collide, a, b, frame});
      last_contact_[key] = frame;

      // Equal masses, restitution 1: swap the normal velocity components,
      // but only while approaching so resting overlap does not re-trigger.
      if (dist > 0.0 && rel.dot(bb.vel - ba.vel) < 0.0) {
        Vec2 n = rel * (1.0 / dist);
        double ua = ba.vel.dot(n);
        double ub = bb.vel.dot(n);
        ba.vel += n * (ub - ua);
        bb.vel += n * (ua - ub);
      }
    }

  for (ObjectId o : active_) {
    Body& b = states[o];
    double friction = config_->bodies[static_cast<std::size_t>(o)].friction;
    if (noise_.sigma_s > 0.0)
      friction = std::max(0.0, friction + rng_.gauss(0.0, noise_.sigma_s * kFrictionNoisePerSigma));
    double speed = b.vel.norm();
    if (speed > 0.0) b.vel = b.vel * (std::max(0.0, speed - friction) / speed);

    b.pos += b.vel;

    double r = radius(o);
    const Rect& a = config_->arena;
    if (b.pos.x - r < a.xmin) {
      b.pos.x = 2.0 * (a.xmin + r) - b.pos.x;
      b.vel.x = std::abs(b.vel.x);
    } else if (b.pos.x + r > a.xmax) {
      b.pos.x = 2.0 * (a.xmax - r) - b.pos.x;
      b.vel.x = -std::abs(b.vel.x);
    }
    if (b.pos.y - r < a.ymin) {
      b.pos.y = 2.0 * (a.ymin + r) - b.pos.y;
      b.vel.y = std::abs(b.vel.y);
    } else if (b.pos.y + r > a.ymax) {
      b.pos.y = 2.0 * (a.ymax - r) - b.pos.y;
      b.vel.y = -std::abs(b.vel.y);
    }
  }
  return out;
}

SimulationResult simulate_truth(const WorldConfig& config, const std::vector<ObjectId>& removed,
                                int frames) {
  config.validate();
  if (frames == 0) frames = config.max_v;

  std::vector<ObjectId> active;
  for (std::size_t i = 0; i < config.bodies.size(); ++i) {
    ObjectId o = static_cast<ObjectId>(i);
    if (std::find(removed.begin(), removed.end(), o) == removed.end()) active.push_back(o);
  }

  Stepper stepper(config, active, SimNoise{});
  BodyStates states = stepper.initial_states();

  SimulationResult result;
  for (int f = 1; f <= frames; ++f) {
    for (ObjectId o : active)
      result.trace.add(o, ObjState{f, states[o].pos, states[o].vel});
    StepOutput out = stepper.step(f, states);
    for (const auto& e : out.events) result.events.push_back(e);
  }
  result.events = normalize_events(std::move(result.events));
  return result;
}

SimulationResult perceive(const SimulationResult& truth, const WorldConfig& config,
                          const PerceptionNoise& noise) {
  Rng rng = Rng(noise.seed).substream("perception-noise");

  SimulationResult out;
  for (ObjectId o : truth.trace.objects()) {
    Rng stream = rng.substream(static_cast<std::uint64_t>(o));
    for (const auto& s : truth.trace.of(o)) {
      bool drop = noise.p_drop > 0.0 && stream.bernoulli(noise.p_drop);
      double dx = noise.sigma_p > 0.0 ? stream.gauss(0.0, noise.sigma_p) : 0.0;
      double dy = noise.sigma_p > 0.0 ? stream.gauss(0.0, noise.sigma_p) : 0.0;
      if (drop) continue;
      out.trace.add(o, ObjState{s.frame, {s.pos.x + dx, s.pos.y + dy}, std::nullopt});
    }
  }
  out.events = sps::detect_collisions(
      out.trace,
      [&](ObjectId a, ObjectId b) {
        return config.bodies[static_cast<std::size_t>(a)].radius +
               config.bodies[static_cast<std::size_t>(b)].radius;
      },
      kContactMergeGap);
  return out;
}

WorldConfig generate_world(const GenParams& params, Rng& rng) {
  WorldConfig config;
  config.arena = params.arena;
  config.max_v = params.max_v;
  config.max_s = params.max_s;

  int n = rng.uniform_int(params.n_min, params.n_max);
  for (int i = 0; i < n; ++i) {
    BodyInit body;
    body.radius = params.radius;
    body.friction = rng.uniform(0.0, params.friction_max);
    for (int attempt = 0;; ++attempt) {
      body.pos = {rng.uniform(params.arena.xmin + 2 * params.radius,
                              params.arena.xmax - 2 * params.radius),
                  rng.uniform(params.arena.ymin + 2 * params.radius,
                              params.arena.ymax - 2 * params.radius)};
      bool clear = true;
      for (const auto& other : config.bodies)
        if ((body.pos - other.pos).norm() < 3.0 * params.radius) clear = false;
      if (clear || attempt > 200) break;
    }
    double speed = rng.uniform(params.speed_min, params.speed_max);
    double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
    body.vel = {speed * std::cos(angle), speed * std::sin(angle)};
    config.bodies.push_back(body);
  }
  config.validate();
  return config;
}

std::vector<ObjectRecord> assign_features(std::size_t n, Rng& rng) {
  static const std::vector<std::string> colors = {"gray", "red",    "blue",   "green", "brown",
                                                  "cyan", "purple", "yellow", "orange"};
  static const std::vector<std::string> shapes = {"cube", "sphere", "cylinder"};
  static const std::vector<std::string> materials = {"rubber", "metal"};
  static const std::vector<std::string> sizes = {"small", "large"};

  std::vector<std::string> palette = colors;
  for (std::size_t i = palette.size(); i > 1; --i)
    std::swap(palette[i - 1], palette[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(i) - 1))]);

  std::vector<ObjectRecord> objects;
  for (std::size_t i = 0; i < n; ++i) {
    ObjectRecord rec;
    rec.id = static_cast<ObjectId>(i);
    rec.features["color"] = palette[i % palette.size()];
    rec.features["shape"] = shapes[static_cast<std::size_t>(rng.uniform_int(0, 2))];
    rec.features["material"] = materials[static_cast<std::size_t>(rng.uniform_int(0, 1))];
    rec.features["size"] = sizes[static_cast<std::size_t>(rng.uniform_int(0, 1))];
    objects.push_back(std::move(rec));
  }
  return objects;
}

using nlohmann::json;

json world_to_json(const WorldConfig& config) {
  json bodies = json::array();
  for (const auto& b : config.bodies)
    bodies.push_back(json{{"pos", {b.pos.x, b.pos.y}},
                          {"vel", {b.vel.x, b.vel.y}},
                          {"radius", b.radius},
                          {"friction", b.friction}});
  return json{{"bodies", bodies},
              {"arena", {config.arena.xmin, config.arena.ymin, config.arena.xmax, config.arena.ymax}},
              {"max_v", config.max_v},
              {"max_s", config.max_s},
              {"seed", config.seed}};
}

WorldConfig world_from_json(const json& j) {
  WorldConfig config;
  for (const auto& jb : j.at("bodies")) {
    BodyInit b;
    b.pos = {jb.at("pos").at(0).get<double>(), jb.at("pos").at(1).get<double>()};
    b.vel = {jb.at("vel").at(0).get<double>(), jb.at("vel").at(1).get<double>()};
    b.radius = jb.at("radius").get<double>();
    b.friction = jb.at("friction").get<double>();
    config.bodies.push_back(b);
  }
  const auto& a = j.at("arena");
  config.arena = Rect{a.at(0).get<double>(), a.at(1).get<double>(), a.at(2).get<double>(),
                      a.at(3).get<double>()};
  config.max_v = j.at("max_v").get<int>();
  config.max_s = j.at("max_s").get<int>();
  config.seed = j.value("seed", 0ull);
  return config;
}

}  // namespace crcg::world
