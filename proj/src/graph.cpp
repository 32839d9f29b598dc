#include "crcg/graph.hpp"

#include <algorithm>
#include <bit>
#include <limits>

namespace crcg {

CausalGraph CausalGraph::build(const std::vector<ObjectRecord>& objects, const EventSet& events) {
  CausalGraph g;
  g.objects_ = objects;

  std::set<int> frames, collision_frames;
  for (const auto& e : events) {
    frames.insert(e.frame);
    if (e.kind == EventKind::collide) collision_frames.insert(e.frame);
  }
  g.frames_.assign(frames.begin(), frames.end());
  g.collision_frames_.assign(collision_frames.begin(), collision_frames.end());

  for (const auto& e : events) {
    if (e.kind != EventKind::collide) continue;  // enter events contribute timestamps only
    if (!g.movable(e.a) || !g.movable(e.b)) continue;
    g.horizontal_.push_back({Node{e.a, e.frame}, Node{e.b, e.frame}});
  }
  for (const auto& o : g.objects_) {
    if (o.immovable()) continue;
    for (std::size_t i = 0; i + 1 < g.frames_.size(); ++i)
      g.vertical_.push_back({Node{o.id, g.frames_[i]}, Node{o.id, g.frames_[i + 1]}});
  }
  return g;
}

int CausalGraph::node_index(Node n) const {
  auto fit = std::lower_bound(frames_.begin(), frames_.end(), n.frame);
  if (fit == frames_.end() || *fit != n.frame) return -1;
  for (std::size_t i = 0; i < objects_.size(); ++i)
    if (objects_[i].id == n.o)
      return static_cast<int>(i * frames_.size() + static_cast<std::size_t>(fit - frames_.begin()));
  return -1;
}

Node CausalGraph::node_at(int index) const {
  std::size_t k = frames_.size();
  return Node{objects_[static_cast<std::size_t>(index) / k].id,
              frames_[static_cast<std::size_t>(index) % k]};
}

bool CausalGraph::movable(ObjectId o) const {
  for (const auto& rec : objects_)
    if (rec.id == o) return !rec.immovable();
  return false;
}

bool CausalGraph::has_object(ObjectId o) const {
  for (const auto& rec : objects_)
    if (rec.id == o) return true;
  return false;
}

AncestorRelation::AncestorRelation(const CausalGraph& graph, std::vector<std::uint64_t> bits,
                                   std::size_t words)
    : graph_(&graph), bits_(std::move(bits)), words_(words) {}

bool AncestorRelation::contains(Node ancestor, Node descendant) const {
  int u = graph_->node_index(ancestor);
  int v = graph_->node_index(descendant);
  if (u < 0 || v < 0 || u == v) return false;
  return bit(u, v);
}

std::vector<Node> AncestorRelation::descendants(Node ancestor) const {
  std::vector<Node> out;
  int u = graph_->node_index(ancestor);
  if (u < 0) return out;
  for (std::size_t v = 0; v < graph_->node_count(); ++v)
    if (bit(u, static_cast<int>(v))) out.push_back(graph_->node_at(static_cast<int>(v)));
  return out;
}

std::size_t AncestorRelation::pair_count() const {
  std::size_t n = 0;
  for (std::uint64_t w : bits_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

AncestorRelation ancestors(const CausalGraph& graph) {
  const std::size_t n = graph.node_count();
  const std::size_t words = (n + 63) / 64;

  // Directed edge list: vertical edges as given, horizontal edges both ways.
  std::vector<std::pair<int, int>> edges;
  for (const auto& [from, to] : graph.vertical())
    edges.push_back({graph.node_index(from), graph.node_index(to)});
  for (const auto& [a, b] : graph.horizontal()) {
    int u = graph.node_index(a), v = graph.node_index(b);
    edges.push_back({u, v});
    edges.push_back({v, u});
  }

  std::vector<std::vector<int>> succ(n);
  for (auto [u, v] : edges) succ[static_cast<std::size_t>(u)].push_back(v);

  std::vector<std::uint64_t> reach(n * words, 0), delta(n * words, 0);
  auto set_bit = [&](std::vector<std::uint64_t>& m, std::size_t u, int v) {
    m[u * words + static_cast<std::size_t>(v >> 6)] |= 1ull << (v & 63);
  };
  for (auto [u, v] : edges) {
    set_bit(reach, static_cast<std::size_t>(u), v);
    set_bit(delta, static_cast<std::size_t>(u), v);
  }

  // Semi-naive iteration: join the last round's new pairs against the edge
  // list until nothing new is derived. Self-pairs are excluded from the
  // relation; paths through them never add reachability.
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::uint64_t> next(n * words, 0);
    for (std::size_t u = 0; u < n; ++u) {
      for (std::size_t w = 0; w < words; ++w) {
        std::uint64_t d = delta[u * words + w];
        while (d) {
          int mid = static_cast<int>(w * 64 + static_cast<std::size_t>(std::countr_zero(d)));
          d &= d - 1;
          for (int v : succ[static_cast<std::size_t>(mid)]) {
            if (static_cast<std::size_t>(v) == u) continue;
            std::size_t slot = u * words + static_cast<std::size_t>(v >> 6);
            std::uint64_t mask = 1ull << (v & 63);
            if (!(reach[slot] & mask)) {
              reach[slot] |= mask;
              next[slot] |= mask;
              changed = true;
            }
          }
        }
      }
    }
    delta.swap(next);
  }
  return AncestorRelation(graph, std::move(reach), words);
}

bool NodeSet::any_for(ObjectId o) const {
  auto it = set_.lower_bound(Node{o, std::numeric_limits<int>::min()});
  return it != set_.end() && it->o == o;
}

std::optional<int> NodeSet::first_frame(ObjectId o) const {
  auto it = set_.lower_bound(Node{o, std::numeric_limits<int>::min()});
  if (it == set_.end() || it->o != o) return std::nullopt;
  return it->frame;
}

NodeSet affected(const CausalGraph& graph, const AncestorRelation& anc,
                 const std::vector<ObjectId>& intervened, bool remove_any) {
  NodeSet out;
  if (remove_any) {
    for (const auto& rec : graph.objects())
      for (int t : graph.frames()) {
        Node node{rec.id, t};
        bool hit = false;
        for (const auto& other : graph.objects()) {
          if (other.id == rec.id) continue;
          for (int t2 : graph.frames())
            if (anc.contains(Node{other.id, t2}, node)) {
              hit = true;
              break;
            }
          if (hit) break;
        }
        if (hit) out.insert(node);
      }
    return out;
  }
  for (ObjectId o : intervened) {
    if (!graph.has_object(o)) continue;
    for (int t : graph.collision_frames()) out.insert(Node{o, t});
    for (int t : graph.frames())
      for (Node d : anc.descendants(Node{o, t})) out.insert(d);
  }
  return out;
}

NodeSet sim_nodes(const CausalGraph& graph, const NodeSet& affected,
                  const std::vector<ObjectId>& removed) {
  NodeSet out;
  for (const auto& rec : graph.objects()) {
    if (std::find(removed.begin(), removed.end(), rec.id) != removed.end()) continue;
    if (auto t = affected.first_frame(rec.id)) out.insert(Node{rec.id, *t});
  }
  return out;
}

Determination determine(EventKind kind, ObjectId o1, ObjectId o2, const EventSet& events,
                        const NodeSet& affected, const std::vector<ObjectId>& removed,
                        bool ignore_removed_case) {
  auto is_removed = [&](ObjectId o) {
    return std::find(removed.begin(), removed.end(), o) != removed.end();
  };
  if (!ignore_removed_case && (is_removed(o1) || is_removed(o2))) return Determination::no;

  std::vector<int> frames = event_frames(events, kind, o1, o2);
  for (int t : frames)
    if (!affected.contains(o1, t) && !affected.contains(o2, t)) return Determination::yes;

  if (frames.empty() && !affected.any_for(o1) && !affected.any_for(o2)) return Determination::no;
  return Determination::undetermined;
}

}  // namespace crcg
