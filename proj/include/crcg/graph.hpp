#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "crcg/types.hpp"

namespace crcg {

struct Node {
  ObjectId o = 0;
  int frame = 0;
  auto operator<=>(const Node&) const = default;
};

// The temporal causal graph over object states at event frames: one node per
// (object, event frame), horizontal edges between the two participants of a
// collision, vertical edges per movable object across consecutive event
// frames. Immovable objects (basket, ground) get nodes but no edges.
class CausalGraph {
public:
  CausalGraph() = default;
  static CausalGraph build(const std::vector<ObjectRecord>& objects, const EventSet& events);

  const std::vector<ObjectRecord>& objects() const { return objects_; }
  const std::vector<int>& frames() const { return frames_; }
  const std::vector<int>& collision_frames() const { return collision_frames_; }
  const std::vector<std::pair<Node, Node>>& horizontal() const { return horizontal_; }
  const std::vector<std::pair<Node, Node>>& vertical() const { return vertical_; }

  std::size_t node_count() const { return objects_.size() * frames_.size(); }
  int node_index(Node n) const;  // -1 when (object, frame) is not a graph node
  Node node_at(int index) const;
  bool movable(ObjectId o) const;
  bool has_object(ObjectId o) const;

private:
  std::vector<ObjectRecord> objects_;
  std::vector<int> frames_;
  std::vector<int> collision_frames_;
  std::vector<std::pair<Node, Node>> horizontal_;
  std::vector<std::pair<Node, Node>> vertical_;
};

// Materialized ancestor relation: contains(u, v) iff there is a directed
// path from u to v through the graph (horizontal edges count both ways) and
// u != v.
class AncestorRelation {
public:
  AncestorRelation(const CausalGraph& graph, std::vector<std::uint64_t> bits, std::size_t words);

  bool contains(Node ancestor, Node descendant) const;
  std::vector<Node> descendants(Node ancestor) const;
  std::size_t pair_count() const;

private:
  friend AncestorRelation ancestors(const CausalGraph&);
  bool bit(int u, int v) const {
    return (bits_[static_cast<std::size_t>(u) * words_ + static_cast<std::size_t>(v >> 6)] >>
            (v & 63)) & 1;
  }
  const CausalGraph* graph_;
  std::vector<std::uint64_t> bits_;
  std::size_t words_;
};

// Small node-set wrapper with the lookups the rules need.
class NodeSet {
public:
  void insert(Node n) { set_.insert(n); }
  bool contains(Node n) const { return set_.count(n) > 0; }
  bool contains(ObjectId o, int frame) const { return contains(Node{o, frame}); }
  bool any_for(ObjectId o) const;
  std::optional<int> first_frame(ObjectId o) const;
  const std::set<Node>& nodes() const { return set_; }
  std::size_t size() const { return set_.size(); }
  bool operator==(const NodeSet&) const = default;

private:
  std::set<Node> set_;
};

// Semi-naive fixpoint over the explicit edge lists.
AncestorRelation ancestors(const CausalGraph& graph);

// Nodes affected by the intervention: every intervened object at every
// collision frame, plus every descendant of an intervened object's nodes.
// Under remove_any, a node is affected iff some other object's node is an
// ancestor of it.
NodeSet affected(const CausalGraph& graph, const AncestorRelation& anc,
                 const std::vector<ObjectId>& intervened, bool remove_any = false);

// Per non-removed object with affected nodes, its earliest affected node.
NodeSet sim_nodes(const CausalGraph& graph, const NodeSet& affected,
                  const std::vector<ObjectId>& removed);

// Whether the answer to "does an event of this kind happen between o1 and o2
// after the intervention" can be read off the perception facts alone.
// Negation is not applied here; it belongs to the answer stage.
// When ignore_removed_case is set (remove-any queries), the removed-object
// shortcut is skipped.
Determination determine(EventKind kind, ObjectId o1, ObjectId o2, const EventSet& events,
                        const NodeSet& affected, const std::vector<ObjectId>& removed,
                        bool ignore_removed_case = false);

}  // namespace crcg
