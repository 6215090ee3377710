#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ldm3n/dictionary.hpp"
#include "ldm3n/storage.hpp"
#include "ldm3n/term.hpp"

namespace ldm3n {

enum class EdgeKind : std::uint8_t { Initial, Terminal };

struct EdgeRef {
  std::uint64_t id = 0;
  EdgeKind kind = EdgeKind::Initial;

  friend bool operator==(const EdgeRef&, const EdgeRef&) = default;
};

/// A directed edge with its endpoints, i.e. an element of E together with epsilon(e).
struct Edge {
  EdgeRef ref;
  TermId from;
  TermId to;
};

/// Explicit labeled directed multigraph with triple nodes.
///
/// Every triple (s, p, o) is realised by an initial edge s -> p and a terminal
/// edge p -> o, tied together by tau. Nodes are dictionary ids, so mu is the
/// dictionary's encode and mu^-1 its decode. Edge ids are 2i (initial) and
/// 2i+1 (terminal) for the i-th distinct triple in input order.
///
/// Used for model-level checks and as the oracle for index-backed traversal;
/// queries in production run against the adjacency index instead.
class Ldm3nGraph {
 public:
  Ldm3nGraph() = default;

  /// Assembles a graph from raw parts. No invariants are checked here; use
  /// check() or backward_transform() to detect malformed input.
  static Ldm3nGraph from_parts(Dictionary mu, std::vector<Edge> edges,
                               std::vector<std::pair<EdgeRef, EdgeRef>> tau);

  std::span<const TermId> nodes() const noexcept { return nodes_; }
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  /// Number of (initial, terminal) pairs.
  std::size_t tau_size() const noexcept { return tau_.size(); }

  std::pair<TermId, TermId> epsilon(EdgeRef e) const;
  /// Terminal partner of an initial edge.
  EdgeRef tau(EdgeRef initial) const;
  /// Initial partner of a terminal edge.
  EdgeRef tau_inverse(EdgeRef terminal) const;
  std::span<const std::pair<EdgeRef, EdgeRef>> tau_pairs() const noexcept { return tau_; }

  std::optional<TermId> mu(const Term& t) const { return mu_.find(t); }
  const Term& mu_inverse(TermId node) const { return mu_.decode(node); }
  const Dictionary& dictionary() const noexcept { return mu_; }
  bool has_node(TermId n) const;

  /// Edges leaving `node`, both kinds.
  std::span<const std::uint32_t> out_edges(TermId node) const;
  const Edge& edge(std::uint64_t id) const;

  /// True if some tau pair realises (s, p, o).
  bool has_triple(TermId s, TermId p, TermId o) const;
  /// True if some initial edge runs s -> p.
  bool has_initial(TermId s, TermId p) const;

  /// Invariant violations (empty for a well-formed graph).
  std::vector<std::string> check() const;

  /// Graphviz rendering: initial edges solid, terminal edges dashed, each
  /// tau pair labelled with its triple index.
  std::string to_dot() const;

 private:
  void index();

  Dictionary mu_;
  std::vector<TermId> nodes_;
  std::vector<Edge> edges_;  // indexed by EdgeRef::id
  std::vector<std::pair<EdgeRef, EdgeRef>> tau_;
  std::vector<std::uint64_t> tau_forward_;  // initial edge id -> terminal edge id
  std::vector<std::uint64_t> tau_back_;     // terminal edge id -> initial edge id
  std::vector<std::uint32_t> out_edge_ids_;
  std::vector<std::pair<TermId, std::pair<std::uint32_t, std::uint32_t>>> out_ranges_;  // sorted by node
};

/// Builds the graph for a triple set. Duplicate triples collapse (set semantics).
Ldm3nGraph forward_transform(std::span<const Triple> triples);

/// Builds the graph for already-encoded triples, reusing `dict` as mu.
Ldm3nGraph forward_transform(const Dictionary& dict, std::span<const EncodedTriple> triples);

/// Recovers the triple set, one triple per tau pair, in edge order.
/// Throws MalformedGraph if a pair does not meet at a shared node.
std::vector<Triple> backward_transform(const Ldm3nGraph& g);

/// Number of edges; equals twice the triple count.
std::size_t graph_size(const Ldm3nGraph& g);

}  // namespace ldm3n
