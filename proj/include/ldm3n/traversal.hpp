#pragma once

#include <chrono>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "ldm3n/dictionary.hpp"
#include "ldm3n/graph_model.hpp"
#include "ldm3n/storage.hpp"

namespace ldm3n {

/// Traversal semantics. Ldm3n walks subject -> predicate -> object; Nlan
/// hops subject -> object and never visits predicates.
enum class Model { Ldm3n, Nlan };

std::string to_string(Model m);
Model parse_model(const std::string& name);

/// How a node was entered during a search.
enum class StepKind : std::uint8_t {
  Source,     ///< the query source
  Predicate,  ///< via an initial edge, one hop from its subject
  Object,     ///< via an initial + terminal edge pair (or one NLAN hop)
};

/// Best-known state of a node in the visited table.
struct VisitedEntry {
  TermId node;
  std::uint64_t best_distance = 0;
  TermId previous;  ///< kNoNode for the source
  StepKind kind = StepKind::Source;
  /// Completes the triple used to enter the node: the subject for Object
  /// entries, the object of the chosen triple for Predicate entries.
  TermId anchor;
};

struct ResourcePath {
  std::vector<TermId> nodes;
  std::size_t distance() const noexcept { return nodes.empty() ? 0 : nodes.size() - 1; }
};

struct TriplePath {
  std::vector<EncodedTriple> triples;
};

enum class PathStatus { Found, Unreachable };

struct PathQueryResult {
  PathStatus status = PathStatus::Unreachable;
  std::uint64_t distance = 0;
  ResourcePath resource_path;
  TriplePath triple_path;
  /// Step kind of each resource-path node after the first (parallel to nodes[1..]).
  std::vector<StepKind> steps;
  std::uint64_t nodes_explored = 0;
  std::chrono::nanoseconds elapsed{0};

  bool found() const noexcept { return status == PathStatus::Found; }
};

struct QueryOptions {
  /// Nodes farther than this are not expanded.
  std::uint64_t max_distance = std::numeric_limits<std::uint64_t>::max();
  /// Skip path reconstruction (reachability mode).
  bool reconstruct = true;
};

/// Shortest resource path over the LDM-3N model. A node's predicate is
/// reached at distance+1 and the object at distance+2 with the predicate as
/// its previous node. Throws UnknownNode if either id was never issued.
PathQueryResult dijkstra_ldm3n(const GraphView& graph, TermId source, TermId target, const QueryOptions& opts = {});

/// Shortest subject -> object hop path over the NLAN model.
PathQueryResult dijkstra_nlan(const GraphView& graph, TermId source, TermId target, const QueryOptions& opts = {});

PathQueryResult shortest_path(const GraphView& graph, TermId source, TermId target, Model model,
                              const QueryOptions& opts = {});

struct ReachResult {
  bool reachable = false;
  std::uint64_t distance = 0;
  std::uint64_t nodes_explored = 0;
  std::chrono::nanoseconds elapsed{0};
};

ReachResult reachable(const GraphView& graph, TermId source, TermId target, Model model,
                      const QueryOptions& opts = {});

/// True iff consecutive nodes are joined by edges of `g` and every terminal
/// edge directly follows its own initial edge.
bool validate_resource_path(const Ldm3nGraph& g, std::span<const TermId> nodes);

/// True iff each triple's subject is the predicate or object of the one
/// before it. Throws UnknownTriple if a triple is absent from `graph`.
bool validate_triple_path(const GraphView& graph, std::span<const EncodedTriple> triples);

/// The subject-sharing condition alone, without the membership check.
bool triple_chain_connected(std::span<const EncodedTriple> triples);

}  // namespace ldm3n
