#include "ldm3n/traversal.hpp"

#include <algorithm>
#include <functional>
#include <queue>

#include "ldm3n/errors.hpp"

namespace ldm3n {

std::string to_string(Model m) { return m == Model::Ldm3n ? "ldm3n" : "nlan"; }

Model parse_model(const std::string& name) {
  if (name == "ldm3n" || name == "ldm-3n") return Model::Ldm3n;
  if (name == "nlan") return Model::Nlan;
  throw Error("unknown model '" + name + "' (expected ldm3n or nlan)");
}

namespace {

using Clock = std::chrono::steady_clock;

struct QueueItem {
  std::uint64_t distance;
  TermId node;

  // min-heap on (distance, node id)
  bool operator>(const QueueItem& o) const {
    return distance != o.distance ? distance > o.distance : node > o.node;
  }
};

class Search {
 public:
  Search(const GraphView& graph, Model model, const QueryOptions& opts) : graph_(graph), model_(model), opts_(opts) {
    const Dictionary& d = graph.dictionary();
    slots_.assign(std::max(d.next_even().value, d.next_odd().value) + 1, 0);
  }

  PathQueryResult run(TermId source, TermId target) {
    auto start = Clock::now();
    if (!graph_.has_node(source)) throw UnknownNode("unknown source node id " + std::to_string(source.value));
    if (!graph_.has_node(target)) throw UnknownNode("unknown target node id " + std::to_string(target.value));

    PathQueryResult result;
    insert(VisitedEntry{source, 0, kNoNode, StepKind::Source, kNoNode});
    queue_.push({0, source});
    std::vector<PredObj> pairs;

    while (!queue_.empty()) {
      auto [dis, cur] = queue_.top();
      queue_.pop();
      if (dis > entry(cur).best_distance) continue;  // stale entry
      ++result.nodes_explored;
      if (cur == target) {
        result.status = PathStatus::Found;
        result.distance = dis;
        if (opts_.reconstruct) reconstruct(target, result);
        break;
      }
      pairs.clear();
      graph_.neighbors(cur, pairs);
      for (const auto& [pred, obj] : pairs) {
        if (model_ == Model::Ldm3n) {
          update_node(pred, dis + 1, cur, StepKind::Predicate, obj);
          update_node(obj, dis + 2, pred, StepKind::Object, cur);
        } else {
          update_node(obj, dis + 1, cur, StepKind::Object, pred);
        }
      }
    }
    result.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start);
    return result;
  }

 private:
  /// Records a strictly better distance for `node` and queues it.
  void update_node(TermId node, std::uint64_t distance, TermId previous, StepKind kind, TermId anchor) {
    if (distance > opts_.max_distance) return;
    VisitedEntry next{node, distance, previous, kind, anchor};
    if (std::uint32_t slot = slots_[node.value]) {
      VisitedEntry& e = entries_[slot - 1];
      if (distance >= e.best_distance) return;
      e = next;
    } else {
      insert(next);
    }
    queue_.push({distance, node});
  }

  void insert(const VisitedEntry& e) {
    entries_.push_back(e);
    slots_[e.node.value] = static_cast<std::uint32_t>(entries_.size());
  }

  const VisitedEntry& entry(TermId node) const { return entries_[slots_[node.value] - 1]; }

  void reconstruct(TermId target, PathQueryResult& result) const {
    std::vector<TermId> nodes{target};
    std::vector<StepKind> steps;
    std::vector<EncodedTriple> triples;
    TermId cur = target;
    while (true) {
      const VisitedEntry& e = entry(cur);
      if (e.kind == StepKind::Source) break;
      if (e.kind == StepKind::Predicate) {
        // initial edge previous -> cur of triple (previous, cur, anchor)
        triples.push_back({e.previous, cur, e.anchor});
        steps.push_back(StepKind::Predicate);
        nodes.push_back(e.previous);
        cur = e.previous;
      } else if (model_ == Model::Ldm3n) {
        // initial + terminal edges of (anchor, previous, cur)
        triples.push_back({e.anchor, e.previous, cur});
        steps.push_back(StepKind::Object);
        steps.push_back(StepKind::Predicate);
        nodes.push_back(e.previous);
        nodes.push_back(e.anchor);
        cur = e.anchor;
      } else {
        triples.push_back({e.previous, e.anchor, cur});
        steps.push_back(StepKind::Object);
        nodes.push_back(e.previous);
        cur = e.previous;
      }
    }
    std::reverse(nodes.begin(), nodes.end());
    std::reverse(steps.begin(), steps.end());
    std::reverse(triples.begin(), triples.end());
    result.resource_path.nodes = std::move(nodes);
    result.steps = std::move(steps);
    result.triple_path.triples = std::move(triples);
  }

  const GraphView& graph_;
  Model model_;
  QueryOptions opts_;
  // visited table: slots_[id] is 1 + index into entries_, 0 if unseen
  std::vector<std::uint32_t> slots_;
  std::vector<VisitedEntry> entries_;
  std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<>> queue_;
};

}  // namespace

PathQueryResult dijkstra_ldm3n(const GraphView& graph, TermId source, TermId target, const QueryOptions& opts) {
  return Search(graph, Model::Ldm3n, opts).run(source, target);
}

PathQueryResult dijkstra_nlan(const GraphView& graph, TermId source, TermId target, const QueryOptions& opts) {
  return Search(graph, Model::Nlan, opts).run(source, target);
}

PathQueryResult shortest_path(const GraphView& graph, TermId source, TermId target, Model model,
                              const QueryOptions& opts) {
  return Search(graph, model, opts).run(source, target);
}

ReachResult reachable(const GraphView& graph, TermId source, TermId target, Model model, const QueryOptions& opts) {
  QueryOptions o = opts;
  o.reconstruct = false;
  PathQueryResult r = Search(graph, model, o).run(source, target);
  return {r.found(), r.distance, r.nodes_explored, r.elapsed};
}

bool validate_resource_path(const Ldm3nGraph& g, std::span<const TermId> nodes) {
  if (nodes.empty()) return false;
  if (nodes.size() == 1) return g.has_node(nodes[0]);
  // feasibility of the prefix ending with edge i taken as initial / terminal
  bool ok_initial = false;
  bool ok_terminal = false;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    bool prefix_ok = i == 0 || ok_initial || ok_terminal;
    bool as_initial = prefix_ok && g.has_initial(nodes[i], nodes[i + 1]);
    bool as_terminal = i > 0 && ok_initial && g.has_triple(nodes[i - 1], nodes[i], nodes[i + 1]);
    ok_initial = as_initial;
    ok_terminal = as_terminal;
    if (!ok_initial && !ok_terminal) return false;
  }
  return true;
}

bool triple_chain_connected(std::span<const EncodedTriple> triples) {
  for (std::size_t k = 0; k + 1 < triples.size(); ++k) {
    const auto& cur = triples[k];
    TermId next_subject = triples[k + 1].s;
    if (next_subject != cur.p && next_subject != cur.o) return false;
  }
  return true;
}

bool validate_triple_path(const GraphView& graph, std::span<const EncodedTriple> triples) {
  for (const auto& t : triples) {
    if (!graph.contains(t))
      throw UnknownTriple("triple (" + std::to_string(t.s.value) + ", " + std::to_string(t.p.value) + ", " +
                          std::to_string(t.o.value) + ") is not in the store");
  }
  return triple_chain_connected(triples);
}

}  // namespace ldm3n
