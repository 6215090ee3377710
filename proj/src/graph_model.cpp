#include "ldm3n/graph_model.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <unordered_set>

#include "ldm3n/errors.hpp"
#include "ldm3n/ntriples.hpp"

namespace ldm3n {

namespace {

constexpr std::uint64_t kNone = std::numeric_limits<std::uint64_t>::max();

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

Ldm3nGraph Ldm3nGraph::from_parts(Dictionary mu, std::vector<Edge> edges,
                                  std::vector<std::pair<EdgeRef, EdgeRef>> tau) {
  Ldm3nGraph g;
  g.mu_ = std::move(mu);
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.ref.id < b.ref.id; });
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i].ref.id != i) throw MalformedGraph("edge ids must be dense from 0");
  }
  g.edges_ = std::move(edges);
  g.tau_ = std::move(tau);
  g.index();
  return g;
}

void Ldm3nGraph::index() {
  tau_forward_.assign(edges_.size(), kNone);
  tau_back_.assign(edges_.size(), kNone);
  for (const auto& [ini, ter] : tau_) {
    if (ini.id < edges_.size()) tau_forward_[ini.id] = ter.id;
    if (ter.id < edges_.size()) tau_back_[ter.id] = ini.id;
  }

  nodes_.clear();
  nodes_.reserve(edges_.size());
  for (const auto& e : edges_) {
    nodes_.push_back(e.from);
    nodes_.push_back(e.to);
  }
  std::sort(nodes_.begin(), nodes_.end());
  nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());

  std::vector<std::uint32_t> order(edges_.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return edges_[a].from < edges_[b].from; });
  out_edge_ids_ = std::move(order);
  out_ranges_.clear();
  for (std::uint32_t i = 0; i < out_edge_ids_.size(); ++i) {
    TermId from = edges_[out_edge_ids_[i]].from;
    if (out_ranges_.empty() || out_ranges_.back().first != from) out_ranges_.push_back({from, {i, i}});
    out_ranges_.back().second.second = i + 1;
  }
}

std::pair<TermId, TermId> Ldm3nGraph::epsilon(EdgeRef e) const {
  const Edge& ed = edge(e.id);
  return {ed.from, ed.to};
}

const Edge& Ldm3nGraph::edge(std::uint64_t id) const {
  if (id >= edges_.size()) throw MalformedGraph("unknown edge id " + std::to_string(id));
  return edges_[id];
}

EdgeRef Ldm3nGraph::tau(EdgeRef initial) const {
  if (initial.id >= edges_.size() || tau_forward_[initial.id] == kNone)
    throw MalformedGraph("edge " + std::to_string(initial.id) + " has no terminal partner");
  return edges_[tau_forward_[initial.id]].ref;
}

EdgeRef Ldm3nGraph::tau_inverse(EdgeRef terminal) const {
  if (terminal.id >= edges_.size() || tau_back_[terminal.id] == kNone)
    throw MalformedGraph("edge " + std::to_string(terminal.id) + " has no initial partner");
  return edges_[tau_back_[terminal.id]].ref;
}

bool Ldm3nGraph::has_node(TermId n) const { return std::binary_search(nodes_.begin(), nodes_.end(), n); }

std::span<const std::uint32_t> Ldm3nGraph::out_edges(TermId node) const {
  auto it = std::lower_bound(out_ranges_.begin(), out_ranges_.end(), node,
                             [](const auto& r, TermId n) { return r.first < n; });
  if (it == out_ranges_.end() || it->first != node) return {};
  auto [lo, hi] = it->second;
  return std::span<const std::uint32_t>(out_edge_ids_).subspan(lo, hi - lo);
}

bool Ldm3nGraph::has_initial(TermId s, TermId p) const {
  for (auto id : out_edges(s)) {
    const Edge& e = edges_[id];
    if (e.ref.kind == EdgeKind::Initial && e.to == p) return true;
  }
  return false;
}

bool Ldm3nGraph::has_triple(TermId s, TermId p, TermId o) const {
  for (auto id : out_edges(s)) {
    const Edge& e = edges_[id];
    if (e.ref.kind != EdgeKind::Initial || e.to != p || tau_forward_[id] == kNone) continue;
    const Edge& t = edges_[tau_forward_[id]];
    if (t.from == p && t.to == o) return true;
  }
  return false;
}

std::vector<std::string> Ldm3nGraph::check() const {
  std::vector<std::string> problems;
  std::size_t initial = 0;
  for (const auto& e : edges_) {
    if (e.ref.kind == EdgeKind::Initial) {
      ++initial;
      if (tau_forward_[e.ref.id] == kNone) problems.push_back("initial edge " + std::to_string(e.ref.id) + " unpaired");
    } else if (tau_back_[e.ref.id] == kNone) {
      problems.push_back("terminal edge " + std::to_string(e.ref.id) + " unpaired");
    }
    if (!mu_.contains(e.from) || !mu_.contains(e.to))
      problems.push_back("edge " + std::to_string(e.ref.id) + " touches a node outside mu");
  }
  std::unordered_set<std::uint64_t> seen_ini;
  std::unordered_set<std::uint64_t> seen_ter;
  for (const auto& [ini, ter] : tau_) {
    if (ini.id >= edges_.size() || ter.id >= edges_.size()) {
      problems.push_back("tau references unknown edge");
      continue;
    }
    const Edge& a = edges_[ini.id];
    const Edge& b = edges_[ter.id];
    if (a.ref.kind != EdgeKind::Initial || b.ref.kind != EdgeKind::Terminal)
      problems.push_back("tau pair (" + std::to_string(ini.id) + "," + std::to_string(ter.id) + ") has wrong kinds");
    if (a.to != b.from)
      problems.push_back("tau pair (" + std::to_string(ini.id) + "," + std::to_string(ter.id) +
                         ") does not meet at a shared node");
    if (!seen_ini.insert(ini.id).second || !seen_ter.insert(ter.id).second)
      problems.push_back("tau is not injective");
  }
  if (edges_.size() != 2 * tau_.size() || initial != tau_.size())
    problems.push_back("edge count is not twice the number of tau pairs");
  return problems;
}

std::string Ldm3nGraph::to_dot() const {
  std::ostringstream out;
  out << "digraph ldm3n {\n";
  for (TermId n : nodes_) {
    std::string label = mu_.contains(n) ? mu_.decode(n).to_ntriples() : std::to_string(n.value);
    out << "  n" << n.value << " [label=\"" << dot_escape(label) << "\"" << (n.is_literal() ? ", shape=box" : "")
        << "];\n";
  }
  for (const auto& [ini, ter] : tau_) {
    const Edge& a = edges_[ini.id];
    const Edge& b = edges_[ter.id];
    std::uint64_t triple = ini.id / 2;
    out << "  n" << a.from.value << " -> n" << a.to.value << " [label=\"I" << triple << "\"];\n";
    out << "  n" << b.from.value << " -> n" << b.to.value << " [label=\"T" << triple << "\", style=dashed];\n";
  }
  out << "}\n";
  return out.str();
}

Ldm3nGraph forward_transform(const Dictionary& dict, std::span<const EncodedTriple> triples) {
  std::vector<Edge> edges;
  std::vector<std::pair<EdgeRef, EdgeRef>> tau;
  std::unordered_set<EncodedTriple, EncodedTripleHash> seen;
  for (const auto& t : triples) {
    if (!seen.insert(t).second) continue;
    std::uint64_t i = tau.size();
    EdgeRef ini{2 * i, EdgeKind::Initial};
    EdgeRef ter{2 * i + 1, EdgeKind::Terminal};
    edges.push_back({ini, t.s, t.p});
    edges.push_back({ter, t.p, t.o});
    tau.emplace_back(ini, ter);
  }
  return Ldm3nGraph::from_parts(dict, std::move(edges), std::move(tau));
}

Ldm3nGraph forward_transform(std::span<const Triple> triples) {
  Dictionary dict;
  std::vector<EncodedTriple> enc;
  enc.reserve(triples.size());
  for (const auto& t : triples) enc.push_back({dict.encode(t.subject()), dict.encode(t.predicate()), dict.encode(t.object())});
  return forward_transform(dict, enc);
}

std::vector<Triple> backward_transform(const Ldm3nGraph& g) {
  std::vector<Triple> out;
  out.reserve(g.tau_size());
  for (const auto& [ini, ter] : g.tau_pairs()) {
    auto [ns, np] = g.epsilon(ini);
    auto [np2, no] = g.epsilon(ter);
    if (np != np2)
      throw MalformedGraph("tau pair (" + std::to_string(ini.id) + "," + std::to_string(ter.id) +
                           ") does not meet at a shared node");
    try {
      out.emplace_back(g.mu_inverse(ns), g.mu_inverse(np), g.mu_inverse(no));
    } catch (const UnknownId& e) {
      throw MalformedGraph(std::string("node outside mu: ") + e.what());
    } catch (const MalformedGraph&) {
      throw;
    } catch (const Error& e) {
      throw MalformedGraph(std::string("pair does not form a triple: ") + e.what());
    }
  }
  return out;
}

std::size_t graph_size(const Ldm3nGraph& g) { return g.edge_count(); }

}  // namespace ldm3n
