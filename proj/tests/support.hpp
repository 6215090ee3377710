// Shared fixtures, random generators and brute-force oracles for the tests.
#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "ldm3n/ntriples.hpp"
#include "ldm3n/semantics.hpp"
#include "ldm3n/storage.hpp"
#include "ldm3n/term.hpp"

namespace ldm3n::test {

inline const std::string kEx = "http://example.org/";

inline Term ex(const std::string& local) { return Term::iri(kEx + local); }

inline Triple ex_triple(const std::string& s, const std::string& p, const std::string& o) {
  return Triple(ex(s), ex(p), ex(o));
}

/// Six triples: two political positions of one politician as singleton properties.
inline std::vector<Triple> politicians() {
  return {
      ex_triple("BillClinton", "holdsPos#1", "U.S.President"),
      ex_triple("holdsPos#1", "singletonPropOf", "holdsPos"),
      ex_triple("holdsPos#1", "hasSuccessor", "GeorgeWBush"),
      ex_triple("BillClinton", "holdsPos#2", "ArkansasGovernor"),
      ex_triple("holdsPos#2", "singletonPropOf", "holdsPos"),
      ex_triple("holdsPos#2", "hasSuccessor", "FrankWhite"),
  };
}

inline Vocabulary politicians_vocab() {
  Vocabulary v;
  v.singleton_property_of = kEx + "singletonPropOf";
  return v;
}

inline TermId id_of(const Store& store, const std::string& local) {
  auto id = store.dictionary().find(ex(local));
  if (!id) throw std::runtime_error("fixture term missing: " + local);
  return *id;
}

/// Random triples over a small vocabulary where predicates are drawn from the
/// same pool as subjects, so predicates get reused as subjects.
inline std::vector<Triple> random_triples(std::mt19937_64& rng, std::size_t count, std::size_t resources = 0) {
  if (resources == 0) resources = std::max<std::size_t>(3, count / 2 + 2);
  std::uniform_int_distribution<std::size_t> pick(0, resources - 1);
  std::uniform_int_distribution<int> pct(0, 99);
  std::vector<Triple> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Term s = pct(rng) < 5 ? Term::blank("b" + std::to_string(pick(rng))) : Term::iri(kEx + "r" + std::to_string(pick(rng)));
    Term p = Term::iri(kEx + "r" + std::to_string(pick(rng)));
    Term o = pct(rng) < 15 ? Term::literal("v" + std::to_string(pick(rng)))
                           : Term::iri(kEx + "r" + std::to_string(pick(rng)));
    out.emplace_back(std::move(s), std::move(p), std::move(o));
  }
  return out;
}

inline std::set<Triple> as_set(const std::vector<Triple>& ts) { return {ts.begin(), ts.end()}; }

// ---------------------------------------------------------------------------
// Path oracles. Both run plain BFS over triples in id space and share no code
// with the Dijkstra implementations.

/// LDM-3N: BFS over (node, triple entered through its initial edge) states.
/// From a node entered any way, an initial edge s->p may be taken; a terminal
/// edge p->o only right after the initial edge of the same triple.
inline std::optional<std::uint64_t> oracle_ldm3n_distance(const std::vector<EncodedTriple>& triples, TermId source,
                                                         TermId target) {
  if (source == target) return 0;
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::multimap<TermId, std::size_t> by_subject;
  for (std::size_t i = 0; i < triples.size(); ++i) by_subject.emplace(triples[i].s, i);
  using State = std::pair<TermId, std::size_t>;
  std::map<State, std::uint64_t> dist;
  std::deque<State> queue;
  dist[{source, kNone}] = 0;
  queue.push_back({source, kNone});
  while (!queue.empty()) {
    State cur = queue.front();
    queue.pop_front();
    std::uint64_t d = dist[cur];
    auto visit = [&](State next) {
      if (dist.count(next)) return false;
      dist[next] = d + 1;
      if (next.first == target) return true;
      queue.push_back(next);
      return false;
    };
    auto [lo, hi] = by_subject.equal_range(cur.first);
    for (auto it = lo; it != hi; ++it) {
      if (visit({triples[it->second].p, it->second})) return d + 1;
    }
    if (cur.second != kNone) {
      if (visit({triples[cur.second].o, kNone})) return d + 1;
    }
  }
  return std::nullopt;
}

/// NLAN: BFS over subject -> object hops.
inline std::optional<std::uint64_t> oracle_nlan_distance(const std::vector<EncodedTriple>& triples, TermId source,
                                                        TermId target) {
  if (source == target) return 0;
  std::multimap<TermId, TermId> hops;
  for (const auto& t : triples) hops.emplace(t.s, t.o);
  std::map<TermId, std::uint64_t> dist{{source, 0}};
  std::deque<TermId> queue{source};
  while (!queue.empty()) {
    TermId cur = queue.front();
    queue.pop_front();
    auto [lo, hi] = hops.equal_range(cur);
    for (auto it = lo; it != hi; ++it) {
      if (dist.count(it->second)) continue;
      dist[it->second] = dist[cur] + 1;
      if (it->second == target) return dist[cur] + 1;
      queue.push_back(it->second);
    }
  }
  return std::nullopt;
}

/// Every node sequence of at most `max_len` edges starting at `source` that
/// follows graph edges (initial s->p or terminal p->o), without the tau check.
inline void enumerate_walks(const std::vector<EncodedTriple>& triples, std::vector<TermId>& prefix, std::size_t max_len,
                            std::vector<std::vector<TermId>>& out) {
  out.push_back(prefix);
  if (prefix.size() > max_len) return;
  std::set<TermId> next;
  for (const auto& t : triples) {
    if (t.s == prefix.back()) next.insert(t.p);
    if (t.p == prefix.back()) next.insert(t.o);
  }
  for (TermId n : next) {
    prefix.push_back(n);
    enumerate_walks(triples, prefix, max_len, out);
    prefix.pop_back();
  }
}

// ---------------------------------------------------------------------------
// Naive RDFS closure: apply every rule to the whole set until nothing changes.

using RawTriple = std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>;

inline std::set<RawTriple> oracle_closure(const std::vector<EncodedTriple>& input, const RuleVocabulary& ids,
                                          const std::vector<Rule>& rules) {
  std::set<RawTriple> all;
  for (const auto& t : input) all.insert({t.s.value, t.p.value, t.o.value});
  auto v = [](const std::optional<TermId>& id) { return id ? id->value : 0; };
  const std::uint64_t type = v(ids.type), dom = v(ids.domain), rng = v(ids.range), spo = v(ids.sub_property_of),
                      sco = v(ids.sub_class_of);
  auto has = [&](Rule r) { return std::find(rules.begin(), rules.end(), r) != rules.end(); };
  bool changed = true;
  while (changed) {
    changed = false;
    std::set<RawTriple> add;
    for (const auto& [s1, p1, o1] : all) {
      for (const auto& [s2, p2, o2] : all) {
        if (has(Rule::Rdfs5) && spo && p1 == spo && p2 == spo && o1 == s2) add.insert({s1, spo, o2});
        if (has(Rule::Rdfs7) && spo && p1 == spo && p2 == s1 && (o1 & 1U) == 0) add.insert({s2, o1, o2});
        if (has(Rule::Rdfs9) && type && sco && p1 == sco && p2 == type && o2 == s1) add.insert({s2, type, o1});
        if (has(Rule::Domain) && type && dom && p1 == dom && p2 == s1) add.insert({s2, type, o1});
        if (has(Rule::Range) && type && rng && p1 == rng && p2 == s1 && (o2 & 1U) == 0) add.insert({o2, type, o1});
      }
    }
    for (const auto& t : add) changed |= all.insert(t).second;
  }
  return all;
}

/// Random RDFS schema plus instance data over at most `max_terms` classes and
/// properties each.
inline std::vector<Triple> random_schema(std::mt19937_64& rng, std::size_t max_terms) {
  const std::string rdfs = kRdfsNs;
  const std::string rdf = kRdfNs;
  std::uniform_int_distribution<std::size_t> nterm(2, max_terms);
  std::size_t nc = nterm(rng), np = nterm(rng);
  auto cls = [&](std::size_t i) { return Term::iri(kEx + "C" + std::to_string(i)); };
  auto prop = [&](std::size_t i) { return Term::iri(kEx + "P" + std::to_string(i)); };
  auto inst = [&](std::size_t i) { return Term::iri(kEx + "x" + std::to_string(i)); };
  std::uniform_int_distribution<std::size_t> c(0, nc - 1), p(0, np - 1), x(0, 9);
  std::uniform_int_distribution<int> pct(0, 99);
  std::vector<Triple> out;
  for (std::size_t i = 0; i < nc; ++i) out.emplace_back(cls(c(rng)), Term::iri(rdfs + "subClassOf"), cls(c(rng)));
  for (std::size_t i = 0; i < np; ++i) {
    out.emplace_back(prop(p(rng)), Term::iri(rdfs + "subPropertyOf"), prop(p(rng)));
    if (pct(rng) < 50) out.emplace_back(prop(p(rng)), Term::iri(rdfs + "domain"), cls(c(rng)));
    if (pct(rng) < 50) out.emplace_back(prop(p(rng)), Term::iri(rdfs + "range"), cls(c(rng)));
  }
  for (std::size_t i = 0; i < 12; ++i) {
    Term o = pct(rng) < 20 ? Term::literal("lit" + std::to_string(x(rng))) : inst(x(rng));
    out.emplace_back(inst(x(rng)), prop(p(rng)), std::move(o));
  }
  for (std::size_t i = 0; i < 3; ++i) out.emplace_back(inst(x(rng)), Term::iri(rdf + "type"), cls(c(rng)));
  return out;
}

inline RuleVocabulary rule_ids(const Dictionary& dict, std::optional<TermId> type_override = std::nullopt) {
  auto r = VocabularyIds::resolve(dict, Vocabulary{});
  RuleVocabulary ids{r.type, r.domain, r.range, r.sub_property_of, r.sub_class_of};
  if (type_override) ids.type = type_override;
  return ids;
}

}  // namespace ldm3n::test
