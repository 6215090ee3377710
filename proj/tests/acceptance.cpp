// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "ldm3n/graph_model.hpp"
#include "ldm3n/harness.hpp"
#include "ldm3n/semantics.hpp"
#include "ldm3n/storage.hpp"
#include "ldm3n/traversal.hpp"
#include "support.hpp"

using namespace ldm3n;
using namespace ldm3n::test;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

struct Outcome {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

void criterion(int n, const std::string& name, const std::function<Outcome()>& body) {
  auto start = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.fail(std::string("exception: ") + e.what());
  }
  double secs = std::chrono::duration<double>(Clock::now() - start).count();
  char timing[32];
  std::snprintf(timing, sizeof timing, "%.2fs", secs);
  std::cout << (o.ok ? "PASS" : "FAIL") << "  " << n << ". " << name << " [" << timing << "]";
  if (!o.detail.empty()) std::cout << " -- " << o.detail;
  std::cout << std::endl;
  if (!o.ok) ++failures;
}

std::string str(std::uint64_t v) { return std::to_string(v); }

}  // namespace

int main() {
  criterion(1, "motivating example: LDM-3N distance 3 with the 4-node path, NLAN unreachable", [] {
    Outcome o;
    auto start = Clock::now();
    Store st = Store::build(politicians());
    auto r = dijkstra_ldm3n(st.view(), id_of(st, "BillClinton"), id_of(st, "GeorgeWBush"));
    std::vector<TermId> want{id_of(st, "BillClinton"), id_of(st, "holdsPos#1"), id_of(st, "hasSuccessor"),
                             id_of(st, "GeorgeWBush")};
    if (!r.found() || r.distance != 3) o.fail("LDM-3N distance " + str(r.distance));
    if (r.resource_path.nodes != want) o.fail("unexpected resource path");
    if (dijkstra_nlan(st.view(), id_of(st, "BillClinton"), id_of(st, "GeorgeWBush")).found())
      o.fail("NLAN found a path");
    if (Clock::now() - start > std::chrono::seconds(1)) o.fail("took over 1 s");
    return o;
  });

  criterion(2, "graph size: 2|T| edges and one node per distinct term (100 random sets)", [] {
    Outcome o;
    std::mt19937_64 rng(101);
    for (int i = 0; i < 100 && o.ok; ++i) {
      auto ts = random_triples(rng, 1 + rng() % 500);
      auto distinct = as_set(ts);
      std::set<Term> terms;
      for (const auto& t : distinct) terms.insert({t.subject(), t.predicate(), t.object()});
      Ldm3nGraph g = forward_transform(ts);
      if (g.edge_count() != 2 * distinct.size()) o.fail("edge count " + str(g.edge_count()));
      if (g.node_count() != terms.size()) o.fail("node count " + str(g.node_count()));
      if (!g.check().empty()) o.fail("graph invariant: " + g.check().front());
    }
    return o;
  });

  criterion(3, "round trip: backward(forward(T)) == T (100 random sets)", [] {
    Outcome o;
    std::mt19937_64 rng(202);
    for (int i = 0; i < 100 && o.ok; ++i) {
      auto ts = random_triples(rng, 1 + rng() % 500);
      if (as_set(backward_transform(forward_transform(ts))) != as_set(ts)) o.fail("set mismatch in round " + str(i));
    }
    return o;
  });

  criterion(4, "oracle equivalence: both Dijkstra variants match BFS (50 stores x 50 pairs)", [] {
    Outcome o;
    auto start = Clock::now();
    std::mt19937_64 rng(303);
    std::size_t reached = 0;
    for (int round = 0; round < 50 && o.ok; ++round) {
      Store st = Store::build(random_triples(rng, 1 + rng() % 200));
      auto triples = st.base().triples();
      auto ids = st.dictionary().ids();
      for (int q = 0; q < 50; ++q) {
        TermId s = ids[rng() % ids.size()], t = ids[rng() % ids.size()];
        auto want = oracle_ldm3n_distance(triples, s, t);
        auto got = dijkstra_ldm3n(st.view(), s, t);
        if (got.found() != want.has_value() || (want && got.distance != *want)) o.fail("LDM-3N mismatch");
        if (reachable(st.view(), s, t, Model::Ldm3n).reachable != want.has_value()) o.fail("LDM-3N reach mismatch");
        auto nwant = oracle_nlan_distance(triples, s, t);
        auto ngot = dijkstra_nlan(st.view(), s, t);
        if (ngot.found() != nwant.has_value() || (nwant && ngot.distance != *nwant)) o.fail("NLAN mismatch");
        if (reachable(st.view(), s, t, Model::Nlan).reachable != nwant.has_value()) o.fail("NLAN reach mismatch");
        reached += want.has_value();
      }
    }
    if (Clock::now() - start > std::chrono::seconds(30)) o.fail("took over 30 s");
    if (o.ok) o.detail = str(reached) + "/2500 pairs LDM-3N reachable";
    return o;
  });

  criterion(5, "chain law: distance 3(j-i) for k in 2..47, NLAN unreachable, k=6 gives 15", [] {
    Outcome o;
    ChainSpec spec;
    for (std::size_t k = 2; k <= 47; ++k) spec.members_per_group.push_back(k);
    spec.seed = 5;
    auto chains = generate_successor_chain(spec);
    Store st = Store::build(chains.triples);
    std::size_t checked = 0;
    for (const auto& group : chains.members) {
      std::vector<TermId> m;
      for (const auto& t : group) m.push_back(*st.dictionary().find(t));
      for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < m.size(); ++j) {
          if (i == j) continue;
          ++checked;
          auto r = reachable(st.view(), m[i], m[j], Model::Ldm3n);
          if (i < j && (!r.reachable || r.distance != 3 * (j - i))) o.fail("bad distance in chain k=" + str(m.size()));
          if (i > j && r.reachable) o.fail("backward pair reachable");
          if (reachable(st.view(), m[i], m[j], Model::Nlan).reachable) o.fail("NLAN reachable");
        }
      }
      if (m.size() == 6) {
        auto r = dijkstra_ldm3n(st.view(), m.front(), m.back());
        if (r.distance != 15 || r.resource_path.nodes.size() != 16) o.fail("k=6 distance " + str(r.distance));
      }
    }
    if (o.ok) o.detail = str(checked) + " ordered pairs";
    return o;
  });

  criterion(6, "entailment: semi-naive equals naive closure, idempotent, order independent (30 schemas)", [] {
    Outcome o;
    std::mt19937_64 rng(606);
    for (int i = 0; i < 30 && o.ok; ++i) {
      auto schema = random_schema(rng, 15);
      Store st = Store::build(schema);
      auto ids = rule_ids(st.dictionary());
      auto base = st.base().triples();
      auto res = entail_closure(base, ids);
      std::set<RawTriple> got;
      for (const auto& t : base) got.insert({t.s.value, t.p.value, t.o.value});
      for (const auto& t : res.derived) got.insert({t.s.value, t.p.value, t.o.value});
      if (got != oracle_closure(base, ids, kAllRules)) o.fail("closure differs from oracle in schema " + str(i));

      std::vector<EncodedTriple> closed = base;
      closed.insert(closed.end(), res.derived.begin(), res.derived.end());
      if (!entail_closure(closed, ids).derived.empty()) o.fail("rerun derived new triples");

      std::set<Triple> runs[2];
      for (auto& run : runs) {
        auto shuffled = schema;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        Store s2 = Store::build(shuffled);
        entail_fixpoint(s2);
        for (const auto& t : s2.view(ViewKind::Union).triples()) run.insert(s2.decode(t));
      }
      if (runs[0] != runs[1]) o.fail("shuffled runs disagree");
    }
    return o;
  });

  criterion(7, "extension subsets hold after materialization", [] {
    Outcome o;
    std::mt19937_64 rng(707);
    std::size_t checked = 0;
    for (int i = 0; i < 30 && o.ok; ++i) {
      Store st = Store::build(random_schema(rng, 15));
      entail_fixpoint(st);
      GraphView all = st.view(ViewKind::Union);
      auto ext = compute_extensions(all);
      auto voc = VocabularyIds::resolve(st.dictionary(), Vocabulary{});
      auto get = [](const auto& map, TermId k) {
        auto it = map.find(k);
        return it == map.end() ? std::remove_cvref_t<decltype(it->second)>{} : it->second;
      };
      for (const auto& t : all.triples()) {
        if (voc.sub_property_of && t.p == *voc.sub_property_of && !t.o.is_literal()) {
          auto x = get(ext.generic, t.s), y = get(ext.generic, t.o);
          if (!std::includes(y.begin(), y.end(), x.begin(), x.end())) o.fail("I_EXT subset violated");
          ++checked;
        }
        if (voc.sub_class_of && t.p == *voc.sub_class_of) {
          auto x = get(ext.classes, t.s), y = get(ext.classes, t.o);
          if (!std::includes(y.begin(), y.end(), x.begin(), x.end())) o.fail("I_CEXT subset violated");
          ++checked;
        }
      }
    }
    if (o.ok) o.detail = str(checked) + " schema triples checked";
    return o;
  });

  criterion(8, "singleton uniqueness: generated stores clean, injected double use detected", [] {
    Outcome o;
    ChainSpec spec;
    spec.members_per_group = {22, 34, 51};
    spec.noise_triples = 5000;
    spec.seed = 8;
    auto chains = generate_successor_chain(spec);
    Store clean = Store::build(chains.triples);
    auto sp = classify_singleton_properties(clean.view());
    if (sp.size() != 107) o.fail("expected 107 singleton properties, got " + str(sp.size()));
    if (!validate_singleton_uniqueness(clean.view(), sp, true).empty()) o.fail("generated store has issues");

    auto dirty = chains.triples;
    const Term victim = dirty[0].predicate();
    dirty.emplace_back(Term::iri(kEx + "intruder"), victim, chains.positions[0]);
    Store bad = Store::build(dirty);
    auto issues = validate_singleton_uniqueness(bad.view(), classify_singleton_properties(bad.view()));
    if (issues.size() != 1 || bad.dictionary().decode(issues[0].property) != victim || issues[0].occurrences != 2)
      o.fail("double use not reported exactly once");
    return o;
  });

  criterion(9, "pair counts: groups of 51/34/22 give 2550/1122/462 ordered pairs", [] {
    Outcome o;
    ChainSpec spec;
    spec.members_per_group = {51, 34, 22};
    spec.seed = 9;
    auto chains = generate_successor_chain(spec);
    Store st = Store::build(chains.triples);
    auto groups = generate_pairs(st.view(), *st.dictionary().find(chains.generic_property));
    std::map<std::size_t, std::size_t> by_size;
    for (const auto& g : groups) by_size[g.members.size()] = g.pairs.size();
    if (by_size != std::map<std::size_t, std::size_t>{{22, 462}, {34, 1122}, {51, 2550}}) o.fail("pair counts differ");
    return o;
  });

  criterion(10, "performance smoke: 1M triples, 100 chain shortest paths, workers 1 and 5 agree", [] {
    Outcome o;
    auto start = Clock::now();
    ChainSpec spec;
    spec.members_per_group = {51, 34, 22};
    spec.seed = 10;
    spec.noise_triples = 1'000'000 - (3 * 107 - 3);
    auto chains = generate_successor_chain(spec);
    if (chains.triples.size() != 1'000'000) o.fail("generated " + str(chains.triples.size()) + " triples");

    auto dir = std::filesystem::temp_directory_path() / "ldm3n_acceptance_1m";
    std::filesystem::remove_all(dir);
    StoreConfig cfg;
    cfg.path = dir;
    LoadReport report;
    Store::load(cfg, chains.triples, &report);
    chains.triples = {};
    Store st = Store::open(dir);
    auto load_secs = std::chrono::duration<double>(Clock::now() - start).count();

    std::mt19937_64 rng(10);
    std::vector<QueryPair> pairs;
    std::vector<std::uint64_t> expected;
    while (pairs.size() < 100) {
      const auto& g = chains.members[rng() % chains.members.size()];
      std::size_t i = rng() % g.size(), j = rng() % g.size();
      if (i == j) continue;
      pairs.emplace_back(*st.dictionary().find(g[i]), *st.dictionary().find(g[j]));
      expected.push_back(i < j ? 3 * (j - i) : 0);
    }
    std::string out[2];
    std::size_t idx = 0;
    double query_secs = 0;
    for (std::size_t workers : {1, 5}) {
      auto batch = run_batch(st.view(), pairs, Model::Ldm3n, BatchMode::ShortestPath, workers);
      query_secs += std::chrono::duration<double>(batch.wall_time).count();
      std::ostringstream text;
      for (std::size_t k = 0; k < batch.records.size(); ++k) {
        const auto& r = batch.records[k];
        text << format_record(st.dictionary(), r, Model::Ldm3n, false) << '\n';
        bool want = expected[k] > 0;
        if ((r.status == QueryStatus::Found) != want || (want && r.distance != expected[k]))
          o.fail("query " + str(k) + " distance " + str(r.distance) + ", expected " + str(expected[k]));
      }
      out[idx++] = text.str();
    }
    if (out[0] != out[1]) o.fail("workers=1 and workers=5 outputs differ");
    std::filesystem::remove_all(dir);
    auto total = std::chrono::duration<double>(Clock::now() - start).count();
    if (total > 300) o.fail("took over 5 minutes");
    char buf[128];
    std::snprintf(buf, sizeof buf, "%zu triples, load %.1fs, queries %.1fs", report.distinct_triples, load_secs,
                  query_secs);
    if (o.ok) o.detail = buf;
    return o;
  });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
