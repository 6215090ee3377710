#include "ldm3n/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <thread>
#include <unordered_set>

#include "ldm3n/errors.hpp"
#include "ldm3n/ntriples.hpp"

namespace ldm3n {

PairGroup make_pair_group(TermId key, std::vector<TermId> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  PairGroup g{key, std::move(members), {}};
  g.pairs.reserve(g.members.size() * (g.members.size() - (g.members.empty() ? 0 : 1)));
  for (TermId a : g.members) {
    for (TermId b : g.members) {
      if (a != b) g.pairs.emplace_back(a, b);
    }
  }
  return g;
}

std::vector<PairGroup> generate_pairs(const GraphView& graph, TermId generic_property, const Vocabulary& vocab) {
  if (!graph.has_node(generic_property))
    throw UnknownProperty("unknown generic property id " + std::to_string(generic_property.value));
  std::vector<PairGroup> groups;
  auto spo_of = graph.dictionary().find(Term::iri(vocab.singleton_property_of));
  if (!spo_of) return groups;

  const auto triples = graph.triples();
  std::unordered_set<TermId, TermIdHash> singletons;
  for (const auto& t : triples) {
    if (t.p == *spo_of && t.o == generic_property) singletons.insert(t.s);
  }
  std::map<TermId, std::set<TermId>> by_object;
  for (const auto& t : triples) {
    if (singletons.count(t.p) != 0) by_object[t.o].insert(t.s);
  }
  for (auto& [object, members] : by_object) {
    if (members.size() < 2) continue;
    groups.push_back(make_pair_group(object, std::vector<TermId>(members.begin(), members.end())));
  }
  return groups;
}

GeneratedChains generate_successor_chain(const ChainSpec& spec) {
  GeneratedChains out;
  const std::string& base = spec.base_iri;
  out.generic_property = Term::iri(base + "holdsPoliticalPosition");
  out.successor_property = Term::iri(base + "hasSuccessor");
  const Term spo_of = Term::iri(spec.singleton_property_of);

  for (std::size_t g = 0; g < spec.group_count(); ++g) {
    const std::size_t k = spec.members_per_group[g];
    const std::string prefix = base + "g" + std::to_string(g) + "/";
    Term position = Term::iri(prefix + "position");
    std::vector<Term> members;
    members.reserve(k);
    for (std::size_t i = 0; i < k; ++i) members.push_back(Term::iri(prefix + "politician" + std::to_string(i + 1)));
    for (std::size_t i = 0; i < k; ++i) {
      Term sp = Term::iri(base + "holdsPoliticalPosition#" + std::to_string(g) + "_" + std::to_string(i + 1));
      out.triples.emplace_back(members[i], sp, position);
      out.triples.emplace_back(sp, spo_of, out.generic_property);
      if (i + 1 < k) out.triples.emplace_back(sp, out.successor_property, members[i + 1]);
    }
    out.members.push_back(std::move(members));
    out.positions.push_back(std::move(position));
  }

  if (spec.noise_triples == 0) return out;

  // Noise lives on its own vocabulary. Subjects are noise nodes or, rarely,
  // position nodes; nothing in the noise points back at a chain member, so
  // chain distances are unaffected.
  std::mt19937_64 rng(spec.seed);
  const std::uint64_t node_pool = std::max<std::uint64_t>(8, spec.noise_triples / 3);
  constexpr std::uint64_t kSharedPredicates = 32;
  const std::uint64_t positions = spec.group_count();

  enum : std::uint8_t { kNode, kPosition, kSharedPred, kLiteral };
  using Code = std::pair<std::uint8_t, std::uint64_t>;
  auto term_of = [&](Code c) {
    switch (c.first) {
      case kPosition: return out.positions[c.second];
      case kSharedPred: return Term::iri(base + "noise/p" + std::to_string(c.second));
      case kLiteral: return Term::literal("v" + std::to_string(c.second));
      default: return Term::iri(base + "noise/n" + std::to_string(c.second));
    }
  };

  auto pack = [](Code c) { return (static_cast<std::uint64_t>(c.first) << 60) | c.second; };
  std::unordered_set<EncodedTriple, EncodedTripleHash> seen;
  seen.reserve(spec.noise_triples);
  out.triples.reserve(out.triples.size() + spec.noise_triples);
  while (seen.size() < spec.noise_triples) {
    Code s = (positions > 0 && rng() % 50 == 0) ? Code{kPosition, rng() % positions} : Code{kNode, rng() % node_pool};
    Code p = (rng() % 2 == 0) ? Code{kSharedPred, rng() % kSharedPredicates} : Code{kNode, rng() % node_pool};
    Code o = (rng() % 100 < 85) ? Code{kNode, rng() % node_pool} : Code{kLiteral, rng() % node_pool};
    if (!seen.insert(EncodedTriple{TermId{pack(s)}, TermId{pack(p)}, TermId{pack(o)}}).second) continue;
    out.triples.emplace_back(term_of(s), term_of(p), term_of(o));
  }
  return out;
}

std::string to_string(BatchMode m) { return m == BatchMode::Reach ? "reach" : "spath"; }

BatchMode parse_batch_mode(const std::string& name) {
  if (name == "reach") return BatchMode::Reach;
  if (name == "spath") return BatchMode::ShortestPath;
  throw Error("unknown mode '" + name + "' (expected reach or spath)");
}

namespace {

double to_ms(std::chrono::nanoseconds ns) { return static_cast<double>(ns.count()) / 1e6; }

std::string format_ms(double ms) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", ms);
  return buf;
}

const char* status_name(QueryStatus s) {
  switch (s) {
    case QueryStatus::Found: return "found";
    case QueryStatus::Unreachable: return "unreachable";
    case QueryStatus::Failed: return "error";
  }
  return "error";
}

QueryRecord run_one(const GraphView& graph, QueryPair pair, Model model, BatchMode mode, const QueryOptions& opts) {
  QueryRecord rec;
  rec.source = pair.first;
  rec.target = pair.second;
  try {
    if (mode == BatchMode::Reach) {
      ReachResult r = reachable(graph, pair.first, pair.second, model, opts);
      rec.status = r.reachable ? QueryStatus::Found : QueryStatus::Unreachable;
      rec.distance = r.distance;
      rec.nodes_explored = r.nodes_explored;
      rec.elapsed = r.elapsed;
    } else {
      PathQueryResult r = shortest_path(graph, pair.first, pair.second, model, opts);
      rec.status = r.found() ? QueryStatus::Found : QueryStatus::Unreachable;
      rec.distance = r.distance;
      rec.nodes_explored = r.nodes_explored;
      rec.elapsed = r.elapsed;
      rec.path = std::move(r.resource_path.nodes);
    }
  } catch (const std::exception& e) {
    rec.status = QueryStatus::Failed;
    rec.error = e.what();
  }
  return rec;
}

}  // namespace

double DistanceAggregate::mean_ms() const noexcept { return count == 0 ? 0.0 : to_ms(total) / static_cast<double>(count); }

double BatchReport::average_ms() const noexcept {
  return records.empty() ? 0.0 : to_ms(query_time) / static_cast<double>(records.size());
}

void aggregate(BatchReport& report) {
  report.per_distance.clear();
  report.reachable = 0;
  report.failed = 0;
  report.query_time = std::chrono::nanoseconds{0};
  for (const auto& r : report.records) {
    report.query_time += r.elapsed;
    if (r.status == QueryStatus::Failed) ++report.failed;
    if (r.status != QueryStatus::Found) continue;
    ++report.reachable;
    auto& agg = report.per_distance[r.distance];
    ++agg.count;
    agg.total += r.elapsed;
  }
}

BatchReport run_batch(const GraphView& graph, std::span<const QueryPair> pairs, Model model, BatchMode mode,
                      std::size_t workers, const QueryOptions& opts) {
  if (workers == 0) throw Error("worker count must be at least 1");
  BatchReport report;
  report.model = model;
  report.mode = mode;
  report.workers = workers;
  report.records.resize(pairs.size());

  auto start = std::chrono::steady_clock::now();
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < pairs.size(); i = next.fetch_add(1)) {
      report.records[i] = run_one(graph, pairs[i], model, mode, opts);
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  report.wall_time = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start);
  aggregate(report);
  return report;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_record(const Dictionary& dict, const QueryRecord& r, Model model, bool with_timing) {
  auto token = [&](TermId id) { return dict.contains(id) ? dict.decode(id).to_ntriples() : std::to_string(id.value); };
  std::string path;
  for (std::size_t i = 0; i < r.path.size(); ++i) {
    if (i > 0) path += ' ';
    path += token(r.path[i]);
  }
  std::string line;
  line += csv_field(token(r.source)) + ',';
  line += csv_field(token(r.target)) + ',';
  line += to_string(model) + ',';
  line += std::string(status_name(r.status)) + ',';
  line += (r.status == QueryStatus::Found ? std::to_string(r.distance) : std::string()) + ',';
  line += std::to_string(r.nodes_explored) + ',';
  line += (with_timing ? format_ms(to_ms(r.elapsed)) : std::string("-")) + ',';
  line += csv_field(r.status == QueryStatus::Failed ? r.error : path);
  return line;
}

void write_report_csv(std::ostream& out, const Dictionary& dict, const BatchReport& report, bool with_timing) {
  out << kRecordHeader << '\n';
  for (const auto& r : report.records) out << format_record(dict, r, report.model, with_timing) << '\n';
  for (const auto& [d, agg] : report.per_distance) {
    out << "# distance=" << d << " count=" << agg.count
        << " mean_ms=" << (with_timing ? format_ms(agg.mean_ms()) : std::string("-")) << '\n';
  }
  out << "# summary: pairs=" << report.records.size() << " reachable=" << report.reachable
      << " failed=" << report.failed << " model=" << to_string(report.model) << " mode=" << to_string(report.mode)
      << " workers=" << report.workers;
  if (with_timing) {
    out << " wall_ms=" << format_ms(to_ms(report.wall_time)) << " total_ms=" << format_ms(to_ms(report.query_time))
        << " avg_ms=" << format_ms(report.average_ms());
  }
  out << '\n';
}

namespace {

/// Splits at the first comma outside <...> and "..." tokens.
std::pair<std::string, std::string> split_pair_line(const std::string& line) {
  bool in_iri = false;
  bool in_lit = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (in_lit) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_lit = false;
      }
      continue;
    }
    if (in_iri) {
      if (c == '>') in_iri = false;
      continue;
    }
    if (c == '<') in_iri = true;
    if (c == '"') in_lit = true;
    if (c == ',') return {line.substr(0, i), line.substr(i + 1)};
  }
  throw Error("pair line has no comma: " + line);
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

Term pair_term(const std::string& token) {
  if (token.empty()) throw Error("empty term in pair file");
  if (token[0] == '<' || token[0] == '"' || token.starts_with("_:")) return parse_term(token);
  return Term::iri(token);
}

}  // namespace

std::vector<QueryPair> read_pairs_csv(std::istream& in, const Dictionary& dict) {
  std::vector<QueryPair> pairs;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto [a, b] = split_pair_line(t);
    a = trim(a);
    b = trim(b);
    if (first && (a == "source_iri" || a == "source")) {
      first = false;
      continue;
    }
    first = false;
    Term sa = pair_term(a);
    Term sb = pair_term(b);
    auto ia = dict.find(sa);
    auto ib = dict.find(sb);
    if (!ia) throw UnknownNode("unknown node " + sa.to_ntriples());
    if (!ib) throw UnknownNode("unknown node " + sb.to_ntriples());
    pairs.emplace_back(*ia, *ib);
  }
  return pairs;
}

}  // namespace ldm3n
