// ldm3n: load, query, reason over, and benchmark an LDM-3N triple store.
//
// Exit codes: 0 success, 1 query-level failure, 2 usage error, 3 corrupt store.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ldm3n/errors.hpp"
#include "ldm3n/graph_model.hpp"
#include "ldm3n/harness.hpp"
#include "ldm3n/ntriples.hpp"
#include "ldm3n/semantics.hpp"
#include "ldm3n/storage.hpp"
#include "ldm3n/traversal.hpp"

namespace {

using namespace ldm3n;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCorrupt = 3;

struct Options {
  std::string store;
  std::string input = "-";
  std::string index_kind = "hash";
  std::uint64_t cache_size = 64ULL << 20;
  bool lenient = false;

  std::string model = "ldm3n";
  std::string source;
  std::string target;
  std::string view = "base";
  std::optional<std::uint64_t> max_dist;
  bool timing = false;
  bool triple_path = false;

  std::string rules = "rdfs5,rdfs7,rdfs9,domain,range";
  bool strict_singletons = false;
  bool materialize = false;
  std::string singleton_property_of;
  std::size_t max_derived = 50'000'000;

  std::string mode = "reach";
  std::size_t workers = 1;
  std::string pairs_file;
  std::string generic_property;
  std::string out;

  std::vector<std::size_t> members;
  std::size_t noise = 0;
  std::uint64_t seed = 1;
  std::string pairs_out;
};

Term cli_term(const std::string& token) {
  if (!token.empty() && (token[0] == '<' || token[0] == '"' || token.rfind("_:", 0) == 0)) return parse_term(token);
  return Term::iri(token);
}

TermId lookup(const Dictionary& dict, const std::string& token) {
  Term t = cli_term(token);
  auto id = dict.find(t);
  if (!id) throw UnknownNode("unknown node " + t.to_ntriples());
  return *id;
}

Vocabulary vocabulary(const Options& o) {
  Vocabulary v;
  if (!o.singleton_property_of.empty()) v.singleton_property_of = cli_term(o.singleton_property_of).value();
  return v;
}

QueryOptions query_options(const Options& o) {
  QueryOptions q;
  if (o.max_dist) q.max_distance = *o.max_dist;
  return q;
}

/// Output file or stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw IoFailure("cannot open " + path + " for writing");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

int cmd_load(const Options& o) {
  StoreConfig config;
  config.path = o.store;
  config.index_kind = parse_index_kind(o.index_kind);
  config.cache_size_bytes = o.cache_size;
  ParseMode mode = o.lenient ? ParseMode::Lenient : ParseMode::Strict;
  LoadReport report;
  if (o.input == "-") {
    Store::load(config, std::cin, mode, &report);
  } else {
    std::ifstream in(o.input);
    if (!in) throw IoFailure("cannot open input " + o.input);
    Store::load(config, in, mode, &report);
  }
  std::cout << "triples_read,distinct_triples,duplicates,distinct_terms,literal_terms,lines_skipped\n"
            << report.triples_read << ',' << report.distinct_triples << ',' << report.duplicates << ','
            << report.distinct_terms << ',' << report.literal_terms << ',' << report.lines_skipped << '\n';
  if (report.lines_skipped > 0) std::cerr << "warning: skipped " << report.lines_skipped << " malformed lines\n";
  return kExitOk;
}

int cmd_query(const Options& o, BatchMode mode) {
  Store store = Store::open(o.store);
  GraphView view = store.view(parse_view_kind(o.view));
  const Dictionary& dict = store.dictionary();
  Model model = parse_model(o.model);
  TermId source = lookup(dict, o.source);
  TermId target = lookup(dict, o.target);

  QueryRecord rec;
  rec.source = source;
  rec.target = target;
  std::vector<EncodedTriple> triples;
  if (mode == BatchMode::Reach) {
    ReachResult r = reachable(view, source, target, model, query_options(o));
    rec.status = r.reachable ? QueryStatus::Found : QueryStatus::Unreachable;
    rec.distance = r.distance;
    rec.nodes_explored = r.nodes_explored;
    rec.elapsed = r.elapsed;
  } else {
    PathQueryResult r = shortest_path(view, source, target, model, query_options(o));
    rec.status = r.found() ? QueryStatus::Found : QueryStatus::Unreachable;
    rec.distance = r.distance;
    rec.nodes_explored = r.nodes_explored;
    rec.elapsed = r.elapsed;
    rec.path = r.resource_path.nodes;
    triples = r.triple_path.triples;
  }
  std::cout << kRecordHeader << '\n' << format_record(dict, rec, model, o.timing) << '\n';
  if (o.triple_path) {
    for (const auto& t : triples) std::cout << "# triple: " << to_ntriples_line(store.decode(t)) << '\n';
  }
  return kExitOk;
}

void print_issues(std::ostream& out, const Dictionary& dict, const std::vector<SingletonIssue>& issues) {
  for (const auto& i : issues) {
    out << "singleton_uniqueness," << csv_field(dict.decode(i.property).to_ntriples()) << ',' << i.occurrences << ','
        << (i.severity == IssueSeverity::Violation ? "violation" : "warning") << '\n';
  }
}

std::size_t count_violations(const std::vector<SingletonIssue>& issues) {
  std::size_t n = 0;
  for (const auto& i : issues) n += i.severity == IssueSeverity::Violation ? 1 : 0;
  return n;
}

int cmd_entail(const Options& o) {
  Store store = Store::open(o.store);
  Vocabulary vocab = vocabulary(o);
  EntailOptions opts;
  opts.rules = parse_rules(o.rules);
  opts.max_derived = o.max_derived;
  EntailReport report = entail_fixpoint(store, opts, vocab);

  for (const auto& t : store.delta().triples()) std::cout << to_ntriples_line(store.decode(t)) << '\n';

  GraphView all = store.view(ViewKind::Union);
  auto issues = validate_singleton_uniqueness(all, classify_singleton_properties(all, vocab), o.strict_singletons);
  std::size_t violations = count_violations(issues);
  std::cout << "# summary: base=" << report.base_triples << " derived=" << report.derived
            << " rounds=" << report.rounds << " singleton_violations=" << violations << '\n';
  if (violations > 0) print_issues(std::cerr, store.dictionary(), issues);
  if (o.materialize) store.save_delta();
  return kExitOk;
}

int cmd_validate(const Options& o) {
  Store store = Store::open(o.store);
  GraphView view = store.view(parse_view_kind(o.view));
  Vocabulary vocab = vocabulary(o);
  const Dictionary& dict = store.dictionary();
  auto issues = validate_singleton_uniqueness(view, classify_singleton_properties(view, vocab), o.strict_singletons);
  std::cout << "check,term,count,severity\n";
  print_issues(std::cout, dict, issues);
  XmlLiteralReport xml = flag_xml_literals(view, vocab);
  for (TermId id : xml.ill_typed) std::cout << "xml_literal," << csv_field(dict.decode(id).to_ntriples()) << ",1,ill_typed\n";
  return kExitOk;
}

int cmd_bench(const Options& o) {
  Store store = Store::open(o.store);
  GraphView view = store.view(parse_view_kind(o.view));
  const Dictionary& dict = store.dictionary();
  std::vector<QueryPair> pairs;
  if (!o.pairs_file.empty()) {
    std::ifstream in(o.pairs_file);
    if (!in) throw IoFailure("cannot open pair file " + o.pairs_file);
    pairs = read_pairs_csv(in, dict);
  } else if (!o.generic_property.empty()) {
    TermId generic = lookup(dict, o.generic_property);
    for (const auto& g : generate_pairs(view, generic, vocabulary(o))) pairs.insert(pairs.end(), g.pairs.begin(), g.pairs.end());
  } else {
    throw CLI::ValidationError("bench", "one of --pairs or --generic-property is required");
  }
  BatchReport report =
      run_batch(view, pairs, parse_model(o.model), parse_batch_mode(o.mode), o.workers, query_options(o));
  Output out(o.out);
  write_report_csv(out.stream(), dict, report, true);
  return kExitOk;
}

int cmd_stats(const Options& o) {
  Store store = Store::open(o.store);
  GraphView view = store.view(parse_view_kind(o.view));
  auto triples = view.triples();
  std::vector<TermId> nodes;
  nodes.reserve(3 * triples.size());
  for (const auto& t : triples) {
    nodes.push_back(t.s);
    nodes.push_back(t.p);
    nodes.push_back(t.o);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  auto literals = std::count_if(nodes.begin(), nodes.end(), [](TermId id) { return id.is_literal(); });
  auto singletons = classify_singleton_properties(view, Vocabulary{}).size();
  std::cout << "triples,nodes,edges,literals,singletons\n"
            << triples.size() << ',' << nodes.size() << ',' << 2 * triples.size() << ',' << literals << ','
            << singletons << '\n';
  return kExitOk;
}

int cmd_generate(const Options& o) {
  ChainSpec spec;
  spec.members_per_group = o.members;
  spec.noise_triples = o.noise;
  spec.seed = o.seed;
  if (!o.singleton_property_of.empty()) spec.singleton_property_of = cli_term(o.singleton_property_of).value();
  GeneratedChains chains = generate_successor_chain(spec);
  Output out(o.out);
  serialize_ntriples(chains.triples, out.stream());
  if (!o.pairs_out.empty()) {
    Output pairs(o.pairs_out);
    pairs.stream() << "source_iri,target_iri\n";
    for (const auto& group : chains.members) {
      for (const auto& a : group) {
        for (const auto& b : group) {
          if (!(a == b)) pairs.stream() << a.to_ntriples() << ',' << b.to_ntriples() << '\n';
        }
      }
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LDM-3N triple store: load, path queries, RDFS entailment, benchmarks"};
  app.require_subcommand(1);
  Options o;

  auto add_store = [&](CLI::App* sub) { sub->add_option("--store", o.store, "Store directory")->required(); };
  auto add_view = [&](CLI::App* sub) {
    sub->add_option("--view", o.view, "Triples to query: base, delta or union")
        ->check(CLI::IsMember({"base", "delta", "union"}));
  };
  auto add_spo = [&](CLI::App* sub) {
    sub->add_option("--singleton-property-of", o.singleton_property_of,
                    "IRI linking singleton properties to their generic property");
  };

  auto* load = app.add_subcommand("load", "Load N-Triples into a new store");
  add_store(load);
  load->add_option("--input", o.input, "N-Triples file ('-' for stdin)");
  load->add_option("--index-kind", o.index_kind, "hash or ordered")->check(CLI::IsMember({"hash", "ordered"}));
  load->add_option("--cache-size", o.cache_size, "I/O cache size in bytes")->check(CLI::PositiveNumber);
  load->add_flag("--lenient", o.lenient, "Skip malformed lines instead of aborting");

  auto add_query = [&](CLI::App* sub) {
    add_store(sub);
    add_view(sub);
    sub->add_option("--model", o.model, "ldm3n or nlan")->check(CLI::IsMember({"ldm3n", "nlan"}));
    sub->add_option("--source", o.source, "Source term (N-Triples token)")->required();
    sub->add_option("--target", o.target, "Target term (N-Triples token)")->required();
    sub->add_option("--max-dist", o.max_dist, "Do not explore beyond this distance");
    sub->add_flag("--timing", o.timing, "Fill the elapsed_ms column");
  };
  auto* spath = app.add_subcommand("spath", "Shortest resource path between two terms");
  add_query(spath);
  spath->add_flag("--triple-path", o.triple_path, "Also print the triple path as '# triple:' lines");
  auto* reach = app.add_subcommand("reach", "Reachability between two terms");
  add_query(reach);

  auto* entail = app.add_subcommand("entail", "Forward-chain RDFS rules to a fixpoint");
  add_store(entail);
  add_spo(entail);
  entail->add_option("--rules", o.rules, "Comma separated: rdfs5,rdfs7,rdfs9,domain,range");
  entail->add_flag("--strict-singletons", o.strict_singletons, "Treat unused singleton properties as violations");
  entail->add_flag("--materialize", o.materialize, "Persist derived triples as the store's delta index");
  entail->add_option("--max-derived", o.max_derived, "Abort past this many derived triples");

  auto* validate = app.add_subcommand("validate", "Check singleton uniqueness and XML literals");
  add_store(validate);
  add_view(validate);
  add_spo(validate);
  validate->add_flag("--strict-singletons", o.strict_singletons, "Treat unused singleton properties as violations");

  auto* bench = app.add_subcommand("bench", "Run a batch of reachability or shortest-path queries");
  add_store(bench);
  add_view(bench);
  add_spo(bench);
  bench->add_option("--mode", o.mode, "reach or spath")->check(CLI::IsMember({"reach", "spath"}));
  bench->add_option("--model", o.model, "ldm3n or nlan")->check(CLI::IsMember({"ldm3n", "nlan"}));
  bench->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
  auto* pairs_opt = bench->add_option("--pairs", o.pairs_file, "CSV of source_iri,target_iri");
  bench->add_option("--generic-property", o.generic_property, "Generate pairs by grouping on this property")
      ->excludes(pairs_opt);
  bench->add_option("--out", o.out, "Report file (default stdout)");
  bench->add_option("--max-dist", o.max_dist, "Do not explore beyond this distance");

  auto* stats = app.add_subcommand("stats", "Triple, node, edge, literal and singleton counts");
  add_store(stats);
  add_view(stats);

  auto* generate = app.add_subcommand("generate", "Write synthetic successor chains as N-Triples");
  generate->add_option("--members", o.members, "Members per group, e.g. 22,34,51")->delimiter(',')->required();
  generate->add_option("--noise", o.noise, "Extra random triples");
  generate->add_option("--seed", o.seed, "Random seed")->required();
  generate->add_option("--out", o.out, "Output file (default stdout)");
  generate->add_option("--pairs-out", o.pairs_out, "Also write all ordered member pairs as CSV");
  add_spo(generate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*load) return cmd_load(o);
    if (*spath) return cmd_query(o, BatchMode::ShortestPath);
    if (*reach) return cmd_query(o, BatchMode::Reach);
    if (*entail) return cmd_entail(o);
    if (*validate) return cmd_validate(o);
    if (*bench) return cmd_bench(o);
    if (*stats) return cmd_stats(o);
    if (*generate) return cmd_generate(o);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const StoreCorrupt& e) {
    std::cerr << "corrupt store: " << e.what() << '\n';
    return kExitCorrupt;
  } catch (const UnknownNode& e) {
    std::cerr << "UnknownNode: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
