#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ldm3n/semantics.hpp"
#include "ldm3n/storage.hpp"
#include "ldm3n/traversal.hpp"

namespace ldm3n {

using QueryPair = std::pair<TermId, TermId>;

/// Subjects sharing one object through singleton properties of a generic
/// property, with every ordered pair of distinct members.
struct PairGroup {
  TermId group_key;
  std::vector<TermId> members;  // ascending
  std::vector<QueryPair> pairs;
};

/// Groups subjects s of (s, sp, O) where (sp, singletonPropertyOf, generic)
/// by O. Groups with fewer than two members are dropped. Throws
/// UnknownProperty if `generic_property` is not in the store.
std::vector<PairGroup> generate_pairs(const GraphView& graph, TermId generic_property, const Vocabulary& vocab = {});

/// Builds the ordered pairs for one group of members.
PairGroup make_pair_group(TermId key, std::vector<TermId> members);

/// Synthetic successor chains: per group, members m_1..m_k holding one
/// position through fresh singleton properties, linked m_i -> m_{i+1} by
/// hasSuccessor on the singleton property.
struct ChainSpec {
  std::vector<std::size_t> members_per_group;
  /// Random triples over a disjoint vocabulary; some hang off position nodes
  /// so traversals from members have work to do.
  std::size_t noise_triples = 0;
  std::uint64_t seed = 0;
  std::string base_iri = "http://example.org/";
  std::string singleton_property_of = Vocabulary{}.singleton_property_of;

  std::size_t group_count() const noexcept { return members_per_group.size(); }
};

struct GeneratedChains {
  std::vector<Triple> triples;
  /// members[g][i] is m_{i+1} of group g.
  std::vector<std::vector<Term>> members;
  std::vector<Term> positions;
  Term generic_property;
  Term successor_property;
};

/// Deterministic for a fixed spec. Chain triples come first, then noise.
GeneratedChains generate_successor_chain(const ChainSpec& spec);

enum class BatchMode { Reach, ShortestPath };

std::string to_string(BatchMode m);
BatchMode parse_batch_mode(const std::string& name);

enum class QueryStatus { Found, Unreachable, Failed };

struct QueryRecord {
  TermId source;
  TermId target;
  QueryStatus status = QueryStatus::Unreachable;
  std::uint64_t distance = 0;
  std::uint64_t nodes_explored = 0;
  std::chrono::nanoseconds elapsed{0};
  std::vector<TermId> path;  // shortest-path mode only
  std::string error;
};

struct DistanceAggregate {
  std::size_t count = 0;
  std::chrono::nanoseconds total{0};
  double mean_ms() const noexcept;
};

struct BatchReport {
  Model model = Model::Ldm3n;
  BatchMode mode = BatchMode::Reach;
  std::size_t workers = 1;
  std::vector<QueryRecord> records;  // input order
  std::map<std::uint64_t, DistanceAggregate> per_distance;
  std::size_t reachable = 0;
  std::size_t failed = 0;
  std::chrono::nanoseconds wall_time{0};
  std::chrono::nanoseconds query_time{0};  // sum over records

  double average_ms() const noexcept;
};

/// Recomputes per-distance aggregates and totals from `report.records`.
void aggregate(BatchReport& report);

/// Runs every pair on a fixed pool of `workers` threads sharing `graph`.
/// Per-query errors become Failed records.
BatchReport run_batch(const GraphView& graph, std::span<const QueryPair> pairs, Model model, BatchMode mode,
                      std::size_t workers, const QueryOptions& opts = {});

/// CSV field quoting (RFC 4180).
std::string csv_field(const std::string& s);

inline constexpr const char* kRecordHeader = "source,target,model,status,distance,nodes_explored,elapsed_ms,path";

/// One result line; the path column is space-separated N-Triples tokens.
/// `with_timing` false prints '-' for elapsed_ms so output
/// is reproducible.
std::string format_record(const Dictionary& dict, const QueryRecord& r, Model model, bool with_timing);

/// Records, per-distance comment lines, and the `# summary:` trailer.
void write_report_csv(std::ostream& out, const Dictionary& dict, const BatchReport& report, bool with_timing = true);

/// Reads `source_iri,target_iri` lines. Bare IRIs and N-Triples tokens are
/// accepted; '#' lines and a leading header are skipped. Unknown terms throw
/// UnknownNode.
std::vector<QueryPair> read_pairs_csv(std::istream& in, const Dictionary& dict);

}  // namespace ldm3n
