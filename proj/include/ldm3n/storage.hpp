#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "ldm3n/dictionary.hpp"
#include "ldm3n/ntriples.hpp"
#include "ldm3n/term.hpp"

namespace ldm3n {

/// A triple in id space. Subject and predicate are never literals.
struct EncodedTriple {
  TermId s;
  TermId p;
  TermId o;

  friend bool operator==(const EncodedTriple&, const EncodedTriple&) = default;
  friend auto operator<=>(const EncodedTriple&, const EncodedTriple&) = default;
};

struct EncodedTripleHash {
  std::size_t operator()(const EncodedTriple& t) const noexcept {
    TermIdHash h;
    std::size_t seed = h(t.s);
    seed ^= h(t.p) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
    seed ^= h(t.o) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
    return seed;
  }
};

/// One adjacency value: the (predicate, object) half of a triple.
struct PredObj {
  TermId pred;
  TermId obj;

  friend bool operator==(const PredObj&, const PredObj&) = default;
  friend auto operator<=>(const PredObj&, const PredObj&) = default;
};

/// subject -> {(predicate, object)} index plus the subject -> pair-count index.
///
/// Values under each key are sorted by (predicate, object) and unique.
class AdjacencyIndex {
 public:
  explicit AdjacencyIndex(IndexKind kind = IndexKind::Hash);

  /// Sorts and deduplicates `triples` and builds both indices.
  static AdjacencyIndex build(IndexKind kind, std::vector<EncodedTriple> triples);

  /// Sorted (pred, obj) pairs of `node`; empty for sinks and unknown ids.
  std::span<const PredObj> neighbors(TermId node) const;
  /// Value of the count index; 0 for unknown ids.
  std::uint64_t pair_count(TermId node) const;

  bool contains(const EncodedTriple& t) const;
  std::size_t triple_count() const noexcept { return pairs_.size(); }
  std::size_t key_count() const noexcept { return keys_.size(); }
  bool empty() const noexcept { return pairs_.empty(); }
  IndexKind index_kind() const noexcept { return offsets_.kind(); }

  /// Subject keys in ascending order.
  std::span<const TermId> keys() const noexcept { return keys_; }
  /// All triples, ordered by (s, p, o).
  std::vector<EncodedTriple> triples() const;

  /// Count-index entries in ascending key order.
  std::vector<std::pair<TermId, std::uint64_t>> counts() const;

  void write(std::ostream& out) const;
  void write_counts(std::ostream& out) const;
  /// Reads the adjacency file; `counts` (when given) is cross-checked against it.
  static AdjacencyIndex read(IndexKind kind, std::istream& adj, std::istream* counts);

 private:
  struct Range {
    std::uint64_t offset;
    std::uint64_t length;
  };

  void index_keys();

  std::vector<TermId> keys_;
  std::vector<Range> ranges_;  // parallel to keys_
  std::vector<PredObj> pairs_;
  KeyedIndex<TermId, Range, TermIdHash> offsets_;
  KeyedIndex<TermId, std::uint64_t, TermIdHash> counts_;
};

struct StoreConfig {
  IndexKind index_kind = IndexKind::Hash;
  std::uint64_t cache_size_bytes = 64ULL << 20;
  std::filesystem::path path;
};

struct LoadReport {
  std::size_t triples_read = 0;
  std::size_t distinct_triples = 0;
  std::size_t duplicates = 0;
  std::size_t distinct_terms = 0;
  std::size_t literal_terms = 0;
  std::size_t lines_skipped = 0;
};

enum class ViewKind { Base, Delta, Union };

std::string to_string(ViewKind v);
ViewKind parse_view_kind(const std::string& name);

/// Read-only query surface over a dictionary and one or two adjacency indices.
/// Cheap to copy; the referenced store must outlive it.
class GraphView {
 public:
  GraphView(const Dictionary& dict, const AdjacencyIndex& first, const AdjacencyIndex* second = nullptr)
      : dict_(&dict), first_(&first), second_(second) {}

  const Dictionary& dictionary() const noexcept { return *dict_; }

  /// Appends the sorted (pred, obj) pairs of `node` to `out`.
  void neighbors(TermId node, std::vector<PredObj>& out) const;
  std::vector<PredObj> neighbors(TermId node) const;
  std::uint64_t pair_count(TermId node) const;
  bool contains(const EncodedTriple& t) const;
  bool has_node(TermId id) const noexcept { return dict_->contains(id); }
  std::size_t triple_count() const noexcept;

  /// All triples ordered by (s, p, o).
  std::vector<EncodedTriple> triples() const;

 private:
  const Dictionary* dict_;
  const AdjacencyIndex* first_;
  const AdjacencyIndex* second_;
};

/// A loaded triple store: dictionary, base index, and an optional delta index
/// of derived triples.
class Store {
 public:
  /// Builds an in-memory store; nothing is written to disk.
  static Store build(std::span<const Triple> triples, IndexKind kind = IndexKind::Hash,
                     LoadReport* report = nullptr);

  /// Encodes, deduplicates, and persists `triples` under config.path.
  static Store load(const StoreConfig& config, std::span<const Triple> triples, LoadReport* report = nullptr);
  /// Streaming variant of load() that parses N-Triples from `in`.
  static Store load(const StoreConfig& config, std::istream& in, ParseMode mode, LoadReport* report = nullptr);

  /// Opens a persisted store. Throws IoFailure when files are missing and
  /// StoreCorrupt when they fail validation.
  static Store open(const std::filesystem::path& path);

  const Dictionary& dictionary() const noexcept { return dict_; }
  Dictionary& mutable_dictionary() noexcept { return dict_; }
  const AdjacencyIndex& base() const noexcept { return base_; }
  const AdjacencyIndex& delta() const noexcept { return delta_; }
  const StoreConfig& config() const noexcept { return config_; }

  GraphView view(ViewKind kind = ViewKind::Base) const;

  /// Replaces the delta index with `derived` (triples already in the base are dropped).
  void set_delta(std::vector<EncodedTriple> derived);

  /// Writes dictionary, delta, and meta files back to config.path.
  void save_delta() const;

  EncodedTriple encode(const Triple& t);
  Triple decode(const EncodedTriple& t) const;

 private:
  Store() = default;
  void persist() const;

  StoreConfig config_;
  Dictionary dict_;
  AdjacencyIndex base_;
  AdjacencyIndex delta_;
};

}  // namespace ldm3n
