#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "ldm3n/term.hpp"

namespace ldm3n {

/// 8-byte node identifier. Odd values are literals (sinks), even values
/// everything else; 0 is the "no node" sentinel and is never issued.
struct TermId {
  std::uint64_t value = 0;

  constexpr TermId() = default;
  constexpr explicit TermId(std::uint64_t v) : value(v) {}

  constexpr bool is_null() const noexcept { return value == 0; }
  constexpr bool is_literal() const noexcept { return (value & 1U) != 0; }

  friend constexpr bool operator==(TermId, TermId) = default;
  friend constexpr auto operator<=>(TermId, TermId) = default;
};

inline constexpr TermId kNoNode{};

constexpr bool is_literal_id(TermId id) noexcept { return id.is_literal(); }

struct TermIdHash {
  std::size_t operator()(TermId id) const noexcept {
    // splitmix64 finalizer; ids are dense so the identity hash clusters badly
    std::uint64_t z = id.value + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return static_cast<std::size_t>(z ^ (z >> 31));
  }
};

/// Which key-value structure backs an index: hash table or ordered tree.
enum class IndexKind : std::uint8_t { Hash = 0, Ordered = 1 };

std::string to_string(IndexKind kind);
IndexKind parse_index_kind(const std::string& name);

/// Map with a load-time choice between hash and ordered storage.
template <class Key, class Value, class Hash = std::hash<Key>>
class KeyedIndex {
 public:
  explicit KeyedIndex(IndexKind kind = IndexKind::Hash) {
    if (kind == IndexKind::Ordered) map_.template emplace<1>();
  }

  IndexKind kind() const noexcept { return map_.index() == 0 ? IndexKind::Hash : IndexKind::Ordered; }

  const Value* find(const Key& k) const {
    return std::visit(
        [&](const auto& m) -> const Value* {
          auto it = m.find(k);
          return it == m.end() ? nullptr : &it->second;
        },
        map_);
  }

  /// Inserts if absent; returns the stored value and whether it was inserted.
  std::pair<const Value*, bool> try_emplace(const Key& k, Value v) {
    return std::visit(
        [&](auto& m) -> std::pair<const Value*, bool> {
          auto [it, inserted] = m.try_emplace(k, std::move(v));
          return {&it->second, inserted};
        },
        map_);
  }

  std::size_t size() const {
    return std::visit([](const auto& m) { return m.size(); }, map_);
  }

  void reserve(std::size_t n) {
    if (auto* h = std::get_if<0>(&map_)) h->reserve(n);
  }

  template <class F>
  void for_each(F&& f) const {
    std::visit(
        [&](const auto& m) {
          for (const auto& [k, v] : m) f(k, v);
        },
        map_);
  }

 private:
  std::variant<std::unordered_map<Key, Value, Hash>, std::map<Key, Value>> map_;
};

/// Bidirectional term <-> id mapping with parity-classed dense ids.
class Dictionary {
 public:
  explicit Dictionary(IndexKind kind = IndexKind::Hash);

  /// Returns the id of `t`, issuing the next odd (literal) or even id if new.
  TermId encode(const Term& t);
  std::optional<TermId> find(const Term& t) const;
  /// Throws UnknownId for ids never issued (including 0).
  const Term& decode(TermId id) const;
  bool contains(TermId id) const noexcept;

  std::size_t size() const noexcept { return literals_.size() + resources_.size(); }
  std::size_t literal_count() const noexcept { return literals_.size(); }
  IndexKind index_kind() const noexcept { return forward_.kind(); }

  TermId next_even() const noexcept { return TermId{2 * (resources_.size() + 1)}; }
  TermId next_odd() const noexcept { return TermId{2 * literals_.size() + 1}; }

  /// All issued ids in ascending order.
  std::vector<TermId> ids() const;

  /// Forward entries (N-Triples token -> id) in index iteration order.
  template <class F>
  void for_each_forward(F&& f) const {
    forward_.for_each(std::forward<F>(f));
  }

  /// Rebuilds a dictionary from its reverse direction. Terms are given in id
  /// order within each parity class.
  static Dictionary from_reverse(IndexKind kind, std::vector<Term> resources, std::vector<Term> literals);

 private:
  KeyedIndex<std::string, TermId> forward_;
  std::vector<Term> resources_;  // id 2(i+1)
  std::vector<Term> literals_;   // id 2i+1
};

}  // namespace ldm3n

template <>
struct std::hash<ldm3n::TermId> {
  std::size_t operator()(ldm3n::TermId id) const noexcept { return ldm3n::TermIdHash{}(id); }
};
