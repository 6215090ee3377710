#include "ldm3n/dictionary.hpp"

#include <limits>

#include "ldm3n/errors.hpp"

namespace ldm3n {

std::string to_string(IndexKind kind) { return kind == IndexKind::Hash ? "hash" : "ordered"; }

IndexKind parse_index_kind(const std::string& name) {
  if (name == "hash") return IndexKind::Hash;
  if (name == "ordered" || name == "btree") return IndexKind::Ordered;
  throw Error("unknown index kind '" + name + "' (expected hash or ordered)");
}

Dictionary::Dictionary(IndexKind kind) : forward_(kind) {}

TermId Dictionary::encode(const Term& t) {
  std::string key = t.to_ntriples();
  if (const TermId* hit = forward_.find(key)) return *hit;

  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  TermId id;
  if (t.is_literal()) {
    if (literals_.size() >= kMax / 2) throw CapacityExhausted("odd id space exhausted");
    id = next_odd();
    literals_.push_back(t);
  } else {
    if (resources_.size() >= kMax / 2 - 1) throw CapacityExhausted("even id space exhausted");
    id = next_even();
    resources_.push_back(t);
  }
  forward_.try_emplace(key, id);
  return id;
}

std::optional<TermId> Dictionary::find(const Term& t) const {
  if (const TermId* hit = forward_.find(t.to_ntriples())) return *hit;
  return std::nullopt;
}

bool Dictionary::contains(TermId id) const noexcept {
  if (id.is_null()) return false;
  if (id.is_literal()) return (id.value - 1) / 2 < literals_.size();
  return id.value / 2 - 1 < resources_.size();
}

const Term& Dictionary::decode(TermId id) const {
  if (!contains(id)) throw UnknownId("unknown term id " + std::to_string(id.value));
  return id.is_literal() ? literals_[(id.value - 1) / 2] : resources_[id.value / 2 - 1];
}

std::vector<TermId> Dictionary::ids() const {
  std::vector<TermId> out;
  out.reserve(size());
  std::size_t total = size();
  for (std::uint64_t v = 1; out.size() < total; ++v) {
    TermId id{v};
    if (contains(id)) out.push_back(id);
  }
  return out;
}

Dictionary Dictionary::from_reverse(IndexKind kind, std::vector<Term> resources, std::vector<Term> literals) {
  Dictionary d(kind);
  d.forward_.reserve(resources.size() + literals.size());
  d.resources_ = std::move(resources);
  d.literals_ = std::move(literals);
  for (std::size_t i = 0; i < d.resources_.size(); ++i) {
    if (d.resources_[i].is_literal()) throw Error("literal in even id class");
    d.forward_.try_emplace(d.resources_[i].to_ntriples(), TermId{2 * (i + 1)});
  }
  for (std::size_t i = 0; i < d.literals_.size(); ++i) {
    if (!d.literals_[i].is_literal()) throw Error("non-literal in odd id class");
    d.forward_.try_emplace(d.literals_[i].to_ntriples(), TermId{2 * i + 1});
  }
  if (d.forward_.size() != d.size()) throw Error("duplicate terms in dictionary");
  return d;
}

}  // namespace ldm3n
