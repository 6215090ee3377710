#include "ldm3n/semantics.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "ldm3n/errors.hpp"

namespace ldm3n {

namespace {

std::optional<TermId> lookup_iri(const Dictionary& dict, const std::string& iri) { return dict.find(Term::iri(iri)); }

bool matches(const std::optional<TermId>& id, TermId v) { return id && *id == v; }

struct PairKey {
  TermId a;
  TermId b;
  friend bool operator==(const PairKey&, const PairKey&) = default;
};

struct PairKeyHash {
  std::size_t operator()(const PairKey& k) const noexcept {
    TermIdHash h;
    std::size_t seed = h(k.a);
    return seed ^ (h(k.b) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
  }
};

/// Working set for rule evaluation: membership plus the join indices.
class TripleIndex {
 public:
  bool add(const EncodedTriple& t) {
    if (!all_.insert(t).second) return false;
    by_pred_[t.p].emplace_back(t.s, t.o);
    by_ps_[{t.p, t.s}].push_back(t.o);
    by_po_[{t.p, t.o}].push_back(t.s);
    return true;
  }

  bool contains(const EncodedTriple& t) const { return all_.count(t) != 0; }
  std::size_t size() const { return all_.size(); }

  std::span<const ResourcePair> with_predicate(TermId p) const { return lookup(by_pred_, p); }
  /// Objects o with (s, p, o).
  std::span<const TermId> objects(TermId p, TermId s) const { return lookup(by_ps_, PairKey{p, s}); }
  /// Subjects s with (s, p, o).
  std::span<const TermId> subjects(TermId p, TermId o) const { return lookup(by_po_, PairKey{p, o}); }

 private:
  template <class Map, class Key>
  static std::span<const typename Map::mapped_type::value_type> lookup(const Map& m, const Key& k) {
    auto it = m.find(k);
    if (it == m.end()) return {};
    return it->second;
  }

  std::unordered_set<EncodedTriple, EncodedTripleHash> all_;
  std::unordered_map<TermId, std::vector<ResourcePair>, TermIdHash> by_pred_;
  std::unordered_map<PairKey, std::vector<TermId>, PairKeyHash> by_ps_;
  std::unordered_map<PairKey, std::vector<TermId>, PairKeyHash> by_po_;
};

/// Emits every instantiation of `rule` with at least one premise in `delta`.
template <class Emit>
void fire(Rule rule, const TripleIndex& all, std::span<const EncodedTriple> delta, const RuleVocabulary& v,
          Emit&& emit) {
  auto emit_if_valid = [&](TermId s, TermId p, TermId o) {
    if (s.is_literal() || p.is_literal()) return;
    emit(EncodedTriple{s, p, o});
  };

  switch (rule) {
    case Rule::Rdfs5: {
      if (!v.sub_property_of) return;
      const TermId spo = *v.sub_property_of;
      for (const auto& t : delta) {
        if (t.p != spo) continue;
        // t = (u spo v): join (v spo x), and as the right premise (w spo u)
        for (TermId x : all.objects(spo, t.o)) emit_if_valid(t.s, spo, x);
        for (TermId w : all.subjects(spo, t.s)) emit_if_valid(w, spo, t.o);
      }
      return;
    }
    case Rule::Rdfs7: {
      if (!v.sub_property_of) return;
      const TermId spo = *v.sub_property_of;
      for (const auto& t : delta) {
        if (t.p == spo) {
          // (a spo b) with every (u a y)
          for (const auto& [u, y] : all.with_predicate(t.s)) emit_if_valid(u, t.o, y);
        }
        // (u a y) with every (a spo b)
        for (TermId b : all.objects(spo, t.p)) emit_if_valid(t.s, b, t.o);
      }
      return;
    }
    case Rule::Rdfs9: {
      if (!v.sub_class_of || !v.type) return;
      const TermId sco = *v.sub_class_of;
      const TermId type = *v.type;
      for (const auto& t : delta) {
        if (t.p == type) {
          for (TermId x : all.objects(sco, t.o)) emit_if_valid(t.s, type, x);
        }
        if (t.p == sco) {
          for (TermId inst : all.subjects(type, t.s)) emit_if_valid(inst, type, t.o);
        }
      }
      return;
    }
    case Rule::Domain:
    case Rule::Range: {
      const auto& schema = rule == Rule::Domain ? v.domain : v.range;
      if (!schema || !v.type) return;
      const TermId link = *schema;
      const TermId type = *v.type;
      auto member = [&](TermId u, TermId obj) { return rule == Rule::Domain ? u : obj; };
      for (const auto& t : delta) {
        if (t.p == link) {
          for (const auto& [u, obj] : all.with_predicate(t.s)) emit_if_valid(member(u, obj), type, t.o);
        }
        for (TermId cls : all.objects(link, t.p)) emit_if_valid(member(t.s, t.o), type, cls);
      }
      return;
    }
  }
}

}  // namespace

VocabularyIds VocabularyIds::resolve(const Dictionary& dict, const Vocabulary& vocab) {
  VocabularyIds ids;
  ids.type = lookup_iri(dict, vocab.type);
  ids.property = lookup_iri(dict, vocab.property);
  ids.singleton_property = lookup_iri(dict, vocab.singleton_property);
  ids.singleton_property_of = lookup_iri(dict, vocab.singleton_property_of);
  ids.domain = lookup_iri(dict, vocab.domain);
  ids.range = lookup_iri(dict, vocab.range);
  ids.sub_property_of = lookup_iri(dict, vocab.sub_property_of);
  ids.sub_class_of = lookup_iri(dict, vocab.sub_class_of);
  return ids;
}

PropertyExtensions compute_extensions(const GraphView& graph, const Vocabulary& vocab) {
  PropertyExtensions ext;
  const auto ids = VocabularyIds::resolve(graph.dictionary(), vocab);
  const auto triples = graph.triples();
  for (const auto& t : triples) {
    ext.generic[t.p].emplace(t.s, t.o);
    if (matches(ids.type, t.p)) {
      ext.classes[t.o].insert(t.s);
      if (matches(ids.property, t.o)) ext.generic[t.s];
    }
  }
  for (TermId sp : classify_singleton_properties(graph, vocab)) {
    auto it = ext.generic.find(sp);
    if (it != ext.generic.end() && it->second.size() == 1) ext.singleton.emplace(sp, *it->second.begin());
  }
  return ext;
}

std::set<TermId> classify_singleton_properties(const GraphView& graph, const Vocabulary& vocab) {
  std::set<TermId> out;
  const auto ids = VocabularyIds::resolve(graph.dictionary(), vocab);
  if (!ids.singleton_property_of && !(ids.type && ids.singleton_property)) return out;
  for (const auto& t : graph.triples()) {
    if (matches(ids.singleton_property_of, t.p)) out.insert(t.s);
    if (matches(ids.type, t.p) && matches(ids.singleton_property, t.o)) out.insert(t.s);
  }
  return out;
}

std::vector<SingletonIssue> validate_singleton_uniqueness(const GraphView& graph, const std::set<TermId>& singletons,
                                                          bool strict) {
  std::vector<SingletonIssue> issues;
  if (singletons.empty()) return issues;
  std::map<TermId, std::uint64_t> uses;
  for (TermId sp : singletons) uses[sp] = 0;
  for (const auto& t : graph.triples()) {
    auto it = uses.find(t.p);
    if (it != uses.end()) ++it->second;
  }
  for (const auto& [sp, n] : uses) {
    if (n >= 2) {
      issues.push_back({sp, n, IssueSeverity::Violation});
    } else if (n == 0) {
      issues.push_back({sp, n, strict ? IssueSeverity::Violation : IssueSeverity::Warning});
    }
  }
  return issues;
}

std::string to_string(Rule r) {
  switch (r) {
    case Rule::Rdfs5: return "rdfs5";
    case Rule::Rdfs7: return "rdfs7";
    case Rule::Rdfs9: return "rdfs9";
    case Rule::Domain: return "domain";
    case Rule::Range: return "range";
  }
  return "?";
}

Rule parse_rule(const std::string& name) {
  for (Rule r : kAllRules) {
    if (to_string(r) == name) return r;
  }
  throw Error("unknown rule '" + name + "' (expected rdfs5, rdfs7, rdfs9, domain or range)");
}

std::vector<Rule> parse_rules(const std::string& list) {
  std::vector<Rule> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    item = item.substr(first, item.find_last_not_of(" \t") - first + 1);
    Rule r = parse_rule(item);
    if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
  }
  return out;
}

std::vector<EncodedTriple> apply_rule(std::span<const EncodedTriple> triples, Rule rule, const RuleVocabulary& ids) {
  TripleIndex all;
  for (const auto& t : triples) all.add(t);
  std::unordered_set<EncodedTriple, EncodedTripleHash> fresh;
  fire(rule, all, triples, ids, [&](const EncodedTriple& t) {
    if (!all.contains(t)) fresh.insert(t);
  });
  std::vector<EncodedTriple> out(fresh.begin(), fresh.end());
  std::sort(out.begin(), out.end());
  return out;
}

ClosureResult entail_closure(std::span<const EncodedTriple> triples, const RuleVocabulary& ids,
                             const EntailOptions& opts) {
  TripleIndex all;
  std::vector<EncodedTriple> delta;
  for (const auto& t : triples) {
    if (all.add(t)) delta.push_back(t);
  }
  const std::size_t base = all.size();

  ClosureResult result;
  while (!delta.empty()) {
    ++result.rounds;
    std::vector<EncodedTriple> next;
    std::unordered_set<EncodedTriple, EncodedTripleHash> pending;
    for (Rule rule : opts.rules) {
      fire(rule, all, delta, ids, [&](const EncodedTriple& t) {
        if (!all.contains(t) && pending.insert(t).second) next.push_back(t);
      });
    }
    for (const auto& t : next) all.add(t);
    if (all.size() - base > opts.max_derived)
      throw ResourceLimit("entailment derived more than " + std::to_string(opts.max_derived) + " triples");
    result.derived.insert(result.derived.end(), next.begin(), next.end());
    delta = std::move(next);
  }
  std::sort(result.derived.begin(), result.derived.end());
  return result;
}

EntailReport entail_fixpoint(Store& store, const EntailOptions& opts, const Vocabulary& vocab) {
  const Dictionary& dict = store.dictionary();
  const auto vids = VocabularyIds::resolve(dict, vocab);
  RuleVocabulary ids{vids.type, vids.domain, vids.range, vids.sub_property_of, vids.sub_class_of};

  // rdf:type may be absent from the data yet needed as the predicate of
  // domain/range conclusions; reserve the id it would receive.
  bool provisional_type = false;
  if (!ids.type) {
    ids.type = dict.next_even();
    provisional_type = true;
  }

  const auto base = store.base().triples();
  ClosureResult closure = entail_closure(base, ids, opts);

  if (provisional_type) {
    bool used = std::any_of(closure.derived.begin(), closure.derived.end(),
                            [&](const EncodedTriple& t) { return t.p == *ids.type; });
    if (used) {
      TermId issued = store.mutable_dictionary().encode(Term::iri(vocab.type));
      if (issued != *ids.type) throw Error("internal: provisional rdf:type id mismatch");
    }
  }

  EntailReport report;
  report.base_triples = base.size();
  report.derived = closure.derived.size();
  report.rounds = closure.rounds;
  store.set_delta(std::move(closure.derived));
  return report;
}

// ---------------------------------------------------------------------------
// XML literals

namespace {

bool is_name_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':' || static_cast<unsigned char>(c) >= 0x80;
}

bool is_name_char(char c) {
  return is_name_start(c) || std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '.';
}

}  // namespace

bool is_well_formed_xml_fragment(std::string_view s) {
  std::vector<std::string_view> open;
  std::size_t i = 0;
  auto skip_past = [&](std::string_view terminator) {
    auto end = s.find(terminator, i);
    if (end == std::string_view::npos) return false;
    i = end + terminator.size();
    return true;
  };

  while (i < s.size()) {
    char c = s[i];
    if (c == '&') {
      auto end = s.find(';', i);
      if (end == std::string_view::npos) return false;
      std::string_view ref = s.substr(i + 1, end - i - 1);
      if (ref.empty()) return false;
      if (ref[0] == '#') {
        bool hex = ref.size() > 1 && ref[1] == 'x';
        std::string_view digits = ref.substr(hex ? 2 : 1);
        if (digits.empty()) return false;
        for (char d : digits) {
          if (!(hex ? std::isxdigit(static_cast<unsigned char>(d)) : std::isdigit(static_cast<unsigned char>(d))))
            return false;
        }
      } else {
        if (!is_name_start(ref[0])) return false;
        for (char d : ref) {
          if (!is_name_char(d)) return false;
        }
      }
      i = end + 1;
      continue;
    }
    if (c != '<') {
      ++i;
      continue;
    }
    std::string_view rest = s.substr(i);
    if (rest.starts_with("<!--")) {
      i += 4;
      if (!skip_past("-->")) return false;
      continue;
    }
    if (rest.starts_with("<![CDATA[")) {
      i += 9;
      if (!skip_past("]]>")) return false;
      continue;
    }
    if (rest.starts_with("<?")) {
      i += 2;
      if (!skip_past("?>")) return false;
      continue;
    }
    bool closing = rest.starts_with("</");
    i += closing ? 2 : 1;
    std::size_t name_start = i;
    if (i >= s.size() || !is_name_start(s[i])) return false;
    while (i < s.size() && is_name_char(s[i])) ++i;
    std::string_view name = s.substr(name_start, i - name_start);

    // attributes: scan to '>' honouring quoted values
    bool self_closing = false;
    while (true) {
      if (i >= s.size()) return false;
      char a = s[i];
      if (a == '"' || a == '\'') {
        auto end = s.find(a, i + 1);
        if (end == std::string_view::npos) return false;
        i = end + 1;
        continue;
      }
      if (a == '<') return false;
      if (a == '/' && i + 1 < s.size() && s[i + 1] == '>') {
        self_closing = true;
        i += 2;
        break;
      }
      if (a == '>') {
        ++i;
        break;
      }
      ++i;
    }
    if (closing) {
      if (self_closing || open.empty() || open.back() != name) return false;
      open.pop_back();
    } else if (!self_closing) {
      open.push_back(name);
    }
  }
  return open.empty();
}

XmlLiteralReport flag_xml_literals(const GraphView& graph, const Vocabulary& vocab) {
  XmlLiteralReport report;
  const Dictionary& dict = graph.dictionary();
  for (TermId id : dict.ids()) {
    if (!id.is_literal()) continue;
    const Term& t = dict.decode(id);
    if (t.datatype() != vocab.xml_literal) continue;
    (is_well_formed_xml_fragment(t.value()) ? report.well_typed : report.ill_typed).push_back(id);
  }
  return report;
}

}  // namespace ldm3n
