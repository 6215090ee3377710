#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ldm3n/dictionary.hpp"
#include "ldm3n/storage.hpp"

namespace ldm3n {

inline constexpr const char* kRdfNs = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr const char* kRdfsNs = "http://www.w3.org/2000/01/rdf-schema#";

/// IRIs of the RDF/RDFS terms the semantics layer matches on. The singleton
/// property terms can be rebound for datasets that use another namespace.
struct Vocabulary {
  std::string type = std::string(kRdfNs) + "type";
  std::string property = std::string(kRdfNs) + "Property";
  std::string singleton_property = std::string(kRdfNs) + "SingletonProperty";
  std::string singleton_property_of = std::string(kRdfNs) + "singletonPropertyOf";
  std::string xml_literal = std::string(kRdfNs) + "XMLLiteral";
  std::string domain = std::string(kRdfsNs) + "domain";
  std::string range = std::string(kRdfsNs) + "range";
  std::string sub_property_of = std::string(kRdfsNs) + "subPropertyOf";
  std::string sub_class_of = std::string(kRdfsNs) + "subClassOf";
  std::string label = std::string(kRdfsNs) + "label";
};

/// Vocabulary looked up in a dictionary. Terms absent from the data stay
/// unset, which simply disables the criteria that mention them.
struct VocabularyIds {
  std::optional<TermId> type;
  std::optional<TermId> property;
  std::optional<TermId> singleton_property;
  std::optional<TermId> singleton_property_of;
  std::optional<TermId> domain;
  std::optional<TermId> range;
  std::optional<TermId> sub_property_of;
  std::optional<TermId> sub_class_of;

  static VocabularyIds resolve(const Dictionary& dict, const Vocabulary& vocab);
};

using ResourcePair = std::pair<TermId, TermId>;

struct PropertyExtensions {
  /// I_EXT: every id used as a predicate (or typed rdf:Property) -> its (s, o) pairs.
  std::map<TermId, std::set<ResourcePair>> generic;
  /// I_S_EXT: singleton property -> its one (s, o) pair. Singletons used more
  /// or less than once have no entry.
  std::map<TermId, ResourcePair> singleton;
  /// I_CEXT: class -> instances via rdf:type.
  std::map<TermId, std::set<TermId>> classes;
};

PropertyExtensions compute_extensions(const GraphView& graph, const Vocabulary& vocab = {});

/// Ids declared singleton via rdf:singletonPropertyOf or typed rdf:SingletonProperty.
std::set<TermId> classify_singleton_properties(const GraphView& graph, const Vocabulary& vocab = {});

enum class IssueSeverity { Warning, Violation };

struct SingletonIssue {
  TermId property;
  std::uint64_t occurrences = 0;
  IssueSeverity severity = IssueSeverity::Violation;
};

/// A singleton used as predicate of two or more triples is a violation. One
/// used zero times is a warning, or a violation when `strict`.
std::vector<SingletonIssue> validate_singleton_uniqueness(const GraphView& graph, const std::set<TermId>& singletons,
                                                          bool strict = false);

enum class Rule { Rdfs5, Rdfs7, Rdfs9, Domain, Range };

std::string to_string(Rule r);
Rule parse_rule(const std::string& name);
/// Parses a comma separated rule list such as "rdfs5,rdfs7,domain".
std::vector<Rule> parse_rules(const std::string& list);
inline const std::vector<Rule> kAllRules{Rule::Rdfs5, Rule::Rdfs7, Rule::Rdfs9, Rule::Domain, Rule::Range};

/// Ids the rules match on. `type` is also the predicate of derived
/// domain/range/rdfs9 triples.
struct RuleVocabulary {
  std::optional<TermId> type;
  std::optional<TermId> domain;
  std::optional<TermId> range;
  std::optional<TermId> sub_property_of;
  std::optional<TermId> sub_class_of;
};

/// Triples derivable by a single application of `rule` to `triples`, minus
/// those already present. Sorted.
std::vector<EncodedTriple> apply_rule(std::span<const EncodedTriple> triples, Rule rule, const RuleVocabulary& ids);

struct EntailOptions {
  std::vector<Rule> rules = kAllRules;
  /// Throw ResourceLimit once more triples than this are derived.
  std::size_t max_derived = 50'000'000;
};

struct ClosureResult {
  /// Derived triples (not in the input), sorted.
  std::vector<EncodedTriple> derived;
  std::size_t rounds = 0;
};

/// Semi-naive forward chaining to the least fixpoint over id-space triples.
ClosureResult entail_closure(std::span<const EncodedTriple> triples, const RuleVocabulary& ids,
                             const EntailOptions& opts = {});

struct EntailReport {
  std::size_t base_triples = 0;
  std::size_t derived = 0;
  std::size_t rounds = 0;
};

/// Materializes the closure of the store's base triples into its delta index.
/// rdf:type is added to the dictionary only when a derived triple needs it.
EntailReport entail_fixpoint(Store& store, const EntailOptions& opts = {}, const Vocabulary& vocab = {});

struct XmlLiteralReport {
  std::vector<TermId> well_typed;
  std::vector<TermId> ill_typed;
  bool empty() const noexcept { return well_typed.empty() && ill_typed.empty(); }
};

/// True if `text` is a balanced XML fragment (tags, comments, CDATA, entity refs).
bool is_well_formed_xml_fragment(std::string_view text);

/// Partitions rdf:XMLLiteral-typed literals of the store by well-typedness.
XmlLiteralReport flag_xml_literals(const GraphView& graph, const Vocabulary& vocab = {});

}  // namespace ldm3n
