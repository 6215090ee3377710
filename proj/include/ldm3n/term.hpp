#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>

namespace ldm3n {

enum class TermKind : unsigned char { Iri, Literal, BlankNode };

/// An RDF term: IRI, literal (with optional datatype or language tag) or blank node.
///
/// Construct through the named factories; they enforce the kind-specific
/// invariants. Equality is syntactic over all lexical components.
class Term {
 public:
  Term() = default;

  static Term iri(std::string iri);
  static Term literal(std::string lexical);
  static Term typed_literal(std::string lexical, std::string datatype_iri);
  static Term lang_literal(std::string lexical, std::string language);
  static Term blank(std::string label);

  TermKind kind() const noexcept { return kind_; }
  bool is_iri() const noexcept { return kind_ == TermKind::Iri; }
  bool is_literal() const noexcept { return kind_ == TermKind::Literal; }
  bool is_blank() const noexcept { return kind_ == TermKind::BlankNode; }

  /// IRI string, literal lexical form, or blank-node label.
  const std::string& value() const noexcept { return value_; }
  const std::string& datatype() const noexcept { return datatype_; }
  const std::string& language() const noexcept { return language_; }

  /// N-Triples token for this term, e.g. `<http://x>`, `"v"@en`, `_:b0`.
  std::string to_ntriples() const;

  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term&, const Term&) = default;

 private:
  Term(TermKind kind, std::string value, std::string datatype, std::string language);

  TermKind kind_ = TermKind::Iri;
  std::string value_;
  std::string datatype_;
  std::string language_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const noexcept;
};

/// A subject/predicate/object statement. Subject is never a literal;
/// predicate is always an IRI.
class Triple {
 public:
  Triple(Term subject, Term predicate, Term object);

  const Term& subject() const noexcept { return subject_; }
  const Term& predicate() const noexcept { return predicate_; }
  const Term& object() const noexcept { return object_; }

  friend bool operator==(const Triple&, const Triple&) = default;
  friend auto operator<=>(const Triple&, const Triple&) = default;

 private:
  Term subject_;
  Term predicate_;
  Term object_;
};

struct TripleHash {
  std::size_t operator()(const Triple& t) const noexcept;
};

}  // namespace ldm3n
