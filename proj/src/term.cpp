#include "ldm3n/term.hpp"

#include <algorithm>
#include <cctype>

#include "ldm3n/errors.hpp"
#include "ldm3n/ntriples.hpp"

namespace ldm3n {

namespace {

bool has_whitespace(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

void check_iri(std::string_view iri, const char* what) {
  if (iri.empty()) throw Error(std::string(what) + " IRI is empty");
  if (has_whitespace(iri)) throw Error(std::string(what) + " IRI contains whitespace: " + std::string(iri));
}

std::size_t mix(std::size_t seed, std::size_t h) {
  return seed ^ (h + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

Term::Term(TermKind kind, std::string value, std::string datatype, std::string language)
    : kind_(kind), value_(std::move(value)), datatype_(std::move(datatype)), language_(std::move(language)) {}

Term Term::iri(std::string iri) {
  check_iri(iri, "term");
  return Term(TermKind::Iri, std::move(iri), {}, {});
}

Term Term::literal(std::string lexical) { return Term(TermKind::Literal, std::move(lexical), {}, {}); }

Term Term::typed_literal(std::string lexical, std::string datatype_iri) {
  check_iri(datatype_iri, "datatype");
  return Term(TermKind::Literal, std::move(lexical), std::move(datatype_iri), {});
}

Term Term::lang_literal(std::string lexical, std::string language) {
  if (language.empty()) throw Error("empty language tag");
  return Term(TermKind::Literal, std::move(lexical), {}, std::move(language));
}

Term Term::blank(std::string label) {
  if (label.empty() || has_whitespace(label)) throw Error("invalid blank node label: '" + label + "'");
  return Term(TermKind::BlankNode, std::move(label), {}, {});
}

std::string Term::to_ntriples() const {
  switch (kind_) {
    case TermKind::Iri:
      return "<" + escape_iri(value_) + ">";
    case TermKind::BlankNode:
      return "_:" + value_;
    case TermKind::Literal: {
      std::string out = "\"" + escape_literal(value_) + "\"";
      if (!datatype_.empty()) out += "^^<" + escape_iri(datatype_) + ">";
      if (!language_.empty()) out += "@" + language_;
      return out;
    }
  }
  return {};
}

std::size_t TermHash::operator()(const Term& t) const noexcept {
  std::hash<std::string> h;
  std::size_t seed = static_cast<std::size_t>(t.kind());
  seed = mix(seed, h(t.value()));
  seed = mix(seed, h(t.datatype()));
  seed = mix(seed, h(t.language()));
  return seed;
}

Triple::Triple(Term subject, Term predicate, Term object)
    : subject_(std::move(subject)), predicate_(std::move(predicate)), object_(std::move(object)) {
  if (subject_.is_literal()) throw Error("literal in subject position: " + subject_.to_ntriples());
  if (!predicate_.is_iri()) throw Error("predicate must be an IRI: " + predicate_.to_ntriples());
}

std::size_t TripleHash::operator()(const Triple& t) const noexcept {
  TermHash h;
  return mix(mix(h(t.subject()), h(t.predicate())), h(t.object()));
}

}  // namespace ldm3n
