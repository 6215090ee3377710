#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ldm3n/errors.hpp"
#include "ldm3n/term.hpp"

namespace ldm3n {

enum class ParseMode {
  Strict,   ///< throw MalformedLine on the first bad statement
  Lenient,  ///< skip bad statements and record them
};

struct ParseStats {
  std::size_t lines = 0;
  std::size_t triples = 0;
  std::size_t skipped = 0;
  /// First few lenient-mode failures, for diagnostics.
  std::vector<MalformedLine> errors;
};

using TripleSink = std::function<void(Triple&&)>;

/// Streams N-Triples statements from `in` into `sink` in file order.
ParseStats parse_ntriples(std::istream& in, ParseMode mode, const TripleSink& sink);

std::vector<Triple> parse_ntriples(std::istream& in, ParseMode mode = ParseMode::Strict,
                                   ParseStats* stats = nullptr);
std::vector<Triple> parse_ntriples(std::string_view text, ParseMode mode = ParseMode::Strict,
                                   ParseStats* stats = nullptr);

/// Parses a single N-Triples term token (`<iri>`, `"lit"^^<dt>`, `"lit"@en`, `_:b`).
/// Surrounding whitespace is ignored. Throws Error on malformed input.
Term parse_term(std::string_view token);

void serialize_ntriples(std::span<const Triple> triples, std::ostream& out);
std::string serialize_ntriples(std::span<const Triple> triples);
std::string to_ntriples_line(const Triple& t);

std::string escape_literal(std::string_view s);
std::string escape_iri(std::string_view s);

}  // namespace ldm3n
