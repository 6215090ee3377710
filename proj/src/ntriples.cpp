#include "ldm3n/ntriples.hpp"

#include <cctype>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

namespace ldm3n {

namespace {

constexpr std::size_t kMaxRecordedErrors = 16;

struct SyntaxError {
  std::string reason;
};

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp <= 0x10FFFF) {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    throw SyntaxError{"code point out of range"};
  }
}

bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

/// Cursor over one statement line.
class LineReader {
 public:
  explicit LineReader(std::string_view s) : s_(s) {}

  void skip_ws() {
    while (pos_ < s_.size() && is_ws(s_[pos_])) ++pos_;
  }
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return at_end() ? '\0' : s_[pos_]; }
  std::size_t pos() const { return pos_; }

  Term read_term() {
    skip_ws();
    if (at_end()) throw SyntaxError{"unexpected end of line"};
    switch (peek()) {
      case '<':
        return Term::iri(read_iri());
      case '_':
        return Term::blank(read_blank_label());
      case '"':
        return read_literal();
      default:
        throw SyntaxError{std::string("unexpected character '") + peek() + "'"};
    }
  }

  std::string read_iri() {
    expect('<');
    std::string out;
    while (true) {
      if (at_end()) throw SyntaxError{"unterminated IRI"};
      char c = s_[pos_++];
      if (c == '>') break;
      if (is_ws(c) || c == '<' || c == '"') throw SyntaxError{"invalid character in IRI"};
      if (c == '\\') {
        char e = next();
        if (e == 'u') {
          append_utf8(out, read_hex(4));
        } else if (e == 'U') {
          append_utf8(out, read_hex(8));
        } else {
          throw SyntaxError{"invalid escape in IRI"};
        }
        continue;
      }
      out += c;
    }
    if (out.empty()) throw SyntaxError{"empty IRI"};
    return out;
  }

  std::string read_blank_label() {
    expect('_');
    expect(':');
    std::size_t start = pos_;
    while (!at_end() && !is_ws(s_[pos_]) && s_[pos_] != '<' && s_[pos_] != '"') ++pos_;
    // a trailing '.' terminates the statement rather than belonging to the label
    while (pos_ > start && s_[pos_ - 1] == '.') --pos_;
    if (pos_ == start) throw SyntaxError{"empty blank node label"};
    return std::string(s_.substr(start, pos_ - start));
  }

  Term read_literal() {
    expect('"');
    std::string lex;
    while (true) {
      if (at_end()) throw SyntaxError{"unterminated literal"};
      char c = s_[pos_++];
      if (c == '"') break;
      if (c == '\\') {
        char e = next();
        switch (e) {
          case 't': lex += '\t'; break;
          case 'b': lex += '\b'; break;
          case 'n': lex += '\n'; break;
          case 'r': lex += '\r'; break;
          case 'f': lex += '\f'; break;
          case '"': lex += '"'; break;
          case '\'': lex += '\''; break;
          case '\\': lex += '\\'; break;
          case 'u': append_utf8(lex, read_hex(4)); break;
          case 'U': append_utf8(lex, read_hex(8)); break;
          default: throw SyntaxError{"invalid escape in literal"};
        }
        continue;
      }
      lex += c;
    }
    if (peek() == '^') {
      expect('^');
      expect('^');
      return Term::typed_literal(std::move(lex), read_iri());
    }
    if (peek() == '@') {
      ++pos_;
      std::size_t start = pos_;
      while (!at_end() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '-')) ++pos_;
      if (pos_ == start) throw SyntaxError{"empty language tag"};
      return Term::lang_literal(std::move(lex), std::string(s_.substr(start, pos_ - start)));
    }
    return Term::literal(std::move(lex));
  }

  void expect(char c) {
    if (at_end() || s_[pos_] != c) throw SyntaxError{std::string("expected '") + c + "'"};
    ++pos_;
  }

 private:
  char next() {
    if (at_end()) throw SyntaxError{"unexpected end of line"};
    return s_[pos_++];
  }

  std::uint32_t read_hex(int digits) {
    std::uint32_t v = 0;
    for (int i = 0; i < digits; ++i) {
      char c = next();
      v <<= 4;
      if (c >= '0' && c <= '9') {
        v |= static_cast<std::uint32_t>(c - '0');
      } else if (c >= 'a' && c <= 'f') {
        v |= static_cast<std::uint32_t>(c - 'a' + 10);
      } else if (c >= 'A' && c <= 'F') {
        v |= static_cast<std::uint32_t>(c - 'A' + 10);
      } else {
        throw SyntaxError{"invalid hex digit in escape"};
      }
    }
    return v;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

/// Returns nullopt for blank and comment lines.
std::optional<Triple> parse_line(std::string_view line) {
  LineReader r(line);
  r.skip_ws();
  if (r.at_end() || r.peek() == '#') return std::nullopt;
  if (r.peek() == '"') throw SyntaxError{"literal in subject position"};
  Term s = r.read_term();
  r.skip_ws();
  if (r.peek() != '<') throw SyntaxError{"predicate must be an IRI"};
  Term p = r.read_term();
  Term o = r.read_term();
  r.skip_ws();
  r.expect('.');
  r.skip_ws();
  if (!r.at_end() && r.peek() != '#') throw SyntaxError{"trailing content after '.'"};
  return Triple(std::move(s), std::move(p), std::move(o));
}

}  // namespace

ParseStats parse_ntriples(std::istream& in, ParseMode mode, const TripleSink& sink) {
  ParseStats stats;
  std::string line;
  while (std::getline(in, line)) {
    ++stats.lines;
    std::optional<Triple> t;
    std::string reason;
    try {
      t = parse_line(line);
    } catch (const SyntaxError& e) {
      reason = e.reason;
    } catch (const Error& e) {
      reason = e.what();
    }
    if (!reason.empty()) {
      if (mode == ParseMode::Strict) throw MalformedLine(stats.lines, reason + ": " + line);
      ++stats.skipped;
      if (stats.errors.size() < kMaxRecordedErrors) stats.errors.emplace_back(stats.lines, reason);
      continue;
    }
    if (t) {
      ++stats.triples;
      sink(std::move(*t));
    }
  }
  if (in.bad()) throw IoFailure("read error while parsing N-Triples");
  return stats;
}

std::vector<Triple> parse_ntriples(std::istream& in, ParseMode mode, ParseStats* stats) {
  std::vector<Triple> out;
  ParseStats s = parse_ntriples(in, mode, [&](Triple&& t) { out.push_back(std::move(t)); });
  if (stats) *stats = std::move(s);
  return out;
}

std::vector<Triple> parse_ntriples(std::string_view text, ParseMode mode, ParseStats* stats) {
  std::istringstream in{std::string(text)};
  return parse_ntriples(in, mode, stats);
}

Term parse_term(std::string_view token) {
  try {
    LineReader r(token);
    Term t = r.read_term();
    r.skip_ws();
    if (!r.at_end()) throw SyntaxError{"trailing content after term"};
    return t;
  } catch (const SyntaxError& e) {
    throw Error("malformed term '" + std::string(token) + "': " + e.reason);
  }
}

std::string escape_literal(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

std::string escape_iri(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(s.size());
  for (char ch : s) {
    auto c = static_cast<unsigned char>(ch);
    bool bad = c <= 0x20 || ch == '<' || ch == '>' || ch == '"' || ch == '{' || ch == '}' || ch == '|' ||
               ch == '^' || ch == '`' || ch == '\\';
    if (bad) {
      out += "\\u00";
      out += kHex[c >> 4];
      out += kHex[c & 0xF];
    } else {
      out += ch;
    }
  }
  return out;
}

std::string to_ntriples_line(const Triple& t) {
  return t.subject().to_ntriples() + " " + t.predicate().to_ntriples() + " " + t.object().to_ntriples() + " .";
}

void serialize_ntriples(std::span<const Triple> triples, std::ostream& out) {
  for (const auto& t : triples) out << to_ntriples_line(t) << '\n';
}

std::string serialize_ntriples(std::span<const Triple> triples) {
  std::ostringstream out;
  serialize_ntriples(triples, out);
  return out.str();
}

}  // namespace ldm3n
