#pragma once

// Little helpers for the store's fixed-width binary files. Integers are
// written in host byte order; the header records the format version.

#include <array>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <type_traits>
#include <vector>

#include "ldm3n/errors.hpp"

namespace ldm3n::io {

inline constexpr std::array<char, 6> kMagic{'L', 'D', 'M', '3', 'N', '\0'};
inline constexpr std::uint16_t kFormatVersion = 1;

enum class FileType : std::uint8_t { Meta = 1, DictForward = 2, DictReverse = 3, Adjacency = 4, Counts = 5, Delta = 6 };

template <class T>
void put(std::ostream& out, T v) {
  static_assert(std::is_trivially_copyable_v<T>);
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

inline void put_string(std::ostream& out, const std::string& s) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

template <class T>
void put_array(std::ostream& out, const std::vector<T>& v) {
  static_assert(std::is_trivially_copyable_v<T>);
  out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(T)));
}

template <class T>
T get(std::istream& in) {
  static_assert(std::is_trivially_copyable_v<T>);
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) throw StoreCorrupt("unexpected end of file");
  return v;
}

inline std::string get_string(std::istream& in, std::uint32_t max_len = 1U << 30) {
  auto n = get<std::uint32_t>(in);
  if (n > max_len) throw StoreCorrupt("string length out of range");
  std::string s(n, '\0');
  if (n > 0 && !in.read(s.data(), n)) throw StoreCorrupt("unexpected end of file");
  return s;
}

template <class T>
std::vector<T> get_array(std::istream& in, std::uint64_t n) {
  static_assert(std::is_trivially_copyable_v<T>);
  if (n > (std::uint64_t{1} << 40) / sizeof(T)) throw StoreCorrupt("array length out of range");
  std::vector<T> v(n);
  if (n > 0 && !in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(T))))
    throw StoreCorrupt("unexpected end of file");
  return v;
}

inline void put_header(std::ostream& out, FileType type, std::uint8_t index_kind) {
  out.write(kMagic.data(), kMagic.size());
  put<std::uint16_t>(out, kFormatVersion);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(type));
  put<std::uint8_t>(out, index_kind);
}

/// Validates the header and returns the recorded index kind byte.
inline std::uint8_t check_header(std::istream& in, FileType type, const std::string& name) {
  std::array<char, 6> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) throw StoreCorrupt(name + ": bad magic");
  if (get<std::uint16_t>(in) != kFormatVersion) throw StoreCorrupt(name + ": unsupported format version");
  if (get<std::uint8_t>(in) != static_cast<std::uint8_t>(type)) throw StoreCorrupt(name + ": wrong file type");
  auto kind = get<std::uint8_t>(in);
  if (kind > 1) throw StoreCorrupt(name + ": bad index kind");
  return kind;
}

inline void expect_eof(std::istream& in, const std::string& name) {
  if (in.peek() != std::char_traits<char>::eof()) throw StoreCorrupt(name + ": trailing bytes");
}

}  // namespace ldm3n::io
