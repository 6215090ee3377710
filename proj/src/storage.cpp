#include "ldm3n/storage.hpp"

#include <algorithm>
#include <fstream>
#include <memory>

#include "binary_io.hpp"
#include "ldm3n/errors.hpp"

namespace ldm3n {

namespace fs = std::filesystem;

static_assert(sizeof(TermId) == 8);
static_assert(sizeof(PredObj) == 16);

namespace {

constexpr const char* kMetaFile = "meta";
constexpr const char* kDictForwardFile = "dict_fwd";
constexpr const char* kDictReverseFile = "dict_rev";
constexpr const char* kAdjacencyFile = "adj";
constexpr const char* kCountsFile = "adj_count";
constexpr const char* kDeltaFile = "delta";

constexpr std::uint64_t kMaxWriteBuffer = 64ULL << 20;

/// Output file with a write buffer bounded by the configured cache size.
class BufferedOut {
 public:
  BufferedOut(const fs::path& path, std::uint64_t cache_size)
      : buffer_(std::make_unique<char[]>(buffer_size(cache_size))) {
    out_.rdbuf()->pubsetbuf(buffer_.get(), static_cast<std::streamsize>(buffer_size(cache_size)));
    out_.open(path, std::ios::binary | std::ios::trunc);
    if (!out_) throw IoFailure("cannot open " + path.string() + " for writing");
    path_ = path;
  }

  std::ostream& stream() { return out_; }

  void close() {
    out_.close();
    if (!out_) throw IoFailure("write failed: " + path_.string());
  }

 private:
  static std::size_t buffer_size(std::uint64_t cache_size) {
    return static_cast<std::size_t>(std::clamp<std::uint64_t>(cache_size, 4096, kMaxWriteBuffer));
  }

  std::unique_ptr<char[]> buffer_;
  std::ofstream out_;
  fs::path path_;
};

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + path.string());
  return in;
}

void write_term(std::ostream& out, const Term& t) {
  io::put<std::uint8_t>(out, static_cast<std::uint8_t>(t.kind()));
  io::put_string(out, t.value());
  io::put_string(out, t.datatype());
  io::put_string(out, t.language());
}

Term read_term(std::istream& in) {
  auto kind = io::get<std::uint8_t>(in);
  std::string value = io::get_string(in);
  std::string datatype = io::get_string(in);
  std::string language = io::get_string(in);
  try {
    switch (static_cast<TermKind>(kind)) {
      case TermKind::Iri:
        return Term::iri(std::move(value));
      case TermKind::BlankNode:
        return Term::blank(std::move(value));
      case TermKind::Literal:
        if (!datatype.empty()) return Term::typed_literal(std::move(value), std::move(datatype));
        if (!language.empty()) return Term::lang_literal(std::move(value), std::move(language));
        return Term::literal(std::move(value));
    }
  } catch (const Error& e) {
    throw StoreCorrupt(std::string("dict_rev: invalid term: ") + e.what());
  }
  throw StoreCorrupt("dict_rev: bad term kind");
}

}  // namespace

// ---------------------------------------------------------------------------
// AdjacencyIndex

AdjacencyIndex::AdjacencyIndex(IndexKind kind) : offsets_(kind), counts_(kind) {}

AdjacencyIndex AdjacencyIndex::build(IndexKind kind, std::vector<EncodedTriple> triples) {
  std::sort(triples.begin(), triples.end());
  triples.erase(std::unique(triples.begin(), triples.end()), triples.end());

  AdjacencyIndex idx(kind);
  idx.pairs_.reserve(triples.size());
  for (const auto& t : triples) {
    if (idx.keys_.empty() || idx.keys_.back() != t.s) {
      idx.keys_.push_back(t.s);
      idx.ranges_.push_back({idx.pairs_.size(), 0});
    }
    idx.pairs_.push_back({t.p, t.o});
    ++idx.ranges_.back().length;
  }
  idx.index_keys();
  return idx;
}

void AdjacencyIndex::index_keys() {
  offsets_.reserve(keys_.size());
  counts_.reserve(keys_.size());
  for (std::size_t i = 0; i < keys_.size(); ++i) {
    offsets_.try_emplace(keys_[i], ranges_[i]);
    counts_.try_emplace(keys_[i], ranges_[i].length);
  }
}

std::span<const PredObj> AdjacencyIndex::neighbors(TermId node) const {
  const Range* r = offsets_.find(node);
  if (r == nullptr) return {};
  return std::span<const PredObj>(pairs_).subspan(r->offset, r->length);
}

std::uint64_t AdjacencyIndex::pair_count(TermId node) const {
  const std::uint64_t* c = counts_.find(node);
  return c == nullptr ? 0 : *c;
}

bool AdjacencyIndex::contains(const EncodedTriple& t) const {
  auto n = neighbors(t.s);
  return std::binary_search(n.begin(), n.end(), PredObj{t.p, t.o});
}

std::vector<EncodedTriple> AdjacencyIndex::triples() const {
  std::vector<EncodedTriple> out;
  out.reserve(pairs_.size());
  for (std::size_t i = 0; i < keys_.size(); ++i) {
    for (std::uint64_t j = 0; j < ranges_[i].length; ++j) {
      const auto& po = pairs_[ranges_[i].offset + j];
      out.push_back({keys_[i], po.pred, po.obj});
    }
  }
  return out;
}

std::vector<std::pair<TermId, std::uint64_t>> AdjacencyIndex::counts() const {
  std::vector<std::pair<TermId, std::uint64_t>> out;
  out.reserve(counts_.size());
  counts_.for_each([&](TermId k, std::uint64_t c) { out.emplace_back(k, c); });
  std::sort(out.begin(), out.end());
  return out;
}

void AdjacencyIndex::write(std::ostream& out) const {
  io::put<std::uint64_t>(out, keys_.size());
  io::put<std::uint64_t>(out, pairs_.size());
  for (std::size_t i = 0; i < keys_.size(); ++i) {
    io::put<std::uint64_t>(out, keys_[i].value);
    io::put<std::uint64_t>(out, ranges_[i].length);
  }
  io::put_array(out, pairs_);
}

void AdjacencyIndex::write_counts(std::ostream& out) const {
  auto entries = counts();
  io::put<std::uint64_t>(out, entries.size());
  for (const auto& [k, c] : entries) {
    io::put<std::uint64_t>(out, k.value);
    io::put<std::uint64_t>(out, c);
  }
}

AdjacencyIndex AdjacencyIndex::read(IndexKind kind, std::istream& adj, std::istream* counts) {
  AdjacencyIndex idx(kind);
  auto nkeys = io::get<std::uint64_t>(adj);
  auto npairs = io::get<std::uint64_t>(adj);
  if (nkeys > npairs) throw StoreCorrupt("adj: more keys than pairs");
  auto key_table = io::get_array<std::uint64_t>(adj, 2 * nkeys);
  idx.pairs_ = io::get_array<PredObj>(adj, npairs);

  idx.keys_.reserve(nkeys);
  idx.ranges_.reserve(nkeys);
  std::uint64_t offset = 0;
  for (std::uint64_t i = 0; i < nkeys; ++i) {
    TermId key{key_table[2 * i]};
    std::uint64_t len = key_table[2 * i + 1];
    if (key.is_null() || key.is_literal()) throw StoreCorrupt("adj: literal or null subject key");
    if (!idx.keys_.empty() && !(idx.keys_.back() < key)) throw StoreCorrupt("adj: keys not strictly ascending");
    if (len == 0 || len > npairs - offset) throw StoreCorrupt("adj: bad pair range");
    for (std::uint64_t j = offset; j < offset + len; ++j) {
      const auto& po = idx.pairs_[j];
      if (po.pred.is_null() || po.pred.is_literal() || po.obj.is_null()) throw StoreCorrupt("adj: bad pair");
      if (j > offset && !(idx.pairs_[j - 1] < po)) throw StoreCorrupt("adj: pairs not strictly ascending");
    }
    idx.keys_.push_back(key);
    idx.ranges_.push_back({offset, len});
    offset += len;
  }
  if (offset != npairs) throw StoreCorrupt("adj: pair ranges do not cover the pair table");
  idx.index_keys();

  if (counts != nullptr) {
    auto n = io::get<std::uint64_t>(*counts);
    if (n != nkeys) throw StoreCorrupt("adj_count: key count disagrees with adj");
    for (std::uint64_t i = 0; i < n; ++i) {
      auto k = io::get<std::uint64_t>(*counts);
      auto c = io::get<std::uint64_t>(*counts);
      if (k != idx.keys_[i].value || c != idx.ranges_[i].length)
        throw StoreCorrupt("adj_count: count disagrees with adj for key " + std::to_string(k));
    }
  }
  return idx;
}

// ---------------------------------------------------------------------------
// GraphView

std::string to_string(ViewKind v) {
  switch (v) {
    case ViewKind::Base: return "base";
    case ViewKind::Delta: return "delta";
    case ViewKind::Union: return "union";
  }
  return "base";
}

ViewKind parse_view_kind(const std::string& name) {
  if (name == "base") return ViewKind::Base;
  if (name == "delta") return ViewKind::Delta;
  if (name == "union") return ViewKind::Union;
  throw Error("unknown view '" + name + "' (expected base, delta or union)");
}

void GraphView::neighbors(TermId node, std::vector<PredObj>& out) const {
  auto a = first_->neighbors(node);
  if (second_ == nullptr) {
    out.insert(out.end(), a.begin(), a.end());
    return;
  }
  auto b = second_->neighbors(node);
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
}

std::vector<PredObj> GraphView::neighbors(TermId node) const {
  std::vector<PredObj> out;
  neighbors(node, out);
  return out;
}

std::uint64_t GraphView::pair_count(TermId node) const {
  return first_->pair_count(node) + (second_ ? second_->pair_count(node) : 0);
}

bool GraphView::contains(const EncodedTriple& t) const {
  return first_->contains(t) || (second_ != nullptr && second_->contains(t));
}

std::size_t GraphView::triple_count() const noexcept {
  return first_->triple_count() + (second_ ? second_->triple_count() : 0);
}

std::vector<EncodedTriple> GraphView::triples() const {
  auto a = first_->triples();
  if (second_ == nullptr) return a;
  auto b = second_->triples();
  std::vector<EncodedTriple> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// ---------------------------------------------------------------------------
// Store

Store Store::build(std::span<const Triple> triples, IndexKind kind, LoadReport* report) {
  Store st;
  st.config_.index_kind = kind;
  st.dict_ = Dictionary(kind);
  std::vector<EncodedTriple> enc;
  enc.reserve(triples.size());
  for (const auto& t : triples) enc.push_back(st.encode(t));
  st.base_ = AdjacencyIndex::build(kind, std::move(enc));
  st.delta_ = AdjacencyIndex(kind);
  if (report) {
    report->triples_read = triples.size();
    report->distinct_triples = st.base_.triple_count();
    report->duplicates = triples.size() - st.base_.triple_count();
    report->distinct_terms = st.dict_.size();
    report->literal_terms = st.dict_.literal_count();
  }
  return st;
}

Store Store::load(const StoreConfig& config, std::span<const Triple> triples, LoadReport* report) {
  if (config.cache_size_bytes == 0) throw Error("cache size must be positive");
  Store st = build(triples, config.index_kind, report);
  st.config_ = config;
  st.persist();
  return st;
}

Store Store::load(const StoreConfig& config, std::istream& in, ParseMode mode, LoadReport* report) {
  if (config.cache_size_bytes == 0) throw Error("cache size must be positive");
  Store st;
  st.config_ = config;
  st.dict_ = Dictionary(config.index_kind);
  std::vector<EncodedTriple> enc;
  ParseStats stats = parse_ntriples(in, mode, [&](Triple&& t) { enc.push_back(st.encode(t)); });
  std::size_t read = enc.size();
  st.base_ = AdjacencyIndex::build(config.index_kind, std::move(enc));
  st.delta_ = AdjacencyIndex(config.index_kind);
  if (report) {
    report->triples_read = read;
    report->distinct_triples = st.base_.triple_count();
    report->duplicates = read - st.base_.triple_count();
    report->distinct_terms = st.dict_.size();
    report->literal_terms = st.dict_.literal_count();
    report->lines_skipped = stats.skipped;
  }
  st.persist();
  return st;
}

EncodedTriple Store::encode(const Triple& t) {
  return {dict_.encode(t.subject()), dict_.encode(t.predicate()), dict_.encode(t.object())};
}

Triple Store::decode(const EncodedTriple& t) const {
  return Triple(dict_.decode(t.s), dict_.decode(t.p), dict_.decode(t.o));
}

GraphView Store::view(ViewKind kind) const {
  switch (kind) {
    case ViewKind::Base: return GraphView(dict_, base_);
    case ViewKind::Delta: return GraphView(dict_, delta_);
    case ViewKind::Union: return GraphView(dict_, base_, &delta_);
  }
  return GraphView(dict_, base_);
}

void Store::set_delta(std::vector<EncodedTriple> derived) {
  std::erase_if(derived, [&](const EncodedTriple& t) { return base_.contains(t); });
  delta_ = AdjacencyIndex::build(config_.index_kind, std::move(derived));
}

namespace {

void write_dictionary(const fs::path& dir, const Dictionary& dict, std::uint64_t cache) {
  auto kind = static_cast<std::uint8_t>(dict.index_kind());
  {
    BufferedOut f(dir / kDictForwardFile, cache);
    io::put_header(f.stream(), io::FileType::DictForward, kind);
    io::put<std::uint64_t>(f.stream(), dict.size());
    dict.for_each_forward([&](const std::string& token, TermId id) {
      io::put_string(f.stream(), token);
      io::put<std::uint64_t>(f.stream(), id.value);
    });
    f.close();
  }
  {
    BufferedOut f(dir / kDictReverseFile, cache);
    io::put_header(f.stream(), io::FileType::DictReverse, kind);
    io::put<std::uint64_t>(f.stream(), dict.next_even().value);
    io::put<std::uint64_t>(f.stream(), dict.next_odd().value);
    io::put<std::uint64_t>(f.stream(), dict.size());
    for (TermId id : dict.ids()) {
      io::put<std::uint64_t>(f.stream(), id.value);
      write_term(f.stream(), dict.decode(id));
    }
    f.close();
  }
}

void write_meta(const fs::path& dir, const StoreConfig& config, const Dictionary& dict, const AdjacencyIndex& base,
                const AdjacencyIndex& delta) {
  BufferedOut f(dir / kMetaFile, config.cache_size_bytes);
  io::put_header(f.stream(), io::FileType::Meta, static_cast<std::uint8_t>(config.index_kind));
  io::put<std::uint64_t>(f.stream(), config.cache_size_bytes);
  io::put<std::uint64_t>(f.stream(), base.triple_count());
  io::put<std::uint64_t>(f.stream(), delta.triple_count());
  io::put<std::uint64_t>(f.stream(), dict.size());
  io::put<std::uint64_t>(f.stream(), dict.literal_count());
  f.close();
}

void write_adjacency(const fs::path& file, io::FileType type, const AdjacencyIndex& idx, std::uint64_t cache) {
  BufferedOut f(file, cache);
  io::put_header(f.stream(), type, static_cast<std::uint8_t>(idx.index_kind()));
  idx.write(f.stream());
  f.close();
}

}  // namespace

void Store::persist() const {
  std::error_code ec;
  fs::create_directories(config_.path, ec);
  if (ec) throw IoFailure("cannot create store directory " + config_.path.string() + ": " + ec.message());
  const auto cache = config_.cache_size_bytes;
  write_dictionary(config_.path, dict_, cache);
  write_adjacency(config_.path / kAdjacencyFile, io::FileType::Adjacency, base_, cache);
  {
    BufferedOut f(config_.path / kCountsFile, cache);
    io::put_header(f.stream(), io::FileType::Counts, static_cast<std::uint8_t>(config_.index_kind));
    base_.write_counts(f.stream());
    f.close();
  }
  fs::remove(config_.path / kDeltaFile, ec);
  write_meta(config_.path, config_, dict_, base_, delta_);
}

void Store::save_delta() const {
  if (config_.path.empty()) throw IoFailure("store has no backing directory");
  const auto cache = config_.cache_size_bytes;
  write_dictionary(config_.path, dict_, cache);
  write_adjacency(config_.path / kDeltaFile, io::FileType::Delta, delta_, cache);
  write_meta(config_.path, config_, dict_, base_, delta_);
}

Store Store::open(const fs::path& path) {
  if (!fs::is_directory(path)) throw IoFailure("store directory not found: " + path.string());
  Store st;
  st.config_.path = path;

  std::uint64_t base_triples = 0;
  std::uint64_t delta_triples = 0;
  std::uint64_t term_count = 0;
  std::uint64_t literal_count = 0;
  {
    auto in = open_in(path / kMetaFile);
    st.config_.index_kind = static_cast<IndexKind>(io::check_header(in, io::FileType::Meta, kMetaFile));
    st.config_.cache_size_bytes = io::get<std::uint64_t>(in);
    base_triples = io::get<std::uint64_t>(in);
    delta_triples = io::get<std::uint64_t>(in);
    term_count = io::get<std::uint64_t>(in);
    literal_count = io::get<std::uint64_t>(in);
    io::expect_eof(in, kMetaFile);
    if (st.config_.cache_size_bytes == 0) throw StoreCorrupt("meta: zero cache size");
  }
  const auto kind = st.config_.index_kind;
  const auto kind_byte = static_cast<std::uint8_t>(kind);

  {
    auto in = open_in(path / kDictReverseFile);
    if (io::check_header(in, io::FileType::DictReverse, kDictReverseFile) != kind_byte)
      throw StoreCorrupt("dict_rev: index kind disagrees with meta");
    auto next_even = io::get<std::uint64_t>(in);
    auto next_odd = io::get<std::uint64_t>(in);
    auto n = io::get<std::uint64_t>(in);
    if (n != term_count) throw StoreCorrupt("dict_rev: term count disagrees with meta");
    std::vector<Term> resources;
    std::vector<Term> literals;
    for (std::uint64_t i = 0; i < n; ++i) {
      TermId id{io::get<std::uint64_t>(in)};
      Term t = read_term(in);
      auto& bucket = id.is_literal() ? literals : resources;
      std::uint64_t expected = id.is_literal() ? 2 * bucket.size() + 1 : 2 * (bucket.size() + 1);
      if (id.value != expected) throw StoreCorrupt("dict_rev: ids not dense in parity class");
      if (t.is_literal() != id.is_literal()) throw StoreCorrupt("dict_rev: id parity does not match term kind");
      bucket.push_back(std::move(t));
    }
    io::expect_eof(in, kDictReverseFile);
    if (literals.size() != literal_count) throw StoreCorrupt("dict_rev: literal count disagrees with meta");
    try {
      st.dict_ = Dictionary::from_reverse(kind, std::move(resources), std::move(literals));
    } catch (const StoreCorrupt&) {
      throw;
    } catch (const Error& e) {
      throw StoreCorrupt(std::string("dict_rev: ") + e.what());
    }
    if (st.dict_.next_even().value != next_even || st.dict_.next_odd().value != next_odd)
      throw StoreCorrupt("dict_rev: id counters disagree with contents");
  }
  {
    auto in = open_in(path / kDictForwardFile);
    if (io::check_header(in, io::FileType::DictForward, kDictForwardFile) != kind_byte)
      throw StoreCorrupt("dict_fwd: index kind disagrees with meta");
    auto n = io::get<std::uint64_t>(in);
    if (n != term_count) throw StoreCorrupt("dict_fwd: term count disagrees with meta");
    for (std::uint64_t i = 0; i < n; ++i) {
      std::string token = io::get_string(in);
      TermId id{io::get<std::uint64_t>(in)};
      if (!st.dict_.contains(id) || st.dict_.decode(id).to_ntriples() != token)
        throw StoreCorrupt("dict_fwd: entry disagrees with dict_rev: " + token);
    }
    io::expect_eof(in, kDictForwardFile);
  }
  {
    auto adj = open_in(path / kAdjacencyFile);
    auto counts = open_in(path / kCountsFile);
    if (io::check_header(adj, io::FileType::Adjacency, kAdjacencyFile) != kind_byte ||
        io::check_header(counts, io::FileType::Counts, kCountsFile) != kind_byte)
      throw StoreCorrupt("adj: index kind disagrees with meta");
    st.base_ = AdjacencyIndex::read(kind, adj, &counts);
    io::expect_eof(adj, kAdjacencyFile);
    io::expect_eof(counts, kCountsFile);
    if (st.base_.triple_count() != base_triples) throw StoreCorrupt("adj: triple count disagrees with meta");
  }
  st.delta_ = AdjacencyIndex(kind);
  if (fs::exists(path / kDeltaFile)) {
    auto in = open_in(path / kDeltaFile);
    if (io::check_header(in, io::FileType::Delta, kDeltaFile) != kind_byte)
      throw StoreCorrupt("delta: index kind disagrees with meta");
    st.delta_ = AdjacencyIndex::read(kind, in, nullptr);
    io::expect_eof(in, kDeltaFile);
  }
  if (st.delta_.triple_count() != delta_triples) throw StoreCorrupt("delta: triple count disagrees with meta");

  for (const auto* idx : {&st.base_, &st.delta_}) {
    for (TermId k : idx->keys()) {
      if (!st.dict_.contains(k)) throw StoreCorrupt("index references unknown term id " + std::to_string(k.value));
      for (const auto& po : idx->neighbors(k)) {
        if (!st.dict_.contains(po.pred) || !st.dict_.contains(po.obj))
          throw StoreCorrupt("index references unknown term id");
      }
    }
  }
  return st;
}

}  // namespace ldm3n
