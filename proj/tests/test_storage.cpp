#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "ldm3n/errors.hpp"
#include "ldm3n/storage.hpp"
#include "support.hpp"

using namespace ldm3n;
using namespace ldm3n::test;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("ldm3n_test_" + name)) {
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

Store load_politicians(const fs::path& dir, IndexKind kind = IndexKind::Hash) {
  StoreConfig cfg;
  cfg.path = dir;
  cfg.index_kind = kind;
  return Store::load(cfg, politicians());
}

}  // namespace

TEST_CASE("store: politician example layout") {
  for (IndexKind kind : {IndexKind::Hash, IndexKind::Ordered}) {
    LoadReport report;
    Store st = Store::build(politicians(), kind, &report);
    CHECK(report.distinct_triples == 6);
    CHECK(report.distinct_terms == 10);
    CHECK(st.dictionary().size() == 10);
    const auto& base = st.base();
    CHECK(base.triple_count() == 6);
    CHECK(base.key_count() == 3);
    CHECK(base.pair_count(id_of(st, "BillClinton")) == 2);
    CHECK(base.pair_count(id_of(st, "holdsPos#1")) == 2);
    CHECK(base.pair_count(id_of(st, "holdsPos#2")) == 2);

    auto n = base.neighbors(id_of(st, "holdsPos#1"));
    std::vector<PredObj> expected{{id_of(st, "singletonPropOf"), id_of(st, "holdsPos")},
                                  {id_of(st, "hasSuccessor"), id_of(st, "GeorgeWBush")}};
    std::sort(expected.begin(), expected.end());
    CHECK(std::vector<PredObj>(n.begin(), n.end()) == expected);
    CHECK(base.neighbors(id_of(st, "GeorgeWBush")).empty());
    CHECK(base.neighbors(TermId{1}).empty());
    CHECK(base.pair_count(TermId{1000}) == 0);
  }
}

TEST_CASE("store: empty input and duplicates") {
  LoadReport r0;
  Store empty = Store::build({}, IndexKind::Hash, &r0);
  CHECK(empty.base().empty());
  CHECK(empty.dictionary().size() == 0);

  auto ts = politicians();
  ts.push_back(ts[2]);
  LoadReport r1;
  Store st = Store::build(ts, IndexKind::Hash, &r1);
  CHECK(r1.triples_read == 7);
  CHECK(r1.duplicates == 1);
  CHECK(st.base().triple_count() == 6);
  CHECK(st.base().triples() == Store::build(politicians()).base().triples());
}

TEST_CASE("store: pair_count equals neighbor count on random loads") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 20; ++round) {
    auto ts = random_triples(rng, 1 + rng() % 200);
    Store st = Store::build(ts, round % 2 ? IndexKind::Ordered : IndexKind::Hash);
    std::map<TermId, std::set<PredObj>> recount;
    for (const auto& t : ts) {
      EncodedTriple e{*st.dictionary().find(t.subject()), *st.dictionary().find(t.predicate()),
                      *st.dictionary().find(t.object())};
      recount[e.s].insert({e.p, e.o});
    }
    for (TermId id : st.dictionary().ids()) {
      auto n = st.base().neighbors(id);
      CHECK(st.base().pair_count(id) == n.size());
      CHECK(n.size() == (recount.count(id) ? recount[id].size() : 0));
      CHECK(std::is_sorted(n.begin(), n.end()));
    }
  }
}

TEST_CASE("store: persist and reopen") {
  for (IndexKind kind : {IndexKind::Hash, IndexKind::Ordered}) {
    TempDir dir("reopen");
    Store st = load_politicians(dir.path, kind);
    Store re = Store::open(dir.path);
    CHECK(re.config().index_kind == kind);
    CHECK(re.dictionary().size() == 10);
    CHECK(re.base().triples() == st.base().triples());
    for (TermId id : st.dictionary().ids()) CHECK(re.dictionary().decode(id) == st.dictionary().decode(id));
  }
}

TEST_CASE("store: a small cache still writes everything") {
  TempDir dir("cache");
  std::mt19937_64 rng(3);
  auto ts = random_triples(rng, 500);
  StoreConfig cfg;
  cfg.path = dir.path;
  cfg.cache_size_bytes = 64;
  Store st = Store::load(cfg, ts);
  Store re = Store::open(dir.path);
  CHECK(re.base().triples() == st.base().triples());
  CHECK(re.config().cache_size_bytes == 64);
}

TEST_CASE("store: streaming load") {
  TempDir dir("stream");
  std::istringstream in(serialize_ntriples(politicians()) + "not a triple\n");
  StoreConfig cfg;
  cfg.path = dir.path;
  LoadReport report;
  Store::load(cfg, in, ParseMode::Lenient, &report);
  CHECK(report.lines_skipped == 1);
  CHECK(Store::open(dir.path).base().triple_count() == 6);

  std::istringstream bad("not a triple\n");
  TempDir dir2("stream_strict");
  cfg.path = dir2.path;
  CHECK_THROWS_AS(Store::load(cfg, bad, ParseMode::Strict), MalformedLine);
}

TEST_CASE("store: corruption is detected") {
  TempDir dir("corrupt");
  auto fresh = [&] {
    fs::remove_all(dir.path);
    load_politicians(dir.path);
  };
  auto rewrite = [&](const std::string& file, auto mutate) {
    fs::path p = dir.path / file;
    std::ifstream in(p, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)), {});
    in.close();
    mutate(bytes);
    std::ofstream(p, std::ios::binary | std::ios::trunc) << bytes;
  };

  CHECK_THROWS_AS(Store::open(dir.path / "nope"), IoFailure);

  for (const char* file : {"meta", "dict_fwd", "dict_rev", "adj", "adj_count"}) {
    CAPTURE(file);
    fresh();
    rewrite(file, [](std::string& b) { b[0] = 'X'; });
    CHECK_THROWS_AS(Store::open(dir.path), StoreCorrupt);
    fresh();
    rewrite(file, [](std::string& b) { b.resize(b.size() - 3); });
    CHECK_THROWS_AS(Store::open(dir.path), StoreCorrupt);
    fresh();
    rewrite(file, [](std::string& b) { b += "junk"; });
    CHECK_THROWS_AS(Store::open(dir.path), StoreCorrupt);
  }

  fresh();
  fs::remove(dir.path / "adj");
  CHECK_THROWS_AS(Store::open(dir.path), IoFailure);
}

TEST_CASE("graph view: base, delta, union") {
  Store st = Store::build(politicians());
  EncodedTriple extra = st.encode(ex_triple("GeorgeWBush", "hasSuccessor", "BarackObama"));
  EncodedTriple dup{id_of(st, "BillClinton"), id_of(st, "holdsPos#1"), id_of(st, "U.S.President")};
  st.set_delta({extra, dup});
  CHECK(st.delta().triple_count() == 1);
  CHECK(st.view(ViewKind::Base).triple_count() == 6);
  CHECK(st.view(ViewKind::Delta).triple_count() == 1);
  CHECK(st.view(ViewKind::Union).triple_count() == 7);
  CHECK(st.view(ViewKind::Union).contains(extra));
  CHECK_FALSE(st.view(ViewKind::Base).contains(extra));
  CHECK(st.view(ViewKind::Union).pair_count(id_of(st, "GeorgeWBush")) == 1);
  auto all = st.view(ViewKind::Union).triples();
  CHECK(std::is_sorted(all.begin(), all.end()));
  CHECK(parse_view_kind("union") == ViewKind::Union);
  CHECK_THROWS(parse_view_kind("both"));
}

TEST_CASE("store: delta persists") {
  TempDir dir("delta");
  Store st = load_politicians(dir.path);
  EncodedTriple extra = st.encode(ex_triple("GeorgeWBush", "hasSuccessor", "BarackObama"));
  st.set_delta({extra});
  st.save_delta();
  Store re = Store::open(dir.path);
  CHECK(re.delta().triple_count() == 1);
  CHECK(re.dictionary().size() == 11);
  CHECK(re.decode(re.delta().triples()[0]) == ex_triple("GeorgeWBush", "hasSuccessor", "BarackObama"));
}
