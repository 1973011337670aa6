#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "signpipe/error.hpp"
#include "signpipe/random.hpp"
#include "signpipe/textgen/corrupt.hpp"

using namespace signpipe;
using namespace signpipe::textgen;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::IoError;
}

CorruptConfig only(double shuffle, double del, double sub, double ins) {
  CorruptConfig cfg;
  cfg.p_shuffle = shuffle;
  cfg.p_delete = del;
  cfg.p_substitute = sub;
  cfg.p_insert = ins;
  cfg.vocab = {"x", "y", "z"};
  return cfg;
}

Tokens sorted(Tokens t) {
  std::sort(t.begin(), t.end());
  return t;
}

Tokens random_sentence(Rng& rng) {
  static const char* words[] = {"我", "你", "去", "学校", "the", "cat", "sat", "on", "mat", "x"};
  Tokens t(1 + rng.below(12));
  for (auto& w : t) w = words[rng.below(10)];
  return t;
}

}  // namespace

TEST_CASE("replay") {
  const Tokens abc{"a", "b", "c"};
  CHECK(replay(abc, {}) == abc);
  CHECK(replay(abc, {{EditOp::Delete, 1, 0, {}}}) == Tokens{"a", "c"});
  CHECK(replay({"a", "b"}, {{EditOp::Substitute, 1, 0, "x"}, {EditOp::Insert, 0, 0, "y"}}) ==
        Tokens{"y", "a", "x"});
  CHECK(replay(abc, {{EditOp::Swap, 2, 0, {}}}) == Tokens{"c", "b", "a"});
  CHECK(replay(abc, {{EditOp::Insert, 3, 0, "d"}}) == Tokens{"a", "b", "c", "d"});
  CHECK(code_of([&] { replay(abc, {{EditOp::Delete, 3, 0, {}}}); }) == ErrorCode::InvalidEdit);
  CHECK(code_of([&] { replay(abc, {{EditOp::Delete, 0, 0, {}}, {EditOp::Substitute, 2, 0, "q"}}); }) ==
        ErrorCode::InvalidEdit);
  CHECK(code_of([&] { replay(abc, {{EditOp::Insert, 4, 0, "d"}}); }) == ErrorCode::InvalidEdit);
  CHECK(code_of([&] { replay(abc, {{EditOp::Swap, 0, 5, {}}}); }) == ErrorCode::InvalidEdit);
}

TEST_CASE("corrupt single-operation behaviour") {
  const Tokens abc{"a", "b", "c"};

  SUBCASE("identity") {
    const auto r = corrupt(abc, only(0, 0, 0, 0));
    CHECK(r.corrupted == abc);
    CHECK(r.edits.empty());
  }
  SUBCASE("delete everything with no floor") {
    auto cfg = only(0, 1, 0, 0);
    cfg.min_length = 0;
    CHECK(corrupt(abc, cfg).corrupted.empty());
    cfg.min_length = 1;
    CHECK(corrupt(abc, cfg).corrupted.size() == 1);
  }
  SUBCASE("length and multiset properties") {
    Rng rng(12);
    for (int i = 0; i < 300; ++i) {
      const auto s = random_sentence(rng);
      auto cfg = only(1, 0, 0, 0);
      cfg.shuffle_window = s.size();
      cfg.seed = rng.next();
      CHECK(sorted(corrupt(s, cfg).corrupted) == sorted(s));
      cfg = only(0.5, 0, 0, 0);
      cfg.seed = rng.next();
      CHECK(sorted(corrupt(s, cfg).corrupted) == sorted(s));
      cfg = only(0, 0.5, 0, 0);
      cfg.seed = rng.next();
      CHECK(corrupt(s, cfg).corrupted.size() <= s.size());
      cfg = only(0, 0, 0.5, 0);
      cfg.seed = rng.next();
      CHECK(corrupt(s, cfg).corrupted.size() == s.size());
      cfg = only(0, 0, 0, 0.5);
      cfg.seed = rng.next();
      CHECK(corrupt(s, cfg).corrupted.size() >= s.size());
    }
  }
  SUBCASE("window limits displacement of a single step") {
    auto cfg = only(1, 0, 0, 0);
    cfg.shuffle_window = 2;
    cfg.seed = 3;
    const Tokens s{"0", "1", "2", "3", "4", "5", "6", "7"};
    const auto r = corrupt(s, cfg);
    for (const auto& e : r.edits) {
      CHECK(e.op == EditOp::Swap);
      CHECK(e.position - e.other == 1);
    }
  }
  SUBCASE("substitutes always change the token") {
    auto cfg = only(0, 0, 1, 0);
    cfg.vocab = {"a", "q"};
    const auto r = corrupt({"a", "a", "q"}, cfg);
    CHECK(r.corrupted == Tokens{"q", "q", "a"});
    cfg.vocab = {"a"};
    CHECK(corrupt({"a"}, cfg).edits.empty());
  }
  SUBCASE("errors") {
    CHECK(code_of([&] { corrupt({}, only(0, 0, 0, 0)); }) == ErrorCode::EmptyInput);
    auto cfg = only(0, 0, 0.1, 0);
    cfg.vocab.clear();
    CHECK(code_of([&] { corrupt(abc, cfg); }) == ErrorCode::EmptyVocab);
    CHECK(code_of([&] { corrupt(abc, only(1.5, 0, 0, 0)); }) == ErrorCode::InvalidConfig);
    cfg = only(0, 0, 0, 0);
    cfg.shuffle_window = 0;
    CHECK(code_of([&] { corrupt(abc, cfg); }) == ErrorCode::InvalidConfig);
  }
}

TEST_CASE("replay closure over mixed configurations") {
  Rng rng(2024);
  for (int i = 0; i < 2000; ++i) {
    auto cfg = only(rng.uniform(), rng.uniform() * 0.6, rng.uniform(), rng.uniform() * 0.6);
    cfg.shuffle_window = 1 + rng.below(6);
    cfg.min_length = rng.below(2);
    cfg.seed = rng.next();
    const auto s = random_sentence(rng);
    const auto r = corrupt(s, cfg);
    CHECK(replay(r.clean, r.edits) == r.corrupted);
    CHECK(r.corrupted.size() >= std::min(cfg.min_length, s.size()));
    CHECK(record_from_json(nlohmann::json::parse(record_to_json(r).dump())) == r);
  }
}

TEST_CASE("generate_corpus") {
  const std::vector<Tokens> sentences{{"a", "b", "c"}, {"d", "e"}};
  auto cfg = only(0.3, 0.3, 0.3, 0.3);
  cfg.seed = 77;

  const auto recs = generate_corpus(sentences, cfg, 3);
  REQUIRE(recs.size() == 6);
  for (std::size_t k = 0; k < 6; ++k) CHECK(recs[k].clean == sentences[k / 3]);
  CHECK(generate_corpus(sentences, cfg, 0).empty());

  std::ostringstream a, b, c;
  write_records(a, recs);
  write_records(b, generate_corpus(sentences, cfg, 3));
  write_records(c, generate_corpus(sentences, cfg, 3, 8));
  CHECK(a.str() == b.str());
  CHECK(a.str() == c.str());
  const auto text = a.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 6);

  CHECK(recs[0].seed == derive_seed(77, {0, 0}));
  CHECK(recs[4].seed == derive_seed(77, {1, 1}));

  const std::vector<Tokens> with_empty{{"a"}, {}};
  try {
    generate_corpus(with_empty, cfg, 1);
    FAIL("expected an Error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyInput);
    CHECK(e.detail().rfind("sentence 1:", 0) == 0);
  }
}
