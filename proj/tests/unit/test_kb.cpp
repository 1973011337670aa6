#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include "fixtures.hpp"
#include "signpipe/error.hpp"
#include "signpipe/kb/kb_io.hpp"
#include "signpipe/kb/keypoints.hpp"
#include "signpipe/kb/split.hpp"
#include "signpipe/kb/validate.hpp"
#include "signpipe/random.hpp"

using namespace signpipe;
using namespace signpipe::kb;
using nlohmann::json;

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

json flat_list(std::size_t n_values, double confidence = 0.5) {
  json a = json::array();
  for (std::size_t i = 0; i < n_values; ++i) a.push_back(i % 3 == 2 ? confidence : double(i));
  return a;
}

}  // namespace

TEST_CASE("layout point counts") {
  CHECK(Layout::openpose().point_count() == 67);
  CHECK(Layout::mediapipe().point_count() == 75);
  CHECK(Layout::custom(5).point_count() == 5);
  CHECK(Layout::parse("custom:12") == Layout::custom(12));
  CHECK(Layout::parse(Layout::mediapipe().name()) == Layout::mediapipe());
  CHECK(code_of([] { Layout::parse("custom:x"); }) == ErrorCode::MalformedDocument);
}

TEST_CASE("parse_openpose_frame") {
  SUBCASE("201 floats give 67 points in order") {
    const auto frame = parse_openpose_frame(flat_list(201));
    REQUIRE(frame.points.size() == 67);
    CHECK(frame.layout == Layout::openpose());
    CHECK(frame.points[0] == Keypoint{0, 1, 0.5});
    CHECK(frame.points[66] == Keypoint{198, 199, 0.5});
  }
  SUBCASE("single triple with a custom layout") {
    const auto frame = parse_openpose_frame(json::array({0, 0, 1}), Layout::custom(1));
    REQUIRE(frame.points.size() == 1);
    CHECK(frame.points[0] == Keypoint{0, 0, 1.0});
  }
  SUBCASE("200 floats are malformed") {
    CHECK(code_of([] { parse_openpose_frame(flat_list(200)); }) == ErrorCode::MalformedDocument);
  }
  SUBCASE("count must match the layout") {
    CHECK(code_of([] { parse_openpose_frame(flat_list(6)); }) == ErrorCode::MalformedDocument);
  }
  SUBCASE("OpenPose object concatenates body and hands") {
    json person;
    person["pose_keypoints_2d"] = flat_list(75);
    person["hand_left_keypoints_2d"] = flat_list(63);
    person["hand_right_keypoints_2d"] = flat_list(63);
    const auto frame = parse_openpose_frame(json{{"people", json::array({person})}});
    CHECK(frame.points.size() == 67);
    CHECK(frame.points[25] == Keypoint{0, 1, 0.5});
  }
  SUBCASE("confidence tolerance") {
    auto ok = json::array({1, 2, 1.0 + 5e-7});
    CHECK(parse_openpose_frame(ok, Layout::custom(1)).points[0].confidence == 1.0);
    auto low = json::array({1, 2, -5e-7});
    CHECK(parse_openpose_frame(low, Layout::custom(1)).points[0].confidence == 0.0);
    auto bad = json::array({1, 2, 1.0 + 2e-6});
    CHECK(code_of([&] { parse_openpose_frame(bad, Layout::custom(1)); }) ==
          ErrorCode::OutOfRangeConfidence);
  }
  SUBCASE("non-finite values") {
    CHECK(code_of([] { checked_keypoint(std::numeric_limits<double>::quiet_NaN(), 0, 1); }) ==
          ErrorCode::NonFinite);
    CHECK(code_of([] { checked_keypoint(0, std::numeric_limits<double>::infinity(), 1); }) ==
          ErrorCode::NonFinite);
  }
}

TEST_CASE("parse_mediapipe_frame") {
  SUBCASE("pairs default to confidence 1") {
    json pairs = json::array();
    for (int i = 0; i < 75; ++i) pairs.push_back(json::array({0.01 * i, 0.5}));
    const auto frame = parse_mediapipe_frame(pairs);
    REQUIRE(frame.points.size() == 75);
    CHECK(std::all_of(frame.points.begin(), frame.points.end(),
                      [](const Keypoint& k) { return k.confidence == 1.0; }));

    json flat = json::array();
    for (int i = 0; i < 150; ++i) flat.push_back(0.25);
    CHECK(parse_mediapipe_frame(flat).points[74] == Keypoint{0.25, 0.25, 1.0});
  }
  SUBCASE("one confidence of 1.5 is out of range") {
    json triples = json::array();
    for (int i = 0; i < 75; ++i) triples.push_back(json::array({0.1, 0.2, i == 40 ? 1.5 : 0.9}));
    CHECK(code_of([&] { parse_mediapipe_frame(triples); }) == ErrorCode::OutOfRangeConfidence);
  }
  SUBCASE("empty document") {
    CHECK(code_of([] { parse_mediapipe_frame(json::array()); }) == ErrorCode::MalformedDocument);
  }
  SUBCASE("holistic object with visibility") {
    json doc;
    doc["pose_landmarks"] = json::array();
    for (int i = 0; i < 33; ++i) doc["pose_landmarks"].push_back({{"x", 0.5}, {"y", 0.25}, {"visibility", 0.75}});
    doc["left_hand_landmarks"] = json::array();
    doc["right_hand_landmarks"] = json::array();
    for (int i = 0; i < 21; ++i) {
      doc["left_hand_landmarks"].push_back({{"x", 0.1}, {"y", 0.2}});
      doc["right_hand_landmarks"].push_back({{"x", 0.3}, {"y", 0.4}});
    }
    const auto frame = parse_mediapipe_frame(doc);
    REQUIRE(frame.points.size() == 75);
    CHECK(frame.points[0] == Keypoint{0.5, 0.25, 0.75});
    CHECK(frame.points[33] == Keypoint{0.1, 0.2, 1.0});
    CHECK(frame.points[74] == Keypoint{0.3, 0.4, 1.0});
  }
}

TEST_CASE("validate_kb") {
  KnowledgeBase kb;
  kb.embedding_dim = 2;
  kb.put(testing::entry("你好", {1, 0}));
  kb.put(testing::entry("世界", {0, 1}));
  kb.put(testing::entry("再见", {1, 1}));

  SUBCASE("well-formed KB") { CHECK(validate_kb(kb).ok()); }
  SUBCASE("zero-norm embedding names its symbol") {
    kb.put(testing::entry("零", {0, 0}));
    const auto report = validate_kb(kb);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].kind == ViolationKind::ZeroNormEmbedding);
    CHECK(report.violations[0].symbol == "零");
  }
  SUBCASE("duplicate symbols in raw records") {
    std::vector<GlossEntry> raw{testing::entry("你好", {1, 0}), testing::entry("你好", {0, 1})};
    const auto report = validate_entries(raw, 2);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].kind == ViolationKind::DuplicateSymbol);
    CHECK(report.violations[0].symbol == "你好");
  }
  SUBCASE("dimension mismatch and empty pose") {
    auto e = testing::entry("短", {1, 2, 3});
    e.pose.frames.clear();
    kb.put(e);
    const auto report = validate_kb(kb);
    REQUIRE(report.violations.size() == 2);
    CHECK(report.violations[0].kind == ViolationKind::DimensionMismatch);
    CHECK(report.violations[1].kind == ViolationKind::EmptyPose);
  }
  SUBCASE("entries without embeddings are fine") {
    auto e = testing::entry("无", {});
    e.embedding.reset();
    kb.put(e);
    CHECK(validate_kb(kb).ok());
  }
}

TEST_CASE("split_sizes follows the 80/10/10 rounding rule") {
  CHECK(split_sizes(10) == SplitSizes{8, 1, 1});
  CHECK(split_sizes(1) == SplitSizes{1, 0, 0});
  CHECK(split_sizes(5) == SplitSizes{4, 1, 0});
  CHECK(split_sizes(15) == SplitSizes{12, 2, 1});
  CHECK(split_sizes(1000) == SplitSizes{800, 100, 100});
}

TEST_CASE("split_dataset") {
  std::vector<std::string> ids;
  for (int i = 0; i < 1000; ++i) ids.push_back("id" + std::to_string(i));

  SUBCASE("order independence and determinism") {
    const auto a = split_dataset(ids, 42);
    auto shuffled = ids;
    Rng rng(7);
    rng.shuffle(std::span<std::string>(shuffled));
    CHECK(split_dataset(shuffled, 42) == a);
    CHECK(a.train.size() == 800);
    CHECK(a.seed == 42);
    CHECK_FALSE(split_dataset(ids, 43) == a);
  }
  SUBCASE("errors") {
    CHECK(code_of([] { split_dataset({}, 1); }) == ErrorCode::EmptyInput);
    CHECK(code_of([] { split_dataset({"a", "b", "a"}, 1); }) == ErrorCode::DuplicateIds);
  }
  SUBCASE("single id lands in train") {
    const auto s = split_dataset({"only"}, 3);
    CHECK(s.train == std::set<std::string>{"only"});
    CHECK(s.dev.empty());
    CHECK(s.test.empty());
  }
}

TEST_CASE("KB JSONL round trip") {
  KnowledgeBase kb;
  kb.embedding_dim = 3;
  kb.put(testing::entry("你好", {0.1, 1.0 / 3.0, -2.5e-300}, {"您好", "hi"}));
  auto e = testing::entry("世界", {1e-17, 0.30000000000000004, 7});
  e.pose.frames[0].layout = Layout::custom(2);
  kb.put(e);
  auto bare = testing::entry("空", {});
  bare.embedding.reset();
  kb.put(bare);

  testing::TempDir dir("kb");
  save_kb(kb, dir / "kb.jsonl");
  CHECK(load_kb(dir / "kb.jsonl") == kb);

  std::stringstream a, b;
  save_kb(kb, a);
  save_kb(load_kb(dir / "kb.jsonl"), b);
  CHECK(a.str() == b.str());
}

TEST_CASE("KB loading errors") {
  SUBCASE("unknown version") {
    std::istringstream in(R"({"version":"v999","embedding_dim":2})" "\n");
    CHECK(code_of([&] { load_kb(in); }) == ErrorCode::SchemaVersionMismatch);
  }
  SUBCASE("record missing symbol reports its line") {
    std::istringstream in(
        R"({"version":"kb/1","embedding_dim":2})" "\n"
        R"({"symbol":"a","synonyms":[],"embedding":[1,0],"pose":{"layout":"custom:1","fps":25,"frames":[[0,0,1]]}})" "\n"
        R"({"synonyms":[],"embedding":[1,0],"pose":{"layout":"custom:1","fps":25,"frames":[[0,0,1]]}})" "\n");
    try {
      load_kb(in);
      FAIL("expected MalformedRecord");
    } catch (const LineError& e) {
      CHECK(e.code() == ErrorCode::MalformedRecord);
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("duplicate symbol is malformed at the second line") {
    const std::string rec =
        R"({"symbol":"a","embedding":null,"pose":{"layout":"custom:1","fps":25,"frames":[[0,0,1]]}})";
    std::istringstream in(R"({"version":"kb/1","embedding_dim":2})" "\n" + rec + "\n" + rec + "\n");
    try {
      load_kb(in);
      FAIL("expected MalformedRecord");
    } catch (const LineError& e) {
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("missing file") {
    CHECK(code_of([] { load_kb(std::filesystem::path("/nonexistent/kb.jsonl")); }) == ErrorCode::IoError);
  }
}
