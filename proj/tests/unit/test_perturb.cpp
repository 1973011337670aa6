#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "signpipe/error.hpp"
#include "signpipe/perturb/clip_io.hpp"
#include "signpipe/perturb/motion.hpp"
#include "signpipe/perturb/pipeline.hpp"

using namespace signpipe;
using namespace signpipe::perturb;

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

FrameGrid random_frame(Rng& rng, FrameShape shape) {
  std::vector<float> v(shape.values());
  for (auto& x : v) x = static_cast<float>(rng.uniform());
  return FrameGrid(shape, std::move(v));
}

VideoClip random_clip(Rng& rng, FrameShape shape, std::size_t frames, std::size_t landmarks) {
  VideoClip clip;
  std::vector<Landmarks> track;
  for (std::size_t t = 0; t < frames; ++t) {
    clip.frames.push_back(random_frame(rng, shape));
    Landmarks pts;
    for (std::size_t i = 0; i < landmarks; ++i) {
      pts.push_back({rng.uniform() * shape.width, rng.uniform() * shape.height, 1.0});
    }
    track.push_back(std::move(pts));
  }
  clip.landmarks = std::move(track);
  return clip;
}

std::vector<float> sorted_values(const std::vector<FrameGrid>& frames) {
  std::vector<float> all;
  for (const auto& f : frames) all.insert(all.end(), f.values().begin(), f.values().end());
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace

TEST_CASE("landmark_speed") {
  CHECK(landmark_speed({0, 0, 1}, {0, 0, 1}) == 0.0);
  CHECK(landmark_speed({0, 0, 1}, {3, 4, 1}) == 5.0);
  CHECK(landmark_speed({1, 1, 1}, {1, 2, 1}) == 1.0);
}

TEST_CASE("fast_motion_mask") {
  VideoClip clip;
  clip.frames = {FrameGrid({10, 10, 1}), FrameGrid({10, 10, 1})};

  SUBCASE("distance rule around a fast landmark") {
    // (0,1) -> (3,5): speed 5 > theta 3.
    clip.landmarks = std::vector<Landmarks>{{{0, 1, 1}}, {{3, 5, 1}}};
    const auto masks = fast_motion_mask(clip, 3.0, 2.0);
    REQUIRE(masks.size() == 2);
    CHECK(masks[0].empty());
    CHECK(masks[1].contains(5, 3));
    CHECK(masks[1].contains(6, 4));      // distance sqrt(2)
    CHECK_FALSE(masks[1].contains(5, 6));  // distance 3
    CHECK(masks[1].contains(5, 5));        // distance 2, on the boundary
    CHECK(masks[1].count() == 13);         // lattice points in a radius-2 disc
  }
  SUBCASE("stationary landmarks give empty masks") {
    clip.landmarks = std::vector<Landmarks>{{{4, 4, 1}, {1, 1, 1}}, {{4, 4, 1}, {1, 1, 1}}};
    for (const auto& m : fast_motion_mask(clip, 0.5, 3.0)) CHECK(m.empty());
  }
  SUBCASE("threshold semantics") {
    clip.landmarks = std::vector<Landmarks>{{{4, 4, 1}}, {{4.00001, 4, 1}}};
    CHECK(code_of([&] { fast_motion_mask(clip, 0.0, 1.0); }) == ErrorCode::InvalidConfig);
    CHECK(fast_motion_mask(clip, 1e-9, 0.0)[1].contains(4, 4));
    CHECK(fast_motion_mask(clip, 1e-5, 0.0)[1].empty());
  }
  SUBCASE("rounded landmark pixel is included even for tiny radii") {
    clip.landmarks = std::vector<Landmarks>{{{0, 0, 1}}, {{6.4, 2.4, 1}}};
    const auto masks = fast_motion_mask(clip, 1.0, 0.0);
    CHECK(masks[1].contains(2, 6));
    CHECK(masks[1].count() == 1);
  }
  SUBCASE("landmarks outside the frame are clipped") {
    clip.landmarks = std::vector<Landmarks>{{{-20, -20, 1}}, {{-1, -1, 1}}};
    const auto masks = fast_motion_mask(clip, 1.0, 2.0);
    CHECK(masks[1].contains(0, 0));
    CHECK_FALSE(masks[1].contains(2, 2));
  }
  SUBCASE("errors") {
    CHECK(code_of([&] { fast_motion_mask(clip, 1.0, 1.0); }) == ErrorCode::MissingLandmarks);
    VideoClip one;
    one.frames = {FrameGrid({4, 4, 1})};
    one.landmarks = std::vector<Landmarks>{{}};
    CHECK(code_of([&] { fast_motion_mask(one, 1.0, 1.0); }) == ErrorCode::TooShort);
    clip.landmarks = std::vector<Landmarks>{{{0, 0, 1}}, {}};
    CHECK(code_of([&] { fast_motion_mask(clip, 1.0, 1.0); }) == ErrorCode::ShapeMismatch);
  }
}

TEST_CASE("spatial ops") {
  Rng data(3);
  const FrameShape shape{6, 5, 3};
  const auto frame = random_frame(data, shape);
  MotionMask region(6, 5);
  for (std::size_t y = 1; y < 5; ++y)
    for (std::size_t x = 1; x < 4; ++x) region.set(y, x);

  auto region_values = [&](const FrameGrid& f) {
    std::vector<float> v;
    for (auto i : region.indices())
      for (float x : f.pixel(i)) v.push_back(x);
    std::sort(v.begin(), v.end());
    return v;
  };
  auto outside_equal = [&](const FrameGrid& a, const FrameGrid& b) {
    for (auto i : region.complement().indices()) {
      if (!std::equal(a.pixel(i).begin(), a.pixel(i).end(), b.pixel(i).begin())) return false;
    }
    return true;
  };

  SUBCASE("block occlusion over the whole region") {
    Rng rng(1);
    const auto out = apply_op(frame, BlockOcclude{64, 64}, region, rng);
    for (auto i : region.indices())
      for (float v : out.pixel(i)) CHECK(v == 0.0f);
    CHECK(outside_equal(out, frame));
  }
  SUBCASE("block occlusion never increases a value") {
    for (std::uint64_t s = 0; s < 20; ++s) {
      Rng rng(s);
      const auto out = apply_op(frame, BlockOcclude{2, 3}, region, rng);
      for (std::size_t i = 0; i < out.values().size(); ++i) CHECK(out.values()[i] <= frame.values()[i]);
      CHECK(outside_equal(out, frame));
    }
  }
  SUBCASE("pixel shuffle preserves the region multiset") {
    for (std::uint64_t s = 0; s < 20; ++s) {
      Rng rng(s);
      const auto out = apply_op(frame, PixelShuffle{}, region, rng);
      CHECK(region_values(out) == region_values(frame));
      CHECK(outside_equal(out, frame));
    }
  }
  SUBCASE("single-pixel shuffle is the identity") {
    MotionMask one(6, 5);
    one.set(2, 2);
    Rng rng(9);
    CHECK(apply_op(frame, PixelShuffle{}, one, rng) == frame);
    CHECK(apply_op(frame, RandomPixelReplace{1.0}, one, rng) == frame);
  }
  SUBCASE("zero sigma noise is the identity") {
    Rng rng(4);
    CHECK(apply_op(frame, LocalGaussianNoise{0.0}, region, rng) == frame);
  }
  SUBCASE("noise stays in range and inside the region") {
    Rng rng(4);
    const auto out = apply_op(frame, LocalGaussianNoise{2.0}, region, rng);
    for (float v : out.values()) CHECK((v >= 0.0f && v <= 1.0f));
    CHECK(outside_equal(out, frame));
    CHECK_FALSE(out == frame);
  }
  SUBCASE("random replacement draws from other region pixels") {
    Rng rng(5);
    const auto out = apply_op(frame, RandomPixelReplace{1.0}, region, rng);
    const auto idx = region.indices();
    for (auto i : idx) {
      const auto px = out.pixel(i);
      bool from_other = false;
      for (auto j : idx) {
        if (j != i && std::equal(px.begin(), px.end(), frame.pixel(j).begin())) from_other = true;
      }
      CHECK(from_other);
    }
    CHECK(outside_equal(out, frame));
    Rng rng0(5);
    CHECK(apply_op(frame, RandomPixelReplace{0.0}, region, rng0) == frame);
  }
  SUBCASE("empty region is the identity") {
    Rng rng(2);
    CHECK(apply_op(frame, BlockOcclude{3, 3}, MotionMask(6, 5), rng) == frame);
  }
}

TEST_CASE("op text round trip") {
  const auto ops = parse_op_list("pixel_shuffle, random_replace:0.25,block_occlude:4x6,gaussian_noise:0.1,temporal_shuffle");
  REQUIRE(ops.size() == 5);
  CHECK(std::get<RandomPixelReplace>(ops[1]).p == 0.25);
  CHECK(std::get<BlockOcclude>(ops[2]).block_h == 4);
  CHECK(std::get<BlockOcclude>(ops[2]).block_w == 6);
  CHECK(parse_op_list(to_string(ops)) == ops);
  CHECK(parse_op_list("").empty());
  CHECK(code_of([] { parse_op("blur"); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([] { parse_op("random_replace:1.5"); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([] { parse_op("block_occlude:0x2"); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("apply_perturbation") {
  Rng data(17);
  const FrameShape shape{8, 8, 1};

  SUBCASE("hand-evaluated weighted sum") {
    VideoClip clip;
    std::vector<float> v(64, 0.5f);
    v[3 * 8 + 4] = 0.8f;
    clip.frames = {FrameGrid(shape, v)};
    MotionMask m(8, 8);
    m.set(3, 4);
    PerturbConfig cfg;
    cfg.ops_large = {BlockOcclude{1, 1}};
    cfg.ops_small = {};
    const auto pair = apply_perturbation(clip, {m}, cfg);
    const float out = pair.perturbed.frames[0].at(3, 4);
    CHECK(out == doctest::Approx(0.7 * 0.0 + 0.3 * 0.8).epsilon(1e-7));
    CHECK(std::abs(out - 0.24f) < 1e-7f);
    // Pixels outside M with no small op: 0.7 v + 0.3 v == v.
    CHECK(pair.perturbed.frames[0].at(0, 0) == 0.5f);
  }
  SUBCASE("identity with empty masks and no small ops") {
    auto clip = random_clip(data, shape, 3, 4);
    PerturbConfig cfg;
    cfg.w_large = 0.0;
    cfg.w_small = 1.0;
    cfg.ops_small = {};
    const std::vector<MotionMask> empty(3, MotionMask(8, 8));
    CHECK(apply_perturbation(clip, empty, cfg).perturbed == clip);
  }
  SUBCASE("shuffle ops with a unit weight preserve the clip multiset") {
    auto clip = random_clip(data, shape, 4, 5);
    const auto masks = fast_motion_mask(clip, 0.5, 2.0);
    for (auto weights : {std::pair{1.0, 0.0}, std::pair{0.0, 1.0}}) {
      PerturbConfig cfg;
      cfg.w_large = weights.first;
      cfg.w_small = weights.second;
      cfg.ops_large = {PixelShuffle{}, TemporalShuffle{}};
      cfg.ops_small = {PixelShuffle{}, TemporalShuffle{}};
      cfg.seed = 99;
      const auto pair = apply_perturbation(clip, masks, cfg);
      CHECK(sorted_values(pair.perturbed.frames) == sorted_values(clip.frames));
    }
  }
  SUBCASE("temporal order is recorded and recoverable") {
    auto clip = random_clip(data, shape, 6, 2);
    PerturbConfig cfg;
    cfg.ops_large = {TemporalShuffle{}};
    cfg.ops_small = {};
    cfg.seed = 5;
    const std::vector<MotionMask> empty(6, MotionMask(8, 8));
    const auto pair = apply_perturbation(clip, empty, cfg);
    REQUIRE(pair.temporal_order.size() == 6);
    for (std::size_t t = 0; t < 6; ++t) {
      CHECK(pair.perturbed.frames[t] == clip.frames[pair.temporal_order[t]]);
      CHECK((*pair.perturbed.landmarks)[t] == (*clip.landmarks)[pair.temporal_order[t]]);
    }
  }
  SUBCASE("thread count does not change the output") {
    auto clip = random_clip(data, {12, 10, 3}, 7, 6);
    PerturbConfig cfg;
    cfg.theta = 0.5;
    cfg.radius = 3.0;
    cfg.ops_large = parse_op_list("pixel_shuffle,random_replace:0.5,block_occlude:3x3,gaussian_noise:0.1");
    cfg.ops_small = parse_op_list("gaussian_noise:0.02,temporal_shuffle");
    cfg.seed = 1234;
    const auto serial = perturb_clip(clip, cfg, 1);
    const auto threaded = perturb_clip(clip, cfg, 8);
    CHECK(serial.perturbed == threaded.perturbed);
    CHECK(serial.temporal_order == threaded.temporal_order);
    cfg.seed = 1235;
    CHECK_FALSE(perturb_clip(clip, cfg, 1).perturbed == serial.perturbed);
    for (const auto& f : serial.perturbed.frames)
      for (float v : f.values()) CHECK((v >= 0.0f && v <= 1.0f));
  }
  SUBCASE("errors") {
    auto clip = random_clip(data, shape, 2, 1);
    PerturbConfig cfg;
    cfg.w_large = 0.6;
    cfg.w_small = 0.6;
    CHECK(code_of([&] { perturb_clip(clip, cfg); }) == ErrorCode::InvalidWeights);
    cfg = PerturbConfig{};
    CHECK(code_of([&] { apply_perturbation(clip, {MotionMask(8, 8)}, cfg); }) == ErrorCode::ShapeMismatch);
    CHECK(code_of([&] { apply_perturbation(clip, {MotionMask(8, 8), MotionMask(4, 8)}, cfg); }) ==
          ErrorCode::ShapeMismatch);
  }
}

TEST_CASE("reconstruction_loss") {
  const FrameShape one{1, 1, 1};
  SUBCASE("hand values") {
    VideoClip a, b;
    a.frames = {FrameGrid(one, {1.0f})};
    b.frames = {FrameGrid(one, {0.5f})};
    CHECK(reconstruction_loss(a, b) == 0.25);
    CHECK(reconstruction_loss(a, a) == 0.0);

    const FrameShape row{1, 3, 1};
    VideoClip c, d;
    c.frames = {FrameGrid(row, {1.0f, 0.5f, 0.5f}), FrameGrid(row, {1.0f, 1.0f, 1.0f})};
    d.frames = {FrameGrid(row, {0.5f, 0.5f, 0.5f}), FrameGrid(row, {0.5f, 0.5f, 0.5f})};
    CHECK(reconstruction_loss(c, d) == 0.5);
  }
  SUBCASE("matches the nested-loop reference and is symmetric") {
    Rng rng(23);
    for (int trial = 0; trial < 30; ++trial) {
      const FrameShape s{1 + rng.below(16), 1 + rng.below(16), rng.below(2) ? 3u : 1u};
      const std::size_t t = 1 + rng.below(8);
      auto a = random_clip(rng, s, t, 0);
      auto b = random_clip(rng, s, t, 0);
      std::vector<std::vector<float>> fa, fb;
      for (std::size_t k = 0; k < t; ++k) {
        fa.emplace_back(a.frames[k].values().begin(), a.frames[k].values().end());
        fb.emplace_back(b.frames[k].values().begin(), b.frames[k].values().end());
      }
      const double expected = oracle::recon_loss(fa, fb, int(s.height), int(s.width), int(s.channels));
      CHECK(reconstruction_loss(a, b) == doctest::Approx(expected).epsilon(1e-9));
      CHECK(reconstruction_loss(a, b) == reconstruction_loss(b, a));
    }
  }
  SUBCASE("shape mismatch") {
    VideoClip a, b;
    a.frames = {FrameGrid(one, {1.0f})};
    b.frames = {FrameGrid(one, {1.0f}), FrameGrid(one, {1.0f})};
    CHECK(code_of([&] { reconstruction_loss(a, b); }) == ErrorCode::ShapeMismatch);
    b.frames = {FrameGrid({2, 1, 1})};
    CHECK(code_of([&] { reconstruction_loss(a, b); }) == ErrorCode::ShapeMismatch);
  }
}

TEST_CASE("frame and clip IO") {
  CHECK(code_of([] { FrameGrid({2, 2, 1}, {0, 0, 0}); }) == ErrorCode::ShapeMismatch);
  CHECK(code_of([] { FrameGrid({1, 1, 1}, {1.5f}); }) == ErrorCode::ValueOutOfRange);
  CHECK(code_of([] { FrameGrid({1, 1, 2}); }) == ErrorCode::InvalidConfig);

  Rng rng(8);
  auto clip = random_clip(rng, {5, 7, 3}, 4, 3);
  std::stringstream buf;
  write_clip(buf, clip.frames);
  CHECK(buf.str().substr(0, 4) == "SPC1");
  CHECK(buf.str().size() == 4 + 16 + 4 * 5 * 7 * 3 * 4);
  CHECK(read_clip(buf) == clip.frames);

  std::stringstream lm;
  write_landmarks(lm, *clip.landmarks);
  CHECK(read_landmarks(lm) == *clip.landmarks);

  std::stringstream bad("SPC2xxxxxxxxxxxxxxxx");
  CHECK(code_of([&] { read_clip(bad); }) == ErrorCode::MalformedDocument);
  std::stringstream gap(R"({"t":0,"points":[]})" "\n" R"({"t":2,"points":[]})" "\n");
  CHECK(code_of([&] { read_landmarks(gap); }) == ErrorCode::MalformedRecord);
}
