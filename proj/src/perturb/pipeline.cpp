#include "signpipe/perturb/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "signpipe/error.hpp"
#include "signpipe/parallel.hpp"
#include "signpipe/perturb/motion.hpp"
#include "signpipe/random.hpp"

namespace signpipe::perturb {

namespace {

constexpr std::uint64_t kLargeList = 0;
constexpr std::uint64_t kSmallList = 1;
constexpr std::uint64_t kTemporalStream = std::numeric_limits<std::uint64_t>::max();

bool has_temporal(const std::vector<PerturbOp>& ops) {
  return std::any_of(ops.begin(), ops.end(), [](const PerturbOp& op) { return !is_spatial(op); });
}

FrameGrid run_list(const FrameGrid& frame, const std::vector<PerturbOp>& ops, std::span<const std::uint32_t> region,
                   std::uint64_t seed, std::uint64_t t, std::uint64_t list) {
  FrameGrid out = frame;
  if (region.empty()) return out;
  for (std::size_t k = 0; k < ops.size(); ++k) {
    if (!is_spatial(ops[k])) continue;
    Rng rng(derive_seed(seed, {t, list, k}));
    apply_spatial(out, ops[k], region, rng);
  }
  return out;
}

}  // namespace

void PerturbConfig::check() const {
  if (!(theta > 0.0) || !std::isfinite(theta)) throw Error(ErrorCode::InvalidConfig, "theta must be positive");
  if (!(radius >= 0.0) || !std::isfinite(radius)) throw Error(ErrorCode::InvalidConfig, "radius must be >= 0");
  const bool in_range = w_large >= 0.0 && w_large <= 1.0 && w_small >= 0.0 && w_small <= 1.0;
  if (!in_range || std::abs(w_large + w_small - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidWeights, "w_large and w_small must lie in [0, 1] and sum to 1");
  }
  for (const auto& op : ops_large) check_op(op);
  for (const auto& op : ops_small) check_op(op);
}

nlohmann::json config_to_json(const PerturbConfig& cfg) {
  return nlohmann::json{{"theta", cfg.theta},
                        {"radius", cfg.radius},
                        {"w_large", cfg.w_large},
                        {"w_small", cfg.w_small},
                        {"ops_large", to_string(cfg.ops_large)},
                        {"ops_small", to_string(cfg.ops_small)},
                        {"seed", cfg.seed}};
}

ReconPair apply_perturbation(const VideoClip& clip, const std::vector<MotionMask>& masks, const PerturbConfig& cfg,
                             unsigned threads) {
  cfg.check();
  clip.check();
  const auto shape = clip.shape();
  if (masks.size() != clip.frames.size()) {
    throw Error(ErrorCode::ShapeMismatch, std::to_string(masks.size()) + " masks for " +
                                              std::to_string(clip.frames.size()) + " frames");
  }
  for (const auto& m : masks) {
    if (m.height() != shape.height || m.width() != shape.width) {
      throw Error(ErrorCode::ShapeMismatch, "mask size differs from frame size");
    }
  }

  const std::size_t n_frames = clip.frames.size();
  std::vector<FrameGrid> spatial(n_frames);
  parallel_for(n_frames, threads, [&](std::size_t t) {
    const auto& v = clip.frames[t];
    const auto inside = masks[t].indices();
    const auto outside = masks[t].complement().indices();
    const FrameGrid large = run_list(v, cfg.ops_large, inside, cfg.seed, t, kLargeList);
    const FrameGrid small = run_list(v, cfg.ops_small, outside, cfg.seed, t, kSmallList);

    FrameGrid out(shape);
    auto dst = out.values();
    const auto a = large.values();
    const auto b = small.values();
    for (std::size_t i = 0; i < dst.size(); ++i) {
      const double mixed = cfg.w_large * static_cast<double>(a[i]) + cfg.w_small * static_cast<double>(b[i]);
      dst[i] = static_cast<float>(std::clamp(mixed, 0.0, 1.0));
    }
    spatial[t] = std::move(out);
  });

  ReconPair pair;
  pair.original = clip;
  pair.masks = masks;
  pair.temporal_order.resize(n_frames);
  for (std::size_t t = 0; t < n_frames; ++t) pair.temporal_order[t] = t;
  if (has_temporal(cfg.ops_large) || has_temporal(cfg.ops_small)) {
    Rng rng(derive_seed(cfg.seed, {kTemporalStream}));
    pair.temporal_order = temporal_permutation(n_frames, rng);
  }

  pair.perturbed.frames.reserve(n_frames);
  for (std::size_t t = 0; t < n_frames; ++t) pair.perturbed.frames.push_back(spatial[pair.temporal_order[t]]);
  if (clip.landmarks) {
    std::vector<Landmarks> moved;
    moved.reserve(n_frames);
    for (std::size_t t = 0; t < n_frames; ++t) moved.push_back((*clip.landmarks)[pair.temporal_order[t]]);
    pair.perturbed.landmarks = std::move(moved);
  }
  return pair;
}

ReconPair perturb_clip(const VideoClip& clip, const PerturbConfig& cfg, unsigned threads) {
  cfg.check();
  return apply_perturbation(clip, fast_motion_mask(clip, cfg.theta, cfg.radius), cfg, threads);
}

double reconstruction_loss(const VideoClip& a, const VideoClip& b) {
  if (a.frames.size() != b.frames.size()) {
    throw Error(ErrorCode::ShapeMismatch, "clips have " + std::to_string(a.frames.size()) + " and " +
                                              std::to_string(b.frames.size()) + " frames");
  }
  if (a.frames.empty()) throw Error(ErrorCode::EmptyInput, "clips have no frames");
  double total = 0.0;
  for (std::size_t t = 0; t < a.frames.size(); ++t) {
    if (!(a.frames[t].shape() == b.frames[t].shape())) {
      throw Error(ErrorCode::ShapeMismatch, "frame " + std::to_string(t) + " differs in shape");
    }
    const auto va = a.frames[t].values();
    const auto vb = b.frames[t].values();
    double frame = 0.0;
    for (std::size_t i = 0; i < va.size(); ++i) {
      const double d = static_cast<double>(va[i]) - static_cast<double>(vb[i]);
      frame += d * d;
    }
    total += frame;
  }
  return total / static_cast<double>(a.frames.size());
}

}  // namespace signpipe::perturb
