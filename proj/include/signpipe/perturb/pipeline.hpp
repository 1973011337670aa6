#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "signpipe/perturb/frame.hpp"
#include "signpipe/perturb/ops.hpp"

namespace signpipe::perturb {

struct PerturbConfig {
  double theta = 2.0;    // px / frame
  double radius = 15.0;  // px
  double w_large = 0.7;
  double w_small = 0.3;
  std::vector<PerturbOp> ops_large{PixelShuffle{}, BlockOcclude{}};
  std::vector<PerturbOp> ops_small{LocalGaussianNoise{}};
  std::uint64_t seed = 0;

  /// Throws InvalidWeights unless both weights are in [0, 1] and sum to 1
  /// within 1e-9; InvalidConfig for bad theta / radius / op parameters.
  void check() const;
};

nlohmann::json config_to_json(const PerturbConfig& cfg);

/// Self-supervised training pair: the clean clip as reconstruction target,
/// its perturbed input and the fast-motion masks used.
struct ReconPair {
  VideoClip original;
  VideoClip perturbed;
  std::vector<MotionMask> masks;
  /// perturbed frame t was produced from original frame temporal_order[t];
  /// the identity when no TemporalShuffle is configured.
  std::vector<std::size_t> temporal_order;
};

/// Weighted perturbation of every frame:
///   out_t = w_large * f_large(v_t, M_t) + w_small * f_small(v_t, M_t'),
/// where f_large runs ops_large in order on the pixels of M_t only, f_small
/// runs ops_small on the complement M_t' only, and the sum is clamped to
/// [0, 1]. A TemporalShuffle in either list permutes the resulting frames
/// once, after the spatial ops.
///
/// Frame t, list l, op k draws from its own stream derive_seed(seed, t, l, k),
/// so the result is bit-identical for any thread count.
ReconPair apply_perturbation(const VideoClip& clip, const std::vector<MotionMask>& masks,
                             const PerturbConfig& cfg, unsigned threads = 1);

/// fast_motion_mask followed by apply_perturbation.
ReconPair perturb_clip(const VideoClip& clip, const PerturbConfig& cfg, unsigned threads = 1);

/// (1/T) * sum_t ||a_t - b_t||^2 with the per-frame sum of squared value
/// differences (no averaging over pixels). Throws ShapeMismatch.
double reconstruction_loss(const VideoClip& a, const VideoClip& b);

}  // namespace signpipe::perturb
