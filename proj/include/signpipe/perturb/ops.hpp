#pragma once

#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "signpipe/perturb/frame.hpp"
#include "signpipe/random.hpp"

namespace signpipe::perturb {

/// Permutes whole pixels (all channels together) within the region.
struct PixelShuffle {
  bool operator==(const PixelShuffle&) const = default;
};

/// Each region pixel, with probability p, takes the value of another region
/// pixel drawn uniformly (from the values before this op ran).
struct RandomPixelReplace {
  double p = 0.5;
  bool operator==(const RandomPixelReplace&) const = default;
};

/// Zeroes one block_h x block_w rectangle centred on a uniformly chosen
/// region pixel, restricted to the region.
struct BlockOcclude {
  std::size_t block_h = 8;
  std::size_t block_w = 8;
  bool operator==(const BlockOcclude&) const = default;
};

/// Adds N(0, sigma^2) per value, then clamps to [0, 1].
struct LocalGaussianNoise {
  double sigma = 0.05;
  bool operator==(const LocalGaussianNoise&) const = default;
};

/// Permutes frame order of the whole clip.
struct TemporalShuffle {
  bool operator==(const TemporalShuffle&) const = default;
};

using PerturbOp = std::variant<PixelShuffle, RandomPixelReplace, BlockOcclude, LocalGaussianNoise, TemporalShuffle>;

/// Text form used on the command line and in manifests:
/// pixel_shuffle, random_replace[:p], block_occlude[:HxW],
/// gaussian_noise[:sigma], temporal_shuffle.
PerturbOp parse_op(std::string_view text);
std::string to_string(const PerturbOp& op);
/// Comma-separated list; empty text gives an empty list.
std::vector<PerturbOp> parse_op_list(std::string_view text);
std::string to_string(const std::vector<PerturbOp>& ops);

/// Throws InvalidConfig for out-of-range parameters.
void check_op(const PerturbOp& op);

bool is_spatial(const PerturbOp& op) noexcept;

/// Applies one spatial op in place to the pixels of `region` (ascending
/// linear indices); everything else is left untouched. An empty region is
/// a no-op. TemporalShuffle is not spatial and is ignored here.
void apply_spatial(FrameGrid& frame, const PerturbOp& op, std::span<const std::uint32_t> region, Rng& rng);

/// Value-returning form over a mask region.
FrameGrid apply_op(const FrameGrid& frame, const PerturbOp& op, const MotionMask& region, Rng& rng);

/// Seeded Fisher-Yates permutation of [0, n).
std::vector<std::size_t> temporal_permutation(std::size_t n, Rng& rng);

}  // namespace signpipe::perturb
