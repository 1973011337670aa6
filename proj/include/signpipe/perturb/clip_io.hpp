#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "signpipe/perturb/frame.hpp"

namespace signpipe::perturb {

/// Binary clip tensor: ASCII magic "SPC1", then u32 H, W, C, T, then
/// T*H*W*C f32 values. All little-endian; frames in order, rows top to
/// bottom, channels interleaved.
void write_clip(std::ostream& out, const std::vector<FrameGrid>& frames);
void write_clip(const std::filesystem::path& path, const std::vector<FrameGrid>& frames);
std::vector<FrameGrid> read_clip(std::istream& in);
std::vector<FrameGrid> read_clip(const std::filesystem::path& path);

/// Landmark track as JSONL, one record per frame: {"t": u32, "points": [[x, y, c], ...]}.
/// Records may appear in any order but t must cover 0..T-1 exactly once.
void write_landmarks(std::ostream& out, const std::vector<Landmarks>& track);
void write_landmarks(const std::filesystem::path& path, const std::vector<Landmarks>& track);
std::vector<Landmarks> read_landmarks(std::istream& in);
std::vector<Landmarks> read_landmarks(const std::filesystem::path& path);

/// Masks stored as a one-channel clip with values 0 and 1.
std::vector<FrameGrid> masks_as_frames(const std::vector<MotionMask>& masks);

}  // namespace signpipe::perturb
