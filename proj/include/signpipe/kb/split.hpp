#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "signpipe/kb/types.hpp"

namespace signpipe::kb {

struct SplitSizes {
  std::size_t train;
  std::size_t dev;
  std::size_t test;

  bool operator==(const SplitSizes&) const = default;
};

/// 80/10/10 sizes: train = round(0.8 N), dev = round(0.1 N), test takes the
/// remainder. Halves round up; computed in integers so no binary-fraction
/// error can flip a boundary.
SplitSizes split_sizes(std::size_t n) noexcept;

/// Sorts ids, shuffles them with the seeded generator and cuts the result by
/// split_sizes. The outcome depends on the id set and seed only.
SplitAssignment split_dataset(const std::vector<std::string>& ids, std::uint64_t seed);

}  // namespace signpipe::kb
