#include "signpipe/kb/split.hpp"

#include <algorithm>

#include "signpipe/error.hpp"
#include "signpipe/random.hpp"

namespace signpipe::kb {

SplitSizes split_sizes(std::size_t n) noexcept {
  const std::size_t train = (8 * n + 5) / 10;
  const std::size_t dev = (n + 5) / 10;
  return {train, dev, n - train - dev};
}

SplitAssignment split_dataset(const std::vector<std::string>& ids, std::uint64_t seed) {
  if (ids.empty()) throw Error(ErrorCode::EmptyInput, "no ids to split");
  std::vector<std::string> order(ids);
  std::sort(order.begin(), order.end());
  if (auto dup = std::adjacent_find(order.begin(), order.end()); dup != order.end()) {
    throw Error(ErrorCode::DuplicateIds, "id '" + *dup + "' appears more than once");
  }
  Rng rng(seed);
  rng.shuffle(std::span<std::string>(order));

  const auto sizes = split_sizes(order.size());
  SplitAssignment out;
  out.seed = seed;
  auto it = std::make_move_iterator(order.begin());
  out.train.insert(it, it + sizes.train);
  it += sizes.train;
  out.dev.insert(it, it + sizes.dev);
  it += sizes.dev;
  out.test.insert(it, std::make_move_iterator(order.end()));
  return out;
}

}  // namespace signpipe::kb
