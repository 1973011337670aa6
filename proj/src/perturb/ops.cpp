#include "signpipe/perturb/ops.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

#include "signpipe/error.hpp"

namespace signpipe::perturb {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double parse_double(std::string_view text, std::string_view what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::InvalidConfig, "bad number '" + std::string(text) + "' in " + std::string(what));
  }
  return v;
}

std::size_t parse_size(std::string_view text, std::string_view what) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::InvalidConfig, "bad integer '" + std::string(text) + "' in " + std::string(what));
  }
  return v;
}

std::string shortest(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void pixel_shuffle(FrameGrid& frame, std::span<const std::uint32_t> region, Rng& rng) {
  std::vector<std::uint32_t> source(region.begin(), region.end());
  rng.shuffle(std::span<std::uint32_t>(source));
  const std::vector<float> before(frame.values().begin(), frame.values().end());
  const std::size_t c = frame.channels();
  for (std::size_t k = 0; k < region.size(); ++k) {
    auto dst = frame.pixel(region[k]);
    std::copy_n(before.begin() + static_cast<std::ptrdiff_t>(source[k] * c), c, dst.begin());
  }
}

void random_replace(FrameGrid& frame, std::span<const std::uint32_t> region, double p, Rng& rng) {
  if (region.size() < 2) return;
  const std::vector<float> before(frame.values().begin(), frame.values().end());
  const std::size_t c = frame.channels();
  for (std::size_t k = 0; k < region.size(); ++k) {
    if (!rng.bernoulli(p)) continue;
    // Uniform over the other n-1 region pixels.
    std::size_t j = static_cast<std::size_t>(rng.below(region.size() - 1));
    if (j >= k) ++j;
    auto dst = frame.pixel(region[k]);
    std::copy_n(before.begin() + static_cast<std::ptrdiff_t>(region[j] * c), c, dst.begin());
  }
}

void block_occlude(FrameGrid& frame, std::span<const std::uint32_t> region, std::size_t bh, std::size_t bw,
                   Rng& rng) {
  const std::size_t w = frame.width();
  const std::uint32_t centre = region[rng.below(region.size())];
  const auto cy = static_cast<std::ptrdiff_t>(centre / w);
  const auto cx = static_cast<std::ptrdiff_t>(centre % w);
  const std::ptrdiff_t y0 = cy - static_cast<std::ptrdiff_t>(bh / 2);
  const std::ptrdiff_t x0 = cx - static_cast<std::ptrdiff_t>(bw / 2);
  const auto y1 = y0 + static_cast<std::ptrdiff_t>(bh);
  const auto x1 = x0 + static_cast<std::ptrdiff_t>(bw);
  for (std::uint32_t idx : region) {
    const auto y = static_cast<std::ptrdiff_t>(idx / w);
    const auto x = static_cast<std::ptrdiff_t>(idx % w);
    if (y >= y0 && y < y1 && x >= x0 && x < x1) {
      auto px = frame.pixel(idx);
      std::fill(px.begin(), px.end(), 0.0f);
    }
  }
}

void gaussian_noise(FrameGrid& frame, std::span<const std::uint32_t> region, double sigma, Rng& rng) {
  if (sigma == 0.0) return;
  for (std::uint32_t idx : region) {
    for (float& v : frame.pixel(idx)) {
      const double noisy = static_cast<double>(v) + sigma * rng.normal();
      v = static_cast<float>(std::clamp(noisy, 0.0, 1.0));
    }
  }
}

}  // namespace

PerturbOp parse_op(std::string_view text) {
  const auto colon = text.find(':');
  const auto name = text.substr(0, colon);
  const bool has_arg = colon != std::string_view::npos;
  const auto arg = has_arg ? text.substr(colon + 1) : std::string_view{};

  PerturbOp op;
  if (name == "pixel_shuffle" && !has_arg) {
    op = PixelShuffle{};
  } else if (name == "random_replace") {
    op = RandomPixelReplace{has_arg ? parse_double(arg, text) : RandomPixelReplace{}.p};
  } else if (name == "block_occlude") {
    BlockOcclude b;
    if (has_arg) {
      const auto x = arg.find('x');
      if (x == std::string_view::npos) throw Error(ErrorCode::InvalidConfig, "block_occlude takes HxW");
      b.block_h = parse_size(arg.substr(0, x), text);
      b.block_w = parse_size(arg.substr(x + 1), text);
    }
    op = b;
  } else if (name == "gaussian_noise") {
    op = LocalGaussianNoise{has_arg ? parse_double(arg, text) : LocalGaussianNoise{}.sigma};
  } else if (name == "temporal_shuffle" && !has_arg) {
    op = TemporalShuffle{};
  } else {
    throw Error(ErrorCode::InvalidConfig, "unknown perturbation '" + std::string(text) + "'");
  }
  check_op(op);
  return op;
}

std::string to_string(const PerturbOp& op) {
  return std::visit(overloaded{
                        [](const PixelShuffle&) { return std::string("pixel_shuffle"); },
                        [](const RandomPixelReplace& r) { return "random_replace:" + shortest(r.p); },
                        [](const BlockOcclude& b) {
                          return "block_occlude:" + std::to_string(b.block_h) + "x" + std::to_string(b.block_w);
                        },
                        [](const LocalGaussianNoise& g) { return "gaussian_noise:" + shortest(g.sigma); },
                        [](const TemporalShuffle&) { return std::string("temporal_shuffle"); },
                    },
                    op);
}

std::vector<PerturbOp> parse_op_list(std::string_view text) {
  std::vector<PerturbOp> out;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    auto piece = text.substr(start, end - start);
    while (!piece.empty() && piece.front() == ' ') piece.remove_prefix(1);
    while (!piece.empty() && piece.back() == ' ') piece.remove_suffix(1);
    if (!piece.empty()) out.push_back(parse_op(piece));
    start = end + 1;
  }
  return out;
}

std::string to_string(const std::vector<PerturbOp>& ops) {
  std::string out;
  for (const auto& op : ops) {
    if (!out.empty()) out += ',';
    out += to_string(op);
  }
  return out;
}

void check_op(const PerturbOp& op) {
  std::visit(overloaded{
                 [](const PixelShuffle&) {},
                 [](const RandomPixelReplace& r) {
                   if (!(r.p >= 0.0 && r.p <= 1.0)) throw Error(ErrorCode::InvalidConfig, "random_replace p must be in [0, 1]");
                 },
                 [](const BlockOcclude& b) {
                   if (b.block_h == 0 || b.block_w == 0) throw Error(ErrorCode::InvalidConfig, "block size must be positive");
                 },
                 [](const LocalGaussianNoise& g) {
                   if (!(g.sigma >= 0.0) || !std::isfinite(g.sigma)) {
                     throw Error(ErrorCode::InvalidConfig, "gaussian_noise sigma must be >= 0");
                   }
                 },
                 [](const TemporalShuffle&) {},
             },
             op);
}

bool is_spatial(const PerturbOp& op) noexcept { return !std::holds_alternative<TemporalShuffle>(op); }

void apply_spatial(FrameGrid& frame, const PerturbOp& op, std::span<const std::uint32_t> region, Rng& rng) {
  if (region.empty()) return;
  std::visit(overloaded{
                 [&](const PixelShuffle&) { pixel_shuffle(frame, region, rng); },
                 [&](const RandomPixelReplace& r) { random_replace(frame, region, r.p, rng); },
                 [&](const BlockOcclude& b) { block_occlude(frame, region, b.block_h, b.block_w, rng); },
                 [&](const LocalGaussianNoise& g) { gaussian_noise(frame, region, g.sigma, rng); },
                 [](const TemporalShuffle&) {},
             },
             op);
}

FrameGrid apply_op(const FrameGrid& frame, const PerturbOp& op, const MotionMask& region, Rng& rng) {
  if (region.height() != frame.height() || region.width() != frame.width()) {
    throw Error(ErrorCode::ShapeMismatch, "region mask and frame differ in size");
  }
  FrameGrid out = frame;
  const auto idx = region.indices();
  apply_spatial(out, op, idx, rng);
  return out;
}

std::vector<std::size_t> temporal_permutation(std::size_t n, Rng& rng) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(std::span<std::size_t>(order));
  return order;
}

}  // namespace signpipe::perturb
