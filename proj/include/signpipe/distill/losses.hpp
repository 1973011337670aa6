#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace signpipe::distill {

/// Floor applied to the second argument of KL and to predicted probabilities
/// in cross-entropy. All logs are natural (nats).
inline constexpr double kSmoothingFloor = 1e-10;
inline constexpr double kSumTolerance = 1e-6;

/// Throws InvalidDistribution unless every entry is finite and >= 0 and the
/// sum is within 1e-6 of 1. K = 0 is invalid.
void check_distribution(std::span<const double> p);

/// q with entries below the floor raised to it, renormalized to sum 1 only
/// when a floor was applied, so an already positive q passes through unchanged.
std::vector<double> smooth(std::span<const double> q);

/// Per-timestep probability vectors sharing one dimension K, T >= 1.
class DistributionSequence {
 public:
  DistributionSequence() = default;
  /// Throws InvalidDistribution (empty, bad step) or DimensionMismatch.
  explicit DistributionSequence(std::vector<std::vector<double>> steps);

  std::size_t length() const noexcept { return steps_.size(); }
  std::size_t dimension() const noexcept { return steps_.empty() ? 0 : steps_.front().size(); }
  std::span<const double> step(std::size_t t) const { return steps_.at(t); }
  const std::vector<std::vector<double>>& steps() const noexcept { return steps_; }

  bool operator==(const DistributionSequence&) const = default;

 private:
  std::vector<std::vector<double>> steps_;
};

/// sum_k p_k ln(p_k / q_k) against smooth(q), with 0 ln 0 = 0.
/// Throws DimensionMismatch, InvalidDistribution.
double kl_divergence(std::span<const double> p, std::span<const double> q);

/// Mean over t of KL(P(t) || Q(t)), summed pairwise so the result does not
/// depend on the thread count. Throws LengthMismatch, DimensionMismatch.
double temporal_kl(const DistributionSequence& p, const DistributionSequence& q, unsigned threads = 1);

/// -(1/T) sum_t ln max(predicted(t)[target_t], floor).
/// Throws LengthMismatch, IndexOutOfRange.
double cross_entropy(const DistributionSequence& predicted, std::span<const std::size_t> targets);

struct SequencePair {
  DistributionSequence p;
  DistributionSequence q;
};

struct CrossEntropyInput {
  DistributionSequence predicted;
  std::vector<std::size_t> targets;
};

/// Every term is optional; an absent term, or one with weight 0, is
/// reported as 0 and listed in LossBreakdown::omitted.
struct LossInputs {
  std::optional<SequencePair> self_kl;      // 3D-conv branch vs temporal branch
  std::optional<SequencePair> lm_video_kl;  // landmark vs video branch, before fusion
  std::optional<SequencePair> lm_t_kl;      // landmark vs video branch, after fusion
  std::optional<CrossEntropyInput> ce;
};

struct LossWeights {
  double self_kl = 1.0;
  double lm_video_kl = 1.0;
  double lm_t_kl = 1.0;
  double ce = 1.0;

  /// Throws InvalidWeights for negative or non-finite weights.
  void check() const;
};

/// Components are stored already multiplied by their weight so that total is
/// exactly their sum.
struct LossBreakdown {
  double self_kl = 0.0;
  double lm_video_kl = 0.0;
  double lm_t_kl = 0.0;
  double ce = 0.0;
  double total = 0.0;
  std::vector<std::string> omitted;
};

/// Errors from a term are rethrown with the same code and the term name
/// (self_kl, lm_video_kl, lm_t_kl, ce) at the start of the message.
LossBreakdown total_loss(const LossInputs& inputs, const LossWeights& weights = {}, unsigned threads = 1);

/// Positional form with every term present and unit weights.
LossBreakdown total_loss(const DistributionSequence& p3d, const DistributionSequence& p_temporal,
                         const DistributionSequence& lm_pre, const DistributionSequence& video_pre,
                         const DistributionSequence& lm_fused, const DistributionSequence& video_fused,
                         const DistributionSequence& predicted, std::span<const std::size_t> targets);

nlohmann::json breakdown_to_json(const LossBreakdown& b, const LossWeights& weights);

/// JSONL, one record per timestep {"t": u32, "p": [f64, ...]}; t must cover
/// 0..T-1 exactly once, in any order.
DistributionSequence read_distributions(std::istream& in);
DistributionSequence read_distributions(const std::filesystem::path& path);
void write_distributions(std::ostream& out, const DistributionSequence& seq);
void write_distributions(const std::filesystem::path& path, const DistributionSequence& seq);

/// Whitespace-separated non-negative class indices.
std::vector<std::size_t> read_targets(std::istream& in);
std::vector<std::size_t> read_targets(const std::filesystem::path& path);

}  // namespace signpipe::distill
