#include "signpipe/distill/losses.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "signpipe/error.hpp"
#include "signpipe/parallel.hpp"

namespace signpipe::distill {

void check_distribution(std::span<const double> p) {
  if (p.empty()) throw Error(ErrorCode::InvalidDistribution, "distribution has no entries");
  double sum = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (!std::isfinite(p[k]) || p[k] < 0.0) {
      throw Error(ErrorCode::InvalidDistribution, "entry " + std::to_string(k) + " is negative or non-finite");
    }
    sum += p[k];
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    std::ostringstream msg;
    msg << "entries sum to " << sum;
    throw Error(ErrorCode::InvalidDistribution, msg.str());
  }
}

std::vector<double> smooth(std::span<const double> q) {
  std::vector<double> out(q.begin(), q.end());
  bool floored = false;
  for (double& v : out) {
    if (v < kSmoothingFloor) {
      v = kSmoothingFloor;
      floored = true;
    }
  }
  if (floored) {
    const double sum = pairwise_sum(out);
    for (double& v : out) v /= sum;
  }
  return out;
}

DistributionSequence::DistributionSequence(std::vector<std::vector<double>> steps) : steps_(std::move(steps)) {
  if (steps_.empty()) throw Error(ErrorCode::InvalidDistribution, "sequence has no timesteps");
  for (std::size_t t = 0; t < steps_.size(); ++t) {
    if (steps_[t].size() != steps_.front().size()) {
      throw Error(ErrorCode::DimensionMismatch, "step " + std::to_string(t) + " has K=" +
                                                    std::to_string(steps_[t].size()) + ", step 0 has K=" +
                                                    std::to_string(steps_.front().size()));
    }
    try {
      check_distribution(steps_[t]);
    } catch (const Error& e) {
      throw Error(e.code(), "step " + std::to_string(t) + ": " + e.detail());
    }
  }
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "K=" + std::to_string(p.size()) + " against K=" + std::to_string(q.size()));
  }
  check_distribution(p);
  check_distribution(q);
  const auto qs = smooth(q);
  std::vector<double> terms(p.size(), 0.0);
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] > 0.0) terms[k] = p[k] * std::log(p[k] / qs[k]);
  }
  // Gibbs guarantees >= 0; a negative result is rounding when p ~ q.
  return std::max(0.0, pairwise_sum(terms));
}

double temporal_kl(const DistributionSequence& p, const DistributionSequence& q, unsigned threads) {
  if (p.length() != q.length()) {
    throw Error(ErrorCode::LengthMismatch,
                "T=" + std::to_string(p.length()) + " against T=" + std::to_string(q.length()));
  }
  if (p.length() == 0) throw Error(ErrorCode::InvalidDistribution, "sequence has no timesteps");
  if (p.dimension() != q.dimension()) {
    throw Error(ErrorCode::DimensionMismatch,
                "K=" + std::to_string(p.dimension()) + " against K=" + std::to_string(q.dimension()));
  }
  std::vector<double> per_step(p.length());
  parallel_for(p.length(), threads, [&](std::size_t t) { per_step[t] = kl_divergence(p.step(t), q.step(t)); });
  return pairwise_sum(per_step) / static_cast<double>(p.length());
}

double cross_entropy(const DistributionSequence& predicted, std::span<const std::size_t> targets) {
  if (predicted.length() != targets.size()) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(predicted.length()) + " predictions for " +
                                               std::to_string(targets.size()) + " targets");
  }
  if (targets.empty()) throw Error(ErrorCode::InvalidDistribution, "sequence has no timesteps");
  std::vector<double> nll(targets.size());
  for (std::size_t t = 0; t < targets.size(); ++t) {
    if (targets[t] >= predicted.dimension()) {
      throw Error(ErrorCode::IndexOutOfRange, "target " + std::to_string(targets[t]) + " at step " +
                                                  std::to_string(t) + " with K=" +
                                                  std::to_string(predicted.dimension()));
    }
    nll[t] = -std::log(std::max(predicted.step(t)[targets[t]], kSmoothingFloor));
  }
  // -ln(1) is -0.0; report a clean zero.
  return pairwise_sum(nll) / static_cast<double>(targets.size()) + 0.0;
}

void LossWeights::check() const {
  for (double w : {self_kl, lm_video_kl, lm_t_kl, ce}) {
    if (!std::isfinite(w) || w < 0.0) throw Error(ErrorCode::InvalidWeights, "loss weights must be finite and >= 0");
  }
}

namespace {

double attributed(const char* term, const std::function<double()>& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), std::string(term) + ": " + e.detail());
  }
}

}  // namespace

LossBreakdown total_loss(const LossInputs& in, const LossWeights& weights, unsigned threads) {
  weights.check();
  LossBreakdown out;
  auto kl_term = [&](const char* name, const std::optional<SequencePair>& pair, double weight, double& slot) {
    if (!pair || weight == 0.0) {
      out.omitted.emplace_back(name);
      return;
    }
    slot = weight * attributed(name, [&] { return temporal_kl(pair->p, pair->q, threads); });
  };
  kl_term("self_kl", in.self_kl, weights.self_kl, out.self_kl);
  kl_term("lm_video_kl", in.lm_video_kl, weights.lm_video_kl, out.lm_video_kl);
  kl_term("lm_t_kl", in.lm_t_kl, weights.lm_t_kl, out.lm_t_kl);
  if (!in.ce || weights.ce == 0.0) {
    out.omitted.emplace_back("ce");
  } else {
    out.ce = weights.ce * attributed("ce", [&] { return cross_entropy(in.ce->predicted, in.ce->targets); });
  }
  out.total = out.self_kl + out.lm_video_kl + out.lm_t_kl + out.ce;
  return out;
}

LossBreakdown total_loss(const DistributionSequence& p3d, const DistributionSequence& p_temporal,
                         const DistributionSequence& lm_pre, const DistributionSequence& video_pre,
                         const DistributionSequence& lm_fused, const DistributionSequence& video_fused,
                         const DistributionSequence& predicted, std::span<const std::size_t> targets) {
  LossInputs in;
  in.self_kl = SequencePair{p3d, p_temporal};
  in.lm_video_kl = SequencePair{lm_pre, video_pre};
  in.lm_t_kl = SequencePair{lm_fused, video_fused};
  in.ce = CrossEntropyInput{predicted, {targets.begin(), targets.end()}};
  return total_loss(in);
}

nlohmann::json breakdown_to_json(const LossBreakdown& b, const LossWeights& weights) {
  return nlohmann::json{{"self_kl", b.self_kl},
                        {"lm_video_kl", b.lm_video_kl},
                        {"lm_t_kl", b.lm_t_kl},
                        {"ce", b.ce},
                        {"total", b.total},
                        {"omitted", b.omitted},
                        {"weights",
                         {{"self_kl", weights.self_kl},
                          {"lm_video_kl", weights.lm_video_kl},
                          {"lm_t_kl", weights.lm_t_kl},
                          {"ce", weights.ce}}},
                        {"units", "nats"},
                        {"smoothing_floor", kSmoothingFloor}};
}

DistributionSequence read_distributions(std::istream& in) {
  std::map<std::size_t, std::vector<double>> by_t;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto rec = nlohmann::json::parse(line);
      const auto t = rec.at("t").get<std::size_t>();
      auto p = rec.at("p").get<std::vector<double>>();
      if (!by_t.emplace(t, std::move(p)).second) {
        throw LineError(ErrorCode::MalformedRecord, lineno, "timestep " + std::to_string(t) + " repeated");
      }
    } catch (const nlohmann::json::exception& e) {
      throw LineError(ErrorCode::MalformedRecord, lineno, e.what());
    }
  }
  std::vector<std::vector<double>> steps;
  steps.reserve(by_t.size());
  for (auto& [t, p] : by_t) {
    if (t != steps.size()) throw Error(ErrorCode::MalformedRecord, "timesteps must cover t = 0..T-1");
    steps.push_back(std::move(p));
  }
  return DistributionSequence(std::move(steps));
}

DistributionSequence read_distributions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return read_distributions(in);
}

void write_distributions(std::ostream& out, const DistributionSequence& seq) {
  for (std::size_t t = 0; t < seq.length(); ++t) {
    out << nlohmann::json{{"t", t}, {"p", seq.steps()[t]}}.dump() << '\n';
  }
}

void write_distributions(const std::filesystem::path& path, const DistributionSequence& seq) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  write_distributions(out, seq);
}

std::vector<std::size_t> read_targets(std::istream& in) {
  std::vector<std::size_t> out;
  std::string word;
  while (in >> word) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      if (word.empty() || word[0] == '-') throw std::invalid_argument(word);
      v = std::stoull(word, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != word.size()) throw Error(ErrorCode::MalformedRecord, "target '" + word + "' is not a class index");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

std::vector<std::size_t> read_targets(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return read_targets(in);
}

}  // namespace signpipe::distill
