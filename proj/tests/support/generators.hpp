#pragma once

// Hand-rolled generators for property tests.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "signpipe/kb/types.hpp"
#include "signpipe/random.hpp"

namespace signpipe::testing {

inline std::string random_symbol(Rng& rng, std::size_t len) {
  static const char* pieces[] = {"a", "b", "c", "d", "你", "好", "世", "界", "再", "见"};
  std::string s;
  for (std::size_t i = 0; i < len; ++i) s += pieces[rng.below(10)];
  return s;
}

inline std::vector<double> random_vector(Rng& rng, std::size_t dim) {
  std::vector<double> v(dim);
  do {
    for (auto& x : v) x = rng.uniform() * 2.0 - 1.0;
  } while (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; }));
  return v;
}

/// Probability vector of length k with entries well above the KL floor;
/// `spike` > 1 skews it (spike <= 4 keeps every entry above 1e-9).
inline std::vector<double> random_distribution(Rng& rng, std::size_t k, double spike = 1.0) {
  std::vector<double> v(k);
  double sum = 0.0;
  for (auto& x : v) {
    x = std::pow(rng.uniform() + 1e-2, spike);
    sum += x;
  }
  for (auto& x : v) x /= sum;
  return v;
}

/// Random KB with unique symbols. Roughly one entry in five copies an
/// earlier embedding (possibly rescaled) so exact ties actually occur.
inline kb::KnowledgeBase random_kb(Rng& rng, std::size_t n, std::size_t dim) {
  kb::KnowledgeBase kb;
  kb.embedding_dim = dim;
  std::vector<std::vector<double>> made;
  std::size_t attempt = 0;
  while (kb.entries.size() < n) {
    auto symbol = random_symbol(rng, 1 + rng.below(4)) + std::to_string(attempt++ % 7);
    if (kb.find(symbol)) continue;
    std::vector<double> v;
    if (!made.empty() && rng.below(5) == 0) {
      v = made[rng.below(made.size())];
      if (rng.below(2) == 0) {
        for (auto& x : v) x *= 2.0;  // exact in binary: same cosine bits
      }
    } else {
      v = random_vector(rng, dim);
    }
    made.push_back(v);
    kb.put(entry(symbol, v));
  }
  return kb;
}

}  // namespace signpipe::testing
