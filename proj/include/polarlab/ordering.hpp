#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polarlab/channel.hpp"

namespace polarlab {

// A symmetric channel as a mixture of BSC sub-channels: with probability
// mass[k] the input passes through a BSC with crossover p[k] in [0, 1/2].
struct CrossoverDistribution {
  struct Atom {
    double p;
    double mass;
  };
  std::vector<Atom> atoms;  // sorted by p, strictly increasing

  double mean() const;
};

// Pairs outputs (y, y') with W(y|0) = W(y'|1) and W(y|1) = W(y'|0) within
// 1e-9 absolute (a self-paired output has W(y|0) = W(y|1)). Throws
// std::invalid_argument naming the first unpairable output.
CrossoverDistribution bsc_decomposition(const BinaryChannel& w);

enum class ConvexOrderVerdict { dominates, dominated, incomparable };

// Convex order of the two crossover distributions, compared by integrated
// survival E[(X - t)+] at every atom. Distributions whose means differ by
// more than 1e-9 are incomparable. `dominates` means w1's distribution is
// the more spread (it dominates w2's in convex order).
ConvexOrderVerdict check_symmetric_convex_order(const BinaryChannel& w1,
                                                const BinaryChannel& w2);

enum class DegradationVerdict { degraded, not_degraded };

// Exact feasibility of an intermediate channel P with W2 = P o W1, decided
// by a phase-one simplex with tolerance 1e-9. Alphabets are capped at 32
// outputs each.
DegradationVerdict check_degradation(const BinaryChannel& w1,
                                     const BinaryChannel& w2);

struct OrderProbeReport {
  std::string w1, w2;
  int n = 0, k = 0;
  long trials = 0;
  double err1 = 0, se1 = 0;  // block error of the code built for w1, on w1
  double err2 = 0, se2 = 0;  // same code and message ensemble, on w2
  // With w2 degraded from w1, w2 may not win by more than noise:
  // err2 >= err1 - 3 sqrt(se1^2 + se2^2).
  bool consistent = false;
};

// Builds a code for w1, then Monte Carlos the same code over both channels
// with a shared message ensemble.
OrderProbeReport polar_order_probe(const BinaryChannel& w1,
                                   const BinaryChannel& w2, int n, int k,
                                   long trials, std::uint64_t seed);

std::string order_probe_csv(const std::vector<OrderProbeReport>& rows);

}  // namespace polarlab
