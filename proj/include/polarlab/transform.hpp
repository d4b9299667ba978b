#pragma once

#include "polarlab/channel.hpp"

namespace polarlab {

struct TransformPair {
  BinaryChannel minus;
  BinaryChannel plus;
};

// One polarization step on the (possibly distinct) pair (w, wp):
//   minus(y1,y2 | u1)    = 1/2 sum_{u2} w(y1 | u1^u2) wp(y2 | u2)
//   plus(y1,y2,u1 | u2)  = 1/2 w(y1 | u1^u2) wp(y2 | u2)
// Output layouts are fixed: minus indexes (y1,y2) with y2 fastest, plus
// indexes (y1,y2,u1) with u1 fastest; zero-probability outputs are stripped.
TransformPair transform(const BinaryChannel& w, const BinaryChannel& wp);
TransformPair transform(const BinaryChannel& w);

struct MergedChannel {
  BinaryChannel channel;
  double capacity_loss;  // exact I(W) drop incurred by the greedy merges
};

// Output-alphabet reduction. Outputs whose likelihood ratios are equal
// within lr_tol (relative, by cross products) merge exactly; then, in
// likelihood-ratio order, the adjacent pair whose fusion costs the least
// capacity merges greedily until at most max_outputs remain. A channel
// already within budget and with distinct ratios is returned unchanged;
// otherwise outputs come back sorted by likelihood ratio.
MergedChannel merge_outputs(const BinaryChannel& w, int max_outputs,
                            double lr_tol = 1e-9);

struct ConservationCheck {
  double parent_sum;    // I(w) + I(wp)
  double children_sum;  // I(minus) + I(plus)
};
ConservationCheck conservation_check(const BinaryChannel& w,
                                     const BinaryChannel& wp);

// Capacity gap I(W+) - I(W-) for w against the BEC and BSC of equal
// capacity; the BEC maximizes the gap, the BSC minimizes it.
struct ExtremalSplit {
  double gap;      // for w itself
  double bec_gap;  // upper envelope
  double bsc_gap;  // lower envelope
};
ExtremalSplit extremal_split_check(const BinaryChannel& w);

struct E0Improvement {
  double parent_double;  // 2 E0(rho, w)
  double children_sum;   // E0(rho, w-) + E0(rho, w+)
};
E0Improvement e0_improvement_check(const BinaryChannel& w, double rho);

}  // namespace polarlab
