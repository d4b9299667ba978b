#include "polarlab/transform.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

#include "polarlab/extremal.hpp"

namespace polarlab {

TransformPair transform(const BinaryChannel& w, const BinaryChannel& wp) {
  const Eigen::Index m1 = w.num_outputs(), m2 = wp.num_outputs();
  Eigen::ArrayXd minus0(m1 * m2), minus1(m1 * m2);
  Eigen::ArrayXd plus0(m1 * m2 * 2), plus1(m1 * m2 * 2);
  for (Eigen::Index y1 = 0; y1 < m1; ++y1) {
    const double a0 = w.w0()[y1], a1 = w.w1()[y1];
    for (Eigen::Index y2 = 0; y2 < m2; ++y2) {
      const double b0 = wp.w0()[y2], b1 = wp.w1()[y2];
      const Eigen::Index ym = y1 * m2 + y2;
      minus0[ym] = 0.5 * (a0 * b0 + a1 * b1);
      minus1[ym] = 0.5 * (a1 * b0 + a0 * b1);
      // plus output (y1, y2, u1), u1 fastest
      plus0[2 * ym + 0] = 0.5 * a0 * b0;
      plus1[2 * ym + 0] = 0.5 * a1 * b1;
      plus0[2 * ym + 1] = 0.5 * a1 * b0;
      plus1[2 * ym + 1] = 0.5 * a0 * b1;
    }
  }
  // Row sums drift from 1 by O(eps) per level and would compound across deep
  // synthesis; renormalizing here keeps the channel invariant tight.
  minus0 /= minus0.sum();
  minus1 /= minus1.sum();
  plus0 /= plus0.sum();
  plus1 /= plus1.sum();
  return {BinaryChannel(minus0, minus1), BinaryChannel(plus0, plus1)};
}

TransformPair transform(const BinaryChannel& w) { return transform(w, w); }

MergedChannel merge_outputs(const BinaryChannel& w, int max_outputs,
                            double lr_tol) {
  if (max_outputs < 2)
    throw std::invalid_argument("merge_outputs needs max_outputs >= 2");
  if (!(lr_tol >= 0))
    throw std::invalid_argument("merge_outputs needs lr_tol >= 0");

  const Eigen::Index m = w.num_outputs();
  std::vector<Eigen::Index> order(m);
  for (Eigen::Index y = 0; y < m; ++y) order[y] = y;
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    const double ra = w.w0()[a] / (w.w0()[a] + w.w1()[a]);
    const double rb = w.w0()[b] / (w.w0()[b] + w.w1()[b]);
    if (ra != rb) return ra < rb;
    return a < b;
  });

  // Exact-ratio classes: adjacent in ratio order, cross products equal
  // within lr_tol (relative). Chained merging is intentional.
  std::vector<double> g0, g1;
  bool any_exact = false;
  for (Eigen::Index k = 0; k < m; ++k) {
    const double a0 = w.w0()[order[k]], a1 = w.w1()[order[k]];
    if (!g0.empty()) {
      const double c1 = g0.back() * a1, c2 = a0 * g1.back();
      if (std::abs(c1 - c2) <= lr_tol * (c1 + c2)) {
        g0.back() += a0;
        g1.back() += a1;
        any_exact = true;
        continue;
      }
    }
    g0.push_back(a0);
    g1.push_back(a1);
  }

  if (!any_exact && m <= max_outputs) return {w, 0.0};

  const size_t n = g0.size();
  if (n > static_cast<size_t>(max_outputs)) {
    // Greedy merge over a doubly linked list in likelihood-ratio order: the
    // ratio-adjacent pair whose fusion costs the least capacity goes first.
    // Lazy heap entries are invalidated by version stamps.
    std::vector<int> prev(n), next(n), version(n, 0);
    for (size_t k = 0; k < n; ++k) {
      prev[k] = static_cast<int>(k) - 1;
      next[k] = (k + 1 < n) ? static_cast<int>(k) + 1 : -1;
    }
    auto output_capacity = [](double p, double q) {
      double c = 0;
      if (p > 0) c += 0.5 * p * std::log2(2 * p / (p + q));
      if (q > 0) c += 0.5 * q * std::log2(2 * q / (p + q));
      return c;
    };
    auto merge_cost = [&](int l, int r) {
      return output_capacity(g0[l], g1[l]) + output_capacity(g0[r], g1[r]) -
             output_capacity(g0[l] + g0[r], g1[l] + g1[r]);
    };
    struct Cand {
      double cost;
      int left, vl, vr;
    };
    auto worse = [](const Cand& a, const Cand& b) {
      if (a.cost != b.cost) return a.cost > b.cost;
      return a.left > b.left;
    };
    std::priority_queue<Cand, std::vector<Cand>, decltype(worse)> heap(worse);
    for (size_t k = 0; k + 1 < n; ++k)
      heap.push({merge_cost(static_cast<int>(k), static_cast<int>(k) + 1),
                 static_cast<int>(k), 0, 0});

    size_t alive = n;
    while (alive > static_cast<size_t>(max_outputs)) {
      const Cand c = heap.top();
      heap.pop();
      const int l = c.left, r = next[l];
      if (r < 0 || version[l] != c.vl || version[r] != c.vr) continue;
      g0[l] += g0[r];
      g1[l] += g1[r];
      next[l] = next[r];
      if (next[r] >= 0) prev[next[r]] = l;
      ++version[l];
      ++version[r];
      --alive;
      if (prev[l] >= 0)
        heap.push({merge_cost(prev[l], l), prev[l], version[prev[l]],
                   version[l]});
      if (next[l] >= 0)
        heap.push({merge_cost(l, next[l]), l, version[l], version[next[l]]});
    }

    std::vector<double> h0, h1;
    h0.reserve(alive);
    h1.reserve(alive);
    int head = 0;
    while (prev[head] >= 0) head = prev[head];
    for (int k = head; k >= 0; k = next[k]) {
      h0.push_back(g0[k]);
      h1.push_back(g1[k]);
    }
    g0 = std::move(h0);
    g1 = std::move(h1);
  }

  Eigen::ArrayXd r0 = Eigen::Map<const Eigen::ArrayXd>(g0.data(), g0.size());
  Eigen::ArrayXd r1 = Eigen::Map<const Eigen::ArrayXd>(g1.data(), g1.size());
  BinaryChannel merged(r0, r1, {}, w.name());
  const double loss = symmetric_capacity(w) - symmetric_capacity(merged);
  return {std::move(merged), loss};
}

ConservationCheck conservation_check(const BinaryChannel& w,
                                     const BinaryChannel& wp) {
  const TransformPair t = transform(w, wp);
  return {symmetric_capacity(w) + symmetric_capacity(wp),
          symmetric_capacity(t.minus) + symmetric_capacity(t.plus)};
}

ExtremalSplit extremal_split_check(const BinaryChannel& w) {
  const double i = symmetric_capacity(w);
  auto gap_of = [](const BinaryChannel& c) {
    const TransformPair t = transform(c);
    return symmetric_capacity(t.plus) - symmetric_capacity(t.minus);
  };
  return {gap_of(w), gap_of(make_bec(1.0 - i)), gap_of(bsc_with_capacity(i))};
}

E0Improvement e0_improvement_check(const BinaryChannel& w, double rho) {
  const TransformPair t = transform(w);
  return {2.0 * gallager_e0(w, rho),
          gallager_e0(t.minus, rho) + gallager_e0(t.plus, rho)};
}

}  // namespace polarlab
