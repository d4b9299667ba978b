#include "polarlab/ordering.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "polarlab/codec.hpp"
#include "polarlab/construction.hpp"
#include "polarlab/rng.hpp"

namespace polarlab {

namespace {

constexpr double kPairTol = 1e-9;

std::string output_name(const BinaryChannel& w, Eigen::Index y) {
  if (!w.labels().empty()) return w.labels()[y];
  return "#" + std::to_string(y);
}

// Survival transform E[(X - t)+] of a crossover distribution.
double integrated_survival(const CrossoverDistribution& d, double t) {
  double s = 0;
  for (const auto& a : d.atoms)
    if (a.p > t) s += a.mass * (a.p - t);
  return s;
}

// Phase-one simplex feasibility for A x = b, x >= 0, with b >= 0. Bland's
// rule; returns the residual infeasibility (0 when a feasible x exists).
double phase_one_infeasibility(const std::vector<std::vector<double>>& a,
                               const std::vector<double>& b) {
  const size_t m = a.size(), nv = a[0].size();
  const size_t width = nv + m + 1;
  std::vector<std::vector<double>> t(m + 1, std::vector<double>(width, 0.0));
  for (size_t r = 0; r < m; ++r) {
    for (size_t c = 0; c < nv; ++c) t[r][c] = a[r][c];
    t[r][nv + r] = 1.0;
    t[r][width - 1] = b[r];
  }
  std::vector<size_t> basis(m);
  for (size_t r = 0; r < m; ++r) basis[r] = nv + r;
  for (size_t c = 0; c < nv; ++c) {
    double s = 0;
    for (size_t r = 0; r < m; ++r) s += a[r][c];
    t[m][c] = -s;
  }
  double rhs = 0;
  for (size_t r = 0; r < m; ++r) rhs += b[r];
  t[m][width - 1] = -rhs;

  constexpr double kPivotTol = 1e-11;
  for (long iter = 0; iter < 200000; ++iter) {
    size_t enter = width;
    for (size_t c = 0; c + 1 < width; ++c) {
      if (t[m][c] < -kPivotTol) {
        enter = c;
        break;
      }
    }
    if (enter == width) return -t[m][width - 1];

    size_t leave = m;
    double best_ratio = 0;
    for (size_t r = 0; r < m; ++r) {
      if (t[r][enter] > kPivotTol) {
        const double ratio = t[r][width - 1] / t[r][enter];
        if (leave == m || ratio < best_ratio ||
            (ratio == best_ratio && basis[r] < basis[leave])) {
          leave = r;
          best_ratio = ratio;
        }
      }
    }
    if (leave == m)
      throw std::runtime_error("degradation check: unbounded phase-one");

    const double pivot = t[leave][enter];
    for (size_t c = 0; c < width; ++c) t[leave][c] /= pivot;
    for (size_t r = 0; r <= m; ++r) {
      if (r == leave) continue;
      const double f = t[r][enter];
      if (f == 0) continue;
      for (size_t c = 0; c < width; ++c) t[r][c] -= f * t[leave][c];
    }
    basis[leave] = enter;
  }
  throw std::runtime_error("degradation check: simplex iteration cap hit");
}

}  // namespace

double CrossoverDistribution::mean() const {
  double s = 0;
  for (const auto& a : atoms) s += a.p * a.mass;
  return s;
}

CrossoverDistribution bsc_decomposition(const BinaryChannel& w) {
  const Eigen::Index m = w.num_outputs();
  std::vector<bool> paired(m, false);
  std::vector<CrossoverDistribution::Atom> atoms;
  for (Eigen::Index y = 0; y < m; ++y) {
    if (paired[y]) continue;
    const double a = w.w0()[y], b = w.w1()[y];
    if (std::abs(a - b) <= kPairTol) {
      paired[y] = true;
      atoms.push_back({0.5, 0.5 * (a + b)});
      continue;
    }
    Eigen::Index mate = -1;
    for (Eigen::Index yp = y + 1; yp < m && mate < 0; ++yp) {
      if (paired[yp]) continue;
      if (std::abs(a - w.w1()[yp]) <= kPairTol &&
          std::abs(b - w.w0()[yp]) <= kPairTol)
        mate = yp;
    }
    if (mate < 0)
      throw std::invalid_argument(
          "bsc_decomposition: channel is not symmetric, output " +
          output_name(w, y) + " has no mirror");
    paired[y] = paired[mate] = true;
    const double hi = 0.5 * (a + w.w1()[mate]);
    const double lo = 0.5 * (b + w.w0()[mate]);
    atoms.push_back({std::min(lo, hi) / (lo + hi), lo + hi});
  }

  std::sort(atoms.begin(), atoms.end(),
            [](const auto& x, const auto& y) { return x.p < y.p; });
  CrossoverDistribution d;
  for (const auto& atom : atoms) {
    if (!d.atoms.empty() && atom.p - d.atoms.back().p <= 1e-12)
      d.atoms.back().mass += atom.mass;
    else
      d.atoms.push_back(atom);
  }
  return d;
}

ConvexOrderVerdict check_symmetric_convex_order(const BinaryChannel& w1,
                                                const BinaryChannel& w2) {
  const CrossoverDistribution d1 = bsc_decomposition(w1);
  const CrossoverDistribution d2 = bsc_decomposition(w2);
  if (std::abs(d1.mean() - d2.mean()) > 1e-9)
    return ConvexOrderVerdict::incomparable;

  std::vector<double> knots{0.0};
  for (const auto& a : d1.atoms) knots.push_back(a.p);
  for (const auto& a : d2.atoms) knots.push_back(a.p);
  bool ge = true, le = true;
  for (double t : knots) {
    const double s1 = integrated_survival(d1, t);
    const double s2 = integrated_survival(d2, t);
    ge = ge && s1 >= s2 - 1e-12;
    le = le && s2 >= s1 - 1e-12;
  }
  if (ge) return ConvexOrderVerdict::dominates;
  if (le) return ConvexOrderVerdict::dominated;
  return ConvexOrderVerdict::incomparable;
}

DegradationVerdict check_degradation(const BinaryChannel& w1,
                                     const BinaryChannel& w2) {
  const Eigen::Index m1 = w1.num_outputs(), m2 = w2.num_outputs();
  if (m1 > 32 || m2 > 32)
    throw std::invalid_argument(
        "check_degradation: alphabets larger than 32 outputs are not supported");

  // Variables P[i][j] = P(j | i), i over w1 outputs, j over w2 outputs.
  const size_t nv = static_cast<size_t>(m1 * m2);
  const size_t rows = static_cast<size_t>(2 * m2 + m1);
  std::vector<std::vector<double>> a(rows, std::vector<double>(nv, 0.0));
  std::vector<double> b(rows, 0.0);
  for (int x = 0; x < 2; ++x) {
    for (Eigen::Index j = 0; j < m2; ++j) {
      const size_t r = static_cast<size_t>(x * m2 + j);
      for (Eigen::Index i = 0; i < m1; ++i)
        a[r][static_cast<size_t>(i * m2 + j)] = w1.row(x)[i];
      b[r] = w2.row(x)[j];
    }
  }
  for (Eigen::Index i = 0; i < m1; ++i) {
    const size_t r = static_cast<size_t>(2 * m2 + i);
    for (Eigen::Index j = 0; j < m2; ++j)
      a[r][static_cast<size_t>(i * m2 + j)] = 1.0;
    b[r] = 1.0;
  }

  return phase_one_infeasibility(a, b) <= 1e-9 ? DegradationVerdict::degraded
                                               : DegradationVerdict::not_degraded;
}

OrderProbeReport polar_order_probe(const BinaryChannel& w1,
                                   const BinaryChannel& w2, int n, int k,
                                   long trials, std::uint64_t seed) {
  if (trials <= 0)
    throw std::invalid_argument("polar_order_probe: trials must be positive");
  const int n_total = 1 << n;
  const auto synth =
      synthesize(std::vector<BinaryChannel>(n_total, w1), SynthesisOptions{});
  const CodeSpec spec = select_information_set(synth.reports, k, "order-probe");

  ScDecoder dec(n);
  const std::vector<BinaryChannel> true1{w1}, true2{w2};
  LlrTables tab1(DecodeMetric::matched(), true1, n_total);
  LlrTables tab2(DecodeMetric::matched(), true2, n_total);

  long wrong1 = 0, wrong2 = 0;
  std::vector<std::uint8_t> u(n_total);
  std::vector<double> llrs;
  for (long t = 0; t < trials; ++t) {
    Rng msg_rng(derive_seed(seed, "order-msg", static_cast<std::uint64_t>(t)));
    for (int i = 0; i < n_total; ++i)
      u[i] = spec.frozen_mask[i] ? spec.frozen_values[i]
                                 : static_cast<std::uint8_t>(msg_rng.coin());
    const std::vector<std::uint8_t> x = polar_encode(u);

    Rng rng1(derive_seed(seed, "order-w1", static_cast<std::uint64_t>(t)));
    const std::vector<int> y1 = transmit(x, true1, rng1);
    tab1.fill(y1, llrs);
    wrong1 += dec.decode(llrs, spec).u_hat != u;

    Rng rng2(derive_seed(seed, "order-w2", static_cast<std::uint64_t>(t)));
    const std::vector<int> y2 = transmit(x, true2, rng2);
    tab2.fill(y2, llrs);
    wrong2 += dec.decode(llrs, spec).u_hat != u;
  }

  OrderProbeReport r;
  r.w1 = w1.name().empty() ? "w1" : w1.name();
  r.w2 = w2.name().empty() ? "w2" : w2.name();
  r.n = n;
  r.k = k;
  r.trials = trials;
  r.err1 = static_cast<double>(wrong1) / trials;
  r.err2 = static_cast<double>(wrong2) / trials;
  r.se1 = std::sqrt(r.err1 * (1 - r.err1) / trials);
  r.se2 = std::sqrt(r.err2 * (1 - r.err2) / trials);
  // A degraded w2 may not beat w1 by more than Monte Carlo noise.
  r.consistent = r.err2 >= r.err1 - 3 * std::sqrt(r.se1 * r.se1 + r.se2 * r.se2);
  return r;
}

std::string order_probe_csv(const std::vector<OrderProbeReport>& rows) {
  std::string out = "w1,w2,n,k,err1,err2,se1,se2,verdict\n";
  char buf[512];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf,
                  "\"%s\",\"%s\",%d,%d,%.17g,%.17g,%.17g,%.17g,%s\n",
                  r.w1.c_str(), r.w2.c_str(), r.n, r.k, r.err1, r.err2, r.se1,
                  r.se2, r.consistent ? "consistent" : "inconsistent");
    out += buf;
  }
  return out;
}

}  // namespace polarlab
