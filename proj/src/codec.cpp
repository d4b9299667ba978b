#include "polarlab/codec.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <thread>

namespace polarlab {

namespace {

double clamp_llr(double v) { return std::clamp(v, -kLlrCap, kLlrCap); }

// Exact check-node combination in log domain:
//   boxplus(a, b) = 2 atanh(tanh(a/2) tanh(b/2))
// evaluated in the log1p form, which is stable for all magnitudes.
double boxplus(double a, double b) {
  const double sa = std::abs(a), sb = std::abs(b);
  const double sign = (a < 0) == (b < 0) ? 1.0 : -1.0;
  return sign * std::min(sa, sb) + std::log1p(std::exp(-(sa + sb))) -
         std::log1p(std::exp(-std::abs(sa - sb)));
}

Eigen::ArrayXd llr_table(const BinaryChannel& w) {
  Eigen::ArrayXd t(w.num_outputs());
  for (Eigen::Index y = 0; y < w.num_outputs(); ++y) {
    const double a = w.w0()[y], b = w.w1()[y];
    if (a == 0)
      t[y] = -kLlrCap;
    else if (b == 0)
      t[y] = kLlrCap;
    else
      t[y] = clamp_llr(std::log(a / b));
  }
  return t;
}

}  // namespace

std::vector<int> bit_reversal_permutation(int n) {
  if (n < 0 || n > 30)
    throw std::invalid_argument("bit_reversal_permutation: n outside [0, 30]");
  const int n_total = 1 << n;
  std::vector<int> rev(n_total);
  for (int i = 0; i < n_total; ++i) {
    int r = 0;
    for (int b = 0; b < n; ++b) r = (r << 1) | ((i >> b) & 1);
    rev[i] = r;
  }
  return rev;
}

void polar_encode_inplace(std::vector<std::uint8_t>& u) {
  const size_t n_total = u.size();
  if (n_total == 0 || (n_total & (n_total - 1)) != 0)
    throw std::invalid_argument("polar_encode: length must be a power of two");
  const int n = std::countr_zero(n_total);
  const auto rev = bit_reversal_permutation(n);
  for (size_t i = 0; i < n_total; ++i) {
    const size_t r = static_cast<size_t>(rev[i]);
    if (r > i) std::swap(u[i], u[r]);
  }
  for (size_t stride = 1; stride < n_total; stride *= 2)
    for (size_t b = 0; b < n_total; b += 2 * stride)
      for (size_t j = b; j < b + stride; ++j) u[j] ^= u[j + stride];
}

std::vector<std::uint8_t> polar_encode(std::vector<std::uint8_t> u) {
  polar_encode_inplace(u);
  return u;
}

DecodeMetric DecodeMetric::matched() { return {}; }

DecodeMetric DecodeMetric::mismatched(BinaryChannel model) {
  DecodeMetric m;
  m.kind = Kind::mismatched;
  m.model.push_back(std::move(model));
  return m;
}

DecodeMetric DecodeMetric::mismatched(std::vector<BinaryChannel> per_position) {
  if (per_position.empty())
    throw std::invalid_argument("mismatched metric needs at least one channel");
  DecodeMetric m;
  m.kind = Kind::mismatched;
  m.model = std::move(per_position);
  return m;
}

DecodeMetric DecodeMetric::glrt(ChannelClass cls) {
  DecodeMetric m;
  m.kind = Kind::glrt;
  m.members = std::move(cls);
  return m;
}

std::vector<int> transmit(std::span<const std::uint8_t> x,
                          const std::vector<BinaryChannel>& channels, Rng& rng) {
  if (channels.size() != 1 && channels.size() != x.size())
    throw std::invalid_argument("transmit: need one channel or one per symbol");
  std::vector<int> y(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    const BinaryChannel& w = channels[channels.size() == 1 ? 0 : i];
    const Eigen::ArrayXd& row = w.row(x[i]);
    double u = rng.uniform01();
    Eigen::Index out = row.size() - 1;
    double acc = 0;
    for (Eigen::Index c = 0; c + 1 < row.size(); ++c) {
      acc += row[c];
      if (u < acc) {
        out = c;
        break;
      }
    }
    y[i] = static_cast<int>(out);
  }
  return y;
}

LlrTables::LlrTables(const DecodeMetric& metric,
                     const std::vector<BinaryChannel>& true_channels,
                     int block_length) {
  const std::vector<BinaryChannel>* src = nullptr;
  switch (metric.kind) {
    case DecodeMetric::Kind::matched:
      src = &true_channels;
      break;
    case DecodeMetric::Kind::mismatched:
      src = &metric.model;
      break;
    case DecodeMetric::Kind::glrt:
      throw std::invalid_argument("LlrTables: GLRT has no single-metric table");
  }
  if (src->size() != 1 && src->size() != static_cast<size_t>(block_length))
    throw std::invalid_argument("LlrTables: need one channel or one per position");
  tables_.reserve(src->size());
  for (const auto& w : *src) tables_.push_back(llr_table(w));
}

void LlrTables::fill(std::span<const int> y, std::vector<double>& llrs) const {
  llrs.resize(y.size());
  for (size_t i = 0; i < y.size(); ++i) {
    const Eigen::ArrayXd& t = tables_[tables_.size() == 1 ? 0 : i];
    if (y[i] < 0 || y[i] >= t.size())
      throw std::invalid_argument("LlrTables: received symbol out of range");
    llrs[i] = t[y[i]];
  }
}

ScDecoder::ScDecoder(int n) : n_(n) {
  if (n < 0 || n > 30)
    throw std::invalid_argument("ScDecoder: n outside [0, 30]");
  llr_.resize(n + 1);
  bits_.resize(n + 1);
  left_.resize(n + 1);
  for (int lv = 0; lv <= n; ++lv) {
    llr_[lv].resize(size_t{1} << lv);
    bits_[lv].resize(size_t{1} << lv);
    left_[lv].resize(size_t{1} << lv);
  }
}

void ScDecoder::decode_rec(int lv, int base, const CodeSpec& spec,
                           std::vector<std::uint8_t>& u_hat) {
  if (lv == 0) {
    std::uint8_t bit;
    if (spec.frozen_mask[base])
      bit = spec.frozen_values[base];
    else
      bit = llr_[0][0] >= 0 ? 0 : 1;
    bits_[0][0] = bit;
    u_hat[base] = bit;
    return;
  }
  const int h = 1 << (lv - 1);
  for (int p = 0; p < h; ++p) {
    llr_[lv - 1][p] = boxplus(llr_[lv][2 * p], llr_[lv][2 * p + 1]);
    ++visits_;
  }
  decode_rec(lv - 1, base, spec, u_hat);
  std::copy_n(bits_[lv - 1].begin(), h, left_[lv - 1].begin());
  for (int p = 0; p < h; ++p) {
    const double g = llr_[lv][2 * p + 1] +
                     (left_[lv - 1][p] ? -llr_[lv][2 * p] : llr_[lv][2 * p]);
    llr_[lv - 1][p] = clamp_llr(g);
    ++visits_;
  }
  decode_rec(lv - 1, base + h, spec, u_hat);
  for (int p = 0; p < h; ++p) {
    bits_[lv][2 * p] = left_[lv - 1][p] ^ bits_[lv - 1][p];
    bits_[lv][2 * p + 1] = bits_[lv - 1][p];
  }
}

DecodeResult ScDecoder::decode(std::span<const double> leaf_llrs,
                               const CodeSpec& spec) {
  spec.validate();
  if (spec.n != n_ || leaf_llrs.size() != (size_t{1} << n_))
    throw std::invalid_argument("ScDecoder: spec/LLR size mismatch");
  std::copy(leaf_llrs.begin(), leaf_llrs.end(), llr_[n_].begin());
  visits_ = 0;
  DecodeResult res;
  res.u_hat.resize(size_t{1} << n_);
  decode_rec(n_, 0, spec, res.u_hat);
  res.x_hat = polar_encode(res.u_hat);
  res.node_visits = visits_;
  return res;
}

void ScDecoder::genie_rec(int lv, int base, Rng& rng,
                          std::span<std::uint8_t> errors) {
  if (lv == 0) {
    const double l = llr_[0][0];
    errors[base] = l < 0 || (l == 0 && rng.coin());
    return;
  }
  const int h = 1 << (lv - 1);
  for (int p = 0; p < h; ++p) {
    llr_[lv - 1][p] = boxplus(llr_[lv][2 * p], llr_[lv][2 * p + 1]);
    ++visits_;
  }
  genie_rec(lv - 1, base, rng, errors);
  // All-zero transmission with corrected decisions: partial sums vanish.
  for (int p = 0; p < h; ++p) {
    llr_[lv - 1][p] = clamp_llr(llr_[lv][2 * p + 1] + llr_[lv][2 * p]);
    ++visits_;
  }
  genie_rec(lv - 1, base + h, rng, errors);
}

long ScDecoder::genie_pass(std::span<const double> leaf_llrs, Rng& rng,
                           std::span<std::uint8_t> errors) {
  if (leaf_llrs.size() != (size_t{1} << n_) || errors.size() != leaf_llrs.size())
    throw std::invalid_argument("genie_pass: size mismatch");
  std::copy(leaf_llrs.begin(), leaf_llrs.end(), llr_[n_].begin());
  visits_ = 0;
  genie_rec(n_, 0, rng, errors);
  return visits_;
}

DecodeResult sc_decode(std::span<const int> y, const CodeSpec& spec,
                       const DecodeMetric& metric,
                       const std::vector<BinaryChannel>& true_channels) {
  if (metric.kind == DecodeMetric::Kind::glrt)
    throw std::invalid_argument("sc_decode: use glrt_decode for a GLRT metric");
  ScDecoder dec(spec.n);
  LlrTables tables(metric, true_channels, spec.block_length());
  std::vector<double> llrs;
  tables.fill(y, llrs);
  return dec.decode(llrs, spec);
}

GlrtResult glrt_decode(std::span<const int> y, const CodeSpec& spec,
                       const ChannelClass& cls) {
  spec.validate();
  if (y.size() != static_cast<size_t>(spec.block_length()))
    throw std::invalid_argument("glrt_decode: word length mismatch");

  ScDecoder dec(spec.n);
  std::vector<double> llrs;
  // Candidate codewords, deduplicated, in first-producer order.
  std::vector<DecodeResult> candidates;
  std::vector<int> producer;
  std::map<std::vector<std::uint8_t>, size_t> seen;
  for (size_t m = 0; m < cls.members.size(); ++m) {
    LlrTables tables(DecodeMetric::mismatched(cls.members[m]), {},
                     spec.block_length());
    tables.fill(y, llrs);
    DecodeResult r = dec.decode(llrs, spec);
    if (seen.emplace(r.x_hat, candidates.size()).second) {
      candidates.push_back(std::move(r));
      producer.push_back(static_cast<int>(m));
    }
  }

  // Log-likelihood tables per member, -inf for zero-probability symbols.
  std::vector<std::array<Eigen::ArrayXd, 2>> logp;
  logp.reserve(cls.members.size());
  for (const auto& w : cls.members) {
    std::array<Eigen::ArrayXd, 2> rows;
    for (int x = 0; x < 2; ++x) {
      rows[x].resize(w.num_outputs());
      for (Eigen::Index c = 0; c < w.num_outputs(); ++c) {
        const double p = w.row(x)[c];
        rows[x][c] = p > 0 ? std::log(p)
                           : -std::numeric_limits<double>::infinity();
      }
    }
    logp.push_back(std::move(rows));
  }

  size_t best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (size_t c = 0; c < candidates.size(); ++c) {
    double score = -std::numeric_limits<double>::infinity();
    for (size_t m = 0; m < cls.members.size(); ++m) {
      const auto& w = cls.members[m];
      double s = 0;
      for (size_t i = 0; i < y.size(); ++i) {
        if (y[i] < 0 || y[i] >= w.num_outputs())
          throw std::invalid_argument("glrt_decode: symbol outside alphabet");
        s += logp[m][candidates[c].x_hat[i]][y[i]];
      }
      score = std::max(score, s);
    }
    if (score > best_score) {
      best_score = score;
      best = c;
    }
  }

  return {std::move(candidates[best].u_hat), std::move(candidates[best].x_hat),
          producer[best]};
}

namespace detail {

std::vector<long> genie_error_counts(const std::vector<BinaryChannel>& base,
                                     const CodeSpec& spec,
                                     const DecodeMetric& metric, long trials,
                                     std::uint64_t seed, int threads) {
  spec.validate();
  if (trials <= 0)
    throw std::invalid_argument("genie_error_counts: trials must be positive");
  const int n_total = spec.block_length();

  auto run_range = [&](long first, long last) {
    std::vector<long> counts(n_total, 0);
    ScDecoder dec(spec.n);
    LlrTables tables(metric, base, n_total);
    const std::vector<std::uint8_t> zeros(n_total, 0);
    std::vector<std::uint8_t> errors(n_total);
    std::vector<double> llrs;
    for (long t = first; t < last; ++t) {
      Rng rng(derive_seed(seed, "genie", static_cast<std::uint64_t>(t)));
      const std::vector<int> y = transmit(zeros, base, rng);
      tables.fill(y, llrs);
      dec.genie_pass(llrs, rng, errors);
      for (int i = 0; i < n_total; ++i) counts[i] += errors[i];
    }
    return counts;
  };

  threads = std::max(1, threads);
  if (threads == 1 || trials < 2 * threads) return run_range(0, trials);

  const long chunk = (trials + threads - 1) / threads;
  std::vector<std::vector<long>> partial(threads);
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w) {
    const long first = w * chunk;
    const long last = std::min(trials, first + chunk);
    if (first >= last) break;
    pool.emplace_back([&, w, first, last] { partial[w] = run_range(first, last); });
  }
  for (auto& th : pool) th.join();
  std::vector<long> counts(n_total, 0);
  for (const auto& p : partial)
    for (size_t i = 0; i < p.size(); ++i) counts[i] += p[i];
  return counts;
}

}  // namespace detail

std::vector<BitChannelReport> mc_genie_estimate(
    const std::vector<BinaryChannel>& base, const CodeSpec& spec,
    const DecodeMetric& metric, long trials, std::uint64_t seed) {
  const auto counts =
      detail::genie_error_counts(base, spec, metric, trials, seed, 1);
  const int n_total = spec.block_length();
  std::vector<BitChannelReport> reports(n_total);
  for (int i = 0; i < n_total; ++i) {
    const double p = static_cast<double>(counts[i]) / trials;
    reports[i].index = i;
    reports[i].mc_error = p;
    reports[i].mc_se = std::sqrt(p * (1 - p) / trials);
  }
  return reports;
}

}  // namespace polarlab
