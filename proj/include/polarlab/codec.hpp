#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "polarlab/channel.hpp"
#include "polarlab/construction.hpp"
#include "polarlab/rng.hpp"

namespace polarlab {

// Decoder LLR saturation, natural-log units.
inline constexpr double kLlrCap = 40.0;

std::vector<int> bit_reversal_permutation(int n);

// x = u G in GF(2): bit-reversal reorder, then n butterfly stages of N/2
// XORs each. The map is an involution.
void polar_encode_inplace(std::vector<std::uint8_t>& u);
std::vector<std::uint8_t> polar_encode(std::vector<std::uint8_t> u);

// Channel law assumed by the decoder.
struct DecodeMetric {
  enum class Kind { matched, mismatched, glrt };
  Kind kind = Kind::matched;
  std::vector<BinaryChannel> model;     // mismatched: one, or one per position
  std::optional<ChannelClass> members;  // glrt

  static DecodeMetric matched();
  static DecodeMetric mismatched(BinaryChannel model);
  static DecodeMetric mismatched(std::vector<BinaryChannel> per_position);
  static DecodeMetric glrt(ChannelClass cls);
};

// y[i] sampled from channels[i] (or channels[0] if only one is given).
std::vector<int> transmit(std::span<const std::uint8_t> x,
                          const std::vector<BinaryChannel>& channels, Rng& rng);

// Saturated per-position leaf LLR tables for a metric.
class LlrTables {
 public:
  LlrTables(const DecodeMetric& metric,
            const std::vector<BinaryChannel>& true_channels, int block_length);
  void fill(std::span<const int> y, std::vector<double>& llrs) const;

 private:
  std::vector<Eigen::ArrayXd> tables_;  // size 1 (stationary) or N
};

struct DecodeResult {
  std::vector<std::uint8_t> u_hat, x_hat;
  long node_visits = 0;  // f/g evaluations; N log2 N per full pass
};

// Successive-cancellation decoder with reusable per-level buffers.
class ScDecoder {
 public:
  explicit ScDecoder(int n);

  DecodeResult decode(std::span<const double> leaf_llrs, const CodeSpec& spec);

  // Genie pass assuming the all-zero codeword was sent: each index is judged
  // with every earlier decision corrected. errors[i] is set when index i
  // decides wrong; an exact LLR tie flips a fair coin from rng.
  long genie_pass(std::span<const double> leaf_llrs, Rng& rng,
                  std::span<std::uint8_t> errors);

 private:
  void decode_rec(int lv, int base, const CodeSpec& spec,
                  std::vector<std::uint8_t>& u_hat);
  void genie_rec(int lv, int base, Rng& rng, std::span<std::uint8_t> errors);

  int n_;
  long visits_ = 0;
  Rng* rng_ = nullptr;
  std::vector<std::vector<double>> llr_;          // per level, size 2^lv
  std::vector<std::vector<std::uint8_t>> bits_;   // partial sums
  std::vector<std::vector<std::uint8_t>> left_;   // saved left-half sums
};

// One-shot decode of a received word under a matched or mismatched metric.
DecodeResult sc_decode(std::span<const int> y, const CodeSpec& spec,
                       const DecodeMetric& metric,
                       const std::vector<BinaryChannel>& true_channels);

struct GlrtResult {
  std::vector<std::uint8_t> u_hat, x_hat;
  int member = -1;  // index of the class member whose candidate won
};

// Decode once per class member, score each distinct candidate codeword by
// its best log-likelihood over the class, keep the best. Score ties resolve
// to the candidate first produced by the smallest member index.
GlrtResult glrt_decode(std::span<const int> y, const CodeSpec& spec,
                       const ChannelClass& cls);

namespace detail {

// Per-index genie error counts over `trials` all-zero transmissions. Trial
// t's stream is derive_seed(seed, "genie", t), so any thread count yields
// the same counts.
std::vector<long> genie_error_counts(const std::vector<BinaryChannel>& base,
                                     const CodeSpec& spec,
                                     const DecodeMetric& metric, long trials,
                                     std::uint64_t seed, int threads);

}  // namespace detail

}  // namespace polarlab
