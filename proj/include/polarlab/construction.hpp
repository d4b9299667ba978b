#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "polarlab/channel.hpp"

namespace polarlab {

struct DecodeMetric;

// Frozen-set description of a length 2^n polar code. frozen_values may be
// nonzero only where frozen_mask is set.
struct CodeSpec {
  int n = 0;
  std::vector<std::uint8_t> frozen_mask;    // length 2^n, 1 = frozen
  std::vector<std::uint8_t> frozen_values;  // length 2^n
  std::string provenance;

  int block_length() const { return 1 << n; }
  int message_length() const;
  void validate() const;  // throws std::invalid_argument on violation
};

struct BitChannelReport {
  int index = 0;
  double z = 0;  // Bhattacharyya parameter of the synthesized channel
  double i = 0;  // symmetric capacity of the synthesized channel
  std::optional<double> mc_error, mc_se;
};

struct SynthesisOptions {
  int merge_cap = 64;     // output-alphabet budget per synthesized channel
  double lr_tol = 1e-9;   // exact-merge likelihood-ratio tolerance
  bool keep_channels = false;
};

struct SynthesisResult {
  std::vector<BitChannelReport> reports;  // one per input index, in order
  std::vector<BinaryChannel> channels;    // same order; empty unless kept
  std::vector<double> level_capacity_sums;  // after 0..n levels, array totals
  double merge_loss = 0;  // total capacity forfeited to alphabet merging
  bool erasure_path = false;  // exact scalar recursion was applicable
};

// Butterfly synthesis of all bit channels from a base layer of size 2^n.
// A base of erasure channels runs through the exact scalar recursion; the
// general path merges every synthesized channel down to merge_cap outputs.
SynthesisResult synthesize(const std::vector<BinaryChannel>& base,
                           const SynthesisOptions& opt = {});

// Information set = k indices of smallest score, ties to the smaller index.
// The score is z, unless every report carries a Monte Carlo estimate, in
// which case the estimates rank (genie-driven construction).
CodeSpec select_information_set(const std::vector<BitChannelReport>& reports,
                                int k, std::string provenance = "");

// Worst case over the class: each index is scored by its largest z across
// members, then the k best indices are kept.
CodeSpec compound_construct(const ChannelClass& cls, int n, int k,
                            const SynthesisOptions& opt = {});

// Genie-aided Monte Carlo: transmit all-zero codewords of length 2^spec.n
// over the base channels, decode every index with all earlier decisions
// corrected, and estimate each index's first-error probability. An exact
// LLR tie is resolved by a fair coin from the trial's stream. base may hold
// one channel (stationary) or one per position.
std::vector<BitChannelReport> mc_genie_estimate(
    const std::vector<BinaryChannel>& base, const CodeSpec& spec,
    const DecodeMetric& metric, long trials, std::uint64_t seed);

std::string reports_csv(const std::vector<BitChannelReport>& reports);

nlohmann::json code_spec_to_json(const CodeSpec& spec);
CodeSpec code_spec_from_json(const nlohmann::json& j);

}  // namespace polarlab
