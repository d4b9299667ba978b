#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "polarlab/channel.hpp"
#include "polarlab/codec.hpp"
#include "polarlab/construction.hpp"

namespace polarlab {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kBadConfig = 2,   // unknown kind, malformed or unknown config fields
  kBadChannel = 3,  // invalid channel specification
  kBadLength = 4,   // block length not a power of two
};

struct RunOptions {
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed;  // overrides the config's seed
  int threads = 1;
};

// Runs the experiment described by a JSON config file and writes one CSV
// plus manifest.json into out_dir. Diagnostics go to log. Returns ExitCode.
int run_experiment(const std::filesystem::path& config_path,
                   const RunOptions& opt, std::ostream& log);

// Core-identity self-check; one line per check. Returns kOk or kFailure.
int run_verify(std::ostream& out);

struct BlerResult {
  long trials = 0, errors = 0;
  double bler = 0, se = 0;
};

// Monte Carlo block error of a code under any metric kind. Messages, noise
// and tie coins are all derived per trial from the seed, so the result does
// not depend on the thread count.
BlerResult mc_block_error(const std::vector<BinaryChannel>& true_channels,
                          const CodeSpec& spec, const DecodeMetric& metric,
                          long trials, std::uint64_t seed, int threads = 1);

struct ScalingRow {
  int n = 0;
  double union_bound = 0;  // sum of the best ceil(rate 2^n) erasure z values
  double loglog = 0;       // log2(-log2(union_bound))
};
std::vector<ScalingRow> scaling_probe(double eps, double rate,
                                      const std::vector<int>& n_list);

struct MismatchedRatePoint {
  int n = 0;
  int k_star = 0;   // largest K with estimated union error within target
  double rate = 0;  // k_star / 2^n
  int k_lo = 0, k_hi = 0;  // same threshold at +/- 2 SE of the union sum
  long trials = 0;
};

// Genie-estimated achievable rate of decoding metric v over true channel w.
MismatchedRatePoint mismatched_rate_estimate(const BinaryChannel& w,
                                             const BinaryChannel& v, int n,
                                             double target_bler, long trials,
                                             std::uint64_t seed,
                                             int threads = 1);

}  // namespace polarlab
