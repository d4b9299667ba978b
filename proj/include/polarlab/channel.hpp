#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace polarlab {

// Binary-input discrete memoryless channel. Rows are conditional
// distributions over a common finite output alphabet. Invariants enforced at
// construction: entries nonnegative and finite, each row sums to 1 within
// 1e-12, no output has zero probability under both inputs. Immutable.
class BinaryChannel {
 public:
  BinaryChannel(Eigen::ArrayXd w0, Eigen::ArrayXd w1,
                std::vector<std::string> labels = {}, std::string name = "");

  Eigen::Index num_outputs() const { return w0_.size(); }
  const Eigen::ArrayXd& w0() const { return w0_; }
  const Eigen::ArrayXd& w1() const { return w1_; }
  const Eigen::ArrayXd& row(int input) const { return input ? w1_ : w0_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& name() const { return name_; }

 private:
  Eigen::ArrayXd w0_, w1_;
  std::vector<std::string> labels_;  // empty, or one label per output
  std::string name_;
};

// Non-empty set of candidate channels sharing one code design.
struct ChannelClass {
  std::string name;
  std::vector<BinaryChannel> members;

  ChannelClass(std::string name_, std::vector<BinaryChannel> members_);
};

BinaryChannel make_bsc(double p);    // p in [0, 1/2]
BinaryChannel make_bec(double eps);  // eps in [0, 1]

// BPSK over AWGN (bit 0 -> +1), LLR-domain quantization to `bins` equal-width
// cells spanning [-Lmax, Lmax] with the outer cells extended to +/-inf.
// snr is linear (unit symbol energy over noise variance); bins even, >= 2.
BinaryChannel make_quantized_bawgn(double snr, int bins);

// Structural erasure test: every output either reveals the input (other row
// exactly zero) or has both rows equal within 1e-9 relative. Returns the
// total erasure probability, or nullopt.
std::optional<double> erasure_parameter(const BinaryChannel& w);

double binary_entropy(double p);  // bits, p in [0, 1]

// I(W): mutual information under the uniform input, in bits.
double symmetric_capacity(const BinaryChannel& w);

// Z(W) = sum_y sqrt(W(y|0) W(y|1)), in [0, 1].
double bhattacharyya(const BinaryChannel& w);

// Gallager E0 under the uniform input, in bits; rho > -1.
double gallager_e0(const BinaryChannel& w, double rho);

// Accepts either an explicit literal {"w0":[...],"w1":[...],"labels":?,
// "name":?} or a family form {"family":"bsc"|"bec"|"bawgn", ...params}.
BinaryChannel channel_from_json(const nlohmann::json& spec);
nlohmann::json channel_to_json(const BinaryChannel& w);

}  // namespace polarlab
