#include "polarlab/channel.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <utility>

#include <nlohmann/json.hpp>

namespace polarlab {

namespace {

constexpr double kRowSumTol = 1e-12;

std::string format_name(const char* fmt, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, a);
  return buf;
}

}  // namespace

BinaryChannel::BinaryChannel(Eigen::ArrayXd w0, Eigen::ArrayXd w1,
                             std::vector<std::string> labels, std::string name)
    : w0_(std::move(w0)),
      w1_(std::move(w1)),
      labels_(std::move(labels)),
      name_(std::move(name)) {
  if (w0_.size() != w1_.size() || w0_.size() < 1)
    throw std::invalid_argument("channel rows must share a non-empty alphabet");
  if (!labels_.empty() && static_cast<Eigen::Index>(labels_.size()) != w0_.size())
    throw std::invalid_argument("channel labels must match the alphabet size");
  for (Eigen::Index y = 0; y < w0_.size(); ++y) {
    if (!(w0_[y] >= 0) || !(w1_[y] >= 0) || !std::isfinite(w0_[y]) ||
        !std::isfinite(w1_[y]))
      throw std::invalid_argument("channel entries must be finite and >= 0");
  }
  if (std::abs(w0_.sum() - 1.0) > kRowSumTol ||
      std::abs(w1_.sum() - 1.0) > kRowSumTol)
    throw std::invalid_argument("channel rows must each sum to 1");

  Eigen::Index live = 0;
  for (Eigen::Index y = 0; y < w0_.size(); ++y)
    if (w0_[y] > 0 || w1_[y] > 0) ++live;
  if (live != w0_.size()) {
    Eigen::ArrayXd a(live), b(live);
    std::vector<std::string> kept;
    Eigen::Index k = 0;
    for (Eigen::Index y = 0; y < w0_.size(); ++y) {
      if (w0_[y] > 0 || w1_[y] > 0) {
        a[k] = w0_[y];
        b[k] = w1_[y];
        if (!labels_.empty()) kept.push_back(labels_[y]);
        ++k;
      }
    }
    w0_ = std::move(a);
    w1_ = std::move(b);
    labels_ = std::move(kept);
  }
}

ChannelClass::ChannelClass(std::string name_, std::vector<BinaryChannel> members_)
    : name(std::move(name_)), members(std::move(members_)) {
  if (members.empty())
    throw std::invalid_argument("channel class must have at least one member");
}

BinaryChannel make_bsc(double p) {
  if (!(p >= 0.0 && p <= 0.5))
    throw std::invalid_argument("BSC crossover must lie in [0, 1/2]");
  Eigen::ArrayXd w0(2), w1(2);
  w0 << 1 - p, p;
  w1 << p, 1 - p;
  return BinaryChannel(w0, w1, {"0", "1"}, format_name("BSC(%g)", p));
}

BinaryChannel make_bec(double eps) {
  if (!(eps >= 0.0 && eps <= 1.0))
    throw std::invalid_argument("BEC erasure probability must lie in [0, 1]");
  Eigen::ArrayXd w0(3), w1(3);
  w0 << 1 - eps, eps, 0;
  w1 << 0, eps, 1 - eps;
  return BinaryChannel(w0, w1, {"0", "?", "1"}, format_name("BEC(%g)", eps));
}

BinaryChannel make_quantized_bawgn(double snr, int bins) {
  if (!(snr > 0) || !std::isfinite(snr))
    throw std::invalid_argument("BAWGN snr must be positive and finite");
  if (bins < 2 || bins % 2 != 0)
    throw std::invalid_argument("BAWGN bins must be even and >= 2");

  const double sigma = 1.0 / std::sqrt(snr);
  const double lmax = 2.0 * snr + 8.0 / sigma;
  auto normal_cdf = [](double t) { return 0.5 * std::erfc(-t / std::sqrt(2.0)); };

  // Cell probabilities under input 0 (signal +1); input 1 mirrors exactly.
  Eigen::ArrayXd w0(bins);
  for (int k = 0; k < bins; ++k) {
    const double llr_lo = -lmax + 2.0 * lmax * k / bins;
    const double llr_hi = -lmax + 2.0 * lmax * (k + 1) / bins;
    const double lo = (k == 0) ? 0.0 : normal_cdf((llr_lo * sigma * sigma / 2 - 1) / sigma);
    const double hi = (k == bins - 1) ? 1.0 : normal_cdf((llr_hi * sigma * sigma / 2 - 1) / sigma);
    w0[k] = hi - lo;
  }
  Eigen::ArrayXd w1 = w0.reverse();
  char buf[64];
  std::snprintf(buf, sizeof buf, "BAWGN(snr=%g,bins=%d)", snr, bins);
  return BinaryChannel(w0, w1, {}, buf);
}

std::optional<double> erasure_parameter(const BinaryChannel& w) {
  double eps = 0;
  for (Eigen::Index y = 0; y < w.num_outputs(); ++y) {
    const double a = w.w0()[y], b = w.w1()[y];
    if (a == 0 || b == 0) continue;  // revealing output
    if (std::abs(a - b) <= 1e-9 * (a + b)) {
      eps += 0.5 * (a + b);
      continue;
    }
    return std::nullopt;
  }
  return eps;
}

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("binary_entropy argument must lie in [0, 1]");
  double h = 0;
  if (p > 0) h -= p * std::log2(p);
  if (p < 1) h -= (1 - p) * std::log2(1 - p);
  return h;
}

double symmetric_capacity(const BinaryChannel& w) {
  double i = 0;
  for (Eigen::Index y = 0; y < w.num_outputs(); ++y) {
    const double a = w.w0()[y], b = w.w1()[y];
    const double m = 0.5 * (a + b);
    if (a > 0) i += 0.5 * a * std::log2(a / m);
    if (b > 0) i += 0.5 * b * std::log2(b / m);
  }
  return i;
}

double bhattacharyya(const BinaryChannel& w) {
  return (w.w0() * w.w1()).sqrt().sum();
}

double gallager_e0(const BinaryChannel& w, double rho) {
  if (!(rho > -1.0) || !std::isfinite(rho))
    throw std::invalid_argument("gallager_e0 requires rho > -1");
  const double s = 1.0 / (1.0 + rho);
  const double total =
      (0.5 * w.w0().pow(s) + 0.5 * w.w1().pow(s)).pow(1.0 + rho).sum();
  return -std::log2(total);
}

BinaryChannel channel_from_json(const nlohmann::json& spec) {
  if (!spec.is_object())
    throw std::invalid_argument("channel spec must be a JSON object");
  if (spec.contains("family")) {
    const std::string family = spec.at("family").get<std::string>();
    if (family == "bsc") return make_bsc(spec.at("p").get<double>());
    if (family == "bec") return make_bec(spec.at("eps").get<double>());
    if (family == "bawgn")
      return make_quantized_bawgn(spec.at("snr").get<double>(),
                                  spec.value("bins", 64));
    throw std::invalid_argument("unknown channel family: " + family);
  }
  if (!spec.contains("w0") || !spec.contains("w1"))
    throw std::invalid_argument("channel literal needs \"w0\" and \"w1\"");
  const auto v0 = spec.at("w0").get<std::vector<double>>();
  const auto v1 = spec.at("w1").get<std::vector<double>>();
  Eigen::ArrayXd w0 = Eigen::Map<const Eigen::ArrayXd>(v0.data(), v0.size());
  Eigen::ArrayXd w1 = Eigen::Map<const Eigen::ArrayXd>(v1.data(), v1.size());
  std::vector<std::string> labels;
  if (spec.contains("labels"))
    labels = spec.at("labels").get<std::vector<std::string>>();
  return BinaryChannel(w0, w1, std::move(labels), spec.value("name", ""));
}

nlohmann::json channel_to_json(const BinaryChannel& w) {
  nlohmann::json j;
  j["w0"] = std::vector<double>(w.w0().data(), w.w0().data() + w.num_outputs());
  j["w1"] = std::vector<double>(w.w1().data(), w.w1().data() + w.num_outputs());
  if (!w.labels().empty()) j["labels"] = w.labels();
  if (!w.name().empty()) j["name"] = w.name();
  return j;
}

}  // namespace polarlab
