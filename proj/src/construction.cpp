#include "polarlab/construction.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "polarlab/transform.hpp"

namespace polarlab {

namespace {

bool is_pow2(size_t v) { return v > 0 && (v & (v - 1)) == 0; }

int log2_exact(size_t v) { return std::countr_zero(v); }

// Position of input index i in the synthesized array (bit reversal).
int rev_bits(int i, int n) {
  int r = 0;
  for (int b = 0; b < n; ++b) r = (r << 1) | ((i >> b) & 1);
  return r;
}

SynthesisResult synthesize_erasure(const std::vector<double>& eps0,
                                   const SynthesisOptions& opt) {
  const size_t n_total = eps0.size();
  const int levels = log2_exact(n_total);
  std::vector<double> eps = eps0;
  SynthesisResult out;
  out.erasure_path = true;
  out.level_capacity_sums.reserve(levels + 1);
  auto total_i = [&] {
    double s = 0;
    for (double e : eps) s += 1.0 - e;
    return s;
  };
  out.level_capacity_sums.push_back(total_i());
  for (int lv = 0; lv < levels; ++lv) {
    const size_t stride = size_t{1} << lv;
    for (size_t b = 0; b < n_total; b += 2 * stride) {
      for (size_t j = b; j < b + stride; ++j) {
        const double e1 = eps[j], e2 = eps[j + stride];
        eps[j] = e1 + e2 - e1 * e2;
        eps[j + stride] = e1 * e2;
      }
    }
    out.level_capacity_sums.push_back(total_i());
  }
  out.reports.resize(n_total);
  if (opt.keep_channels) out.channels.reserve(n_total);
  for (size_t i = 0; i < n_total; ++i) {
    const double e = eps[rev_bits(static_cast<int>(i), levels)];
    out.reports[i] = {static_cast<int>(i), e, 1.0 - e, {}, {}};
    if (opt.keep_channels) out.channels.push_back(make_bec(e));
  }
  return out;
}

}  // namespace

int CodeSpec::message_length() const {
  int frozen = 0;
  for (auto f : frozen_mask) frozen += f ? 1 : 0;
  return block_length() - frozen;
}

void CodeSpec::validate() const {
  if (n < 0 || n > 30) throw std::invalid_argument("CodeSpec: n outside [0, 30]");
  const size_t n_total = size_t{1} << n;
  if (frozen_mask.size() != n_total || frozen_values.size() != n_total)
    throw std::invalid_argument("CodeSpec: mask/value lengths must equal 2^n");
  for (size_t i = 0; i < n_total; ++i) {
    if (frozen_mask[i] > 1 || frozen_values[i] > 1)
      throw std::invalid_argument("CodeSpec: mask/value entries must be bits");
    if (frozen_values[i] && !frozen_mask[i])
      throw std::invalid_argument(
          "CodeSpec: frozen value set on an information index");
  }
}

SynthesisResult synthesize(const std::vector<BinaryChannel>& base,
                           const SynthesisOptions& opt) {
  if (!is_pow2(base.size()))
    throw std::invalid_argument("synthesize: base size must be a power of two");
  if (opt.merge_cap < 2)
    throw std::invalid_argument("synthesize: merge_cap must be >= 2");
  const int levels = log2_exact(base.size());
  const size_t n_total = base.size();

  {
    std::vector<double> eps(n_total);
    bool all_erasure = true;
    for (size_t j = 0; j < n_total && all_erasure; ++j) {
      if (auto e = erasure_parameter(base[j]))
        eps[j] = *e;
      else
        all_erasure = false;
    }
    if (all_erasure) return synthesize_erasure(eps, opt);
  }

  // Stationary bases polarize through a deduplicated doubling tree; the
  // distinct channels after lv levels number only 2^lv.
  bool stationary = true;
  for (size_t j = 1; j < n_total && stationary; ++j)
    stationary = base[j].num_outputs() == base[0].num_outputs() &&
                 (base[j].w0() == base[0].w0()).all() &&
                 (base[j].w1() == base[0].w1()).all();

  SynthesisResult out;
  out.level_capacity_sums.reserve(levels + 1);

  if (stationary) {
    std::vector<BinaryChannel> cur{base[0]};
    out.level_capacity_sums.push_back(symmetric_capacity(base[0]) *
                                      static_cast<double>(n_total));
    for (int lv = 0; lv < levels; ++lv) {
      std::vector<BinaryChannel> next;
      next.reserve(cur.size() * 2);
      double level_i = 0;
      for (const auto& c : cur) {
        TransformPair t = transform(c);
        MergedChannel m = merge_outputs(t.minus, opt.merge_cap, opt.lr_tol);
        MergedChannel p = merge_outputs(t.plus, opt.merge_cap, opt.lr_tol);
        const double copies = static_cast<double>(n_total >> (lv + 1));
        out.merge_loss += copies * (m.capacity_loss + p.capacity_loss);
        level_i += copies * (symmetric_capacity(m.channel) +
                             symmetric_capacity(p.channel));
        next.push_back(std::move(m.channel));
        next.push_back(std::move(p.channel));
      }
      cur = std::move(next);
      out.level_capacity_sums.push_back(level_i);
    }
    // Doubling order is already input order.
    out.reports.resize(n_total);
    for (size_t i = 0; i < n_total; ++i)
      out.reports[i] = {static_cast<int>(i), bhattacharyya(cur[i]),
                        symmetric_capacity(cur[i]), {}, {}};
    if (opt.keep_channels) out.channels = std::move(cur);
    return out;
  }

  std::vector<BinaryChannel> arr = base;
  auto total_i = [&] {
    double s = 0;
    for (const auto& c : arr) s += symmetric_capacity(c);
    return s;
  };
  out.level_capacity_sums.push_back(total_i());
  for (int lv = 0; lv < levels; ++lv) {
    const size_t stride = size_t{1} << lv;
    for (size_t b = 0; b < n_total; b += 2 * stride) {
      for (size_t j = b; j < b + stride; ++j) {
        TransformPair t = transform(arr[j], arr[j + stride]);
        MergedChannel m = merge_outputs(t.minus, opt.merge_cap, opt.lr_tol);
        MergedChannel p = merge_outputs(t.plus, opt.merge_cap, opt.lr_tol);
        out.merge_loss += m.capacity_loss + p.capacity_loss;
        arr[j] = std::move(m.channel);
        arr[j + stride] = std::move(p.channel);
      }
    }
    out.level_capacity_sums.push_back(total_i());
  }
  out.reports.resize(n_total);
  for (size_t i = 0; i < n_total; ++i) {
    const auto& c = arr[rev_bits(static_cast<int>(i), levels)];
    out.reports[i] = {static_cast<int>(i), bhattacharyya(c),
                      symmetric_capacity(c), {}, {}};
  }
  if (opt.keep_channels) {
    out.channels.reserve(n_total);
    for (size_t i = 0; i < n_total; ++i)
      out.channels.push_back(arr[rev_bits(static_cast<int>(i), levels)]);
  }
  return out;
}

CodeSpec select_information_set(const std::vector<BitChannelReport>& reports,
                                int k, std::string provenance) {
  const size_t n_total = reports.size();
  if (!is_pow2(n_total))
    throw std::invalid_argument(
        "select_information_set: report count must be a power of two");
  if (k < 0 || static_cast<size_t>(k) > n_total)
    throw std::invalid_argument("select_information_set: k outside [0, 2^n]");
  bool all_mc = true;
  for (const auto& r : reports) all_mc = all_mc && r.mc_error.has_value();
  std::vector<int> idx(n_total);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    const double sa = all_mc ? *reports[a].mc_error : reports[a].z;
    const double sb = all_mc ? *reports[b].mc_error : reports[b].z;
    if (sa != sb) return sa < sb;
    return a < b;
  });
  CodeSpec spec;
  spec.n = log2_exact(n_total);
  spec.frozen_mask.assign(n_total, 1);
  spec.frozen_values.assign(n_total, 0);
  for (int j = 0; j < k; ++j) spec.frozen_mask[idx[j]] = 0;
  spec.provenance = std::move(provenance);
  spec.validate();
  return spec;
}

CodeSpec compound_construct(const ChannelClass& cls, int n, int k,
                            const SynthesisOptions& opt) {
  if (n < 0 || n > 30)
    throw std::invalid_argument("compound_construct: n outside [0, 30]");
  const size_t n_total = size_t{1} << n;
  std::vector<BitChannelReport> worst(n_total);
  for (size_t i = 0; i < n_total; ++i) worst[i] = {static_cast<int>(i), 0, 1, {}, {}};
  for (const auto& member : cls.members) {
    SynthesisOptions o = opt;
    o.keep_channels = false;
    const auto res = synthesize(std::vector<BinaryChannel>(n_total, member), o);
    for (size_t i = 0; i < n_total; ++i) {
      worst[i].z = std::max(worst[i].z, res.reports[i].z);
      worst[i].i = std::min(worst[i].i, res.reports[i].i);
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "compound(%s,n=%d,k=%d,cap=%d)",
                cls.name.c_str(), n, k, opt.merge_cap);
  return select_information_set(worst, k, buf);
}

std::string reports_csv(const std::vector<BitChannelReport>& reports) {
  std::string out = "index,z,i,mc_error,mc_se\n";
  char buf[256];
  for (const auto& r : reports) {
    int len = std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,", r.index, r.z, r.i);
    out.append(buf, len);
    if (r.mc_error) {
      len = std::snprintf(buf, sizeof buf, "%.17g", *r.mc_error);
      out.append(buf, len);
    }
    out += ',';
    if (r.mc_se) {
      len = std::snprintf(buf, sizeof buf, "%.17g", *r.mc_se);
      out.append(buf, len);
    }
    out += '\n';
  }
  return out;
}

nlohmann::json code_spec_to_json(const CodeSpec& spec) {
  spec.validate();
  nlohmann::json j;
  j["n"] = spec.n;
  j["frozen_mask"] = spec.frozen_mask;
  j["frozen_values"] = spec.frozen_values;
  j["provenance"] = spec.provenance;
  return j;
}

CodeSpec code_spec_from_json(const nlohmann::json& j) {
  CodeSpec spec;
  spec.n = j.at("n").get<int>();
  spec.frozen_mask = j.at("frozen_mask").get<std::vector<std::uint8_t>>();
  spec.frozen_values = j.at("frozen_values").get<std::vector<std::uint8_t>>();
  spec.provenance = j.value("provenance", "");
  spec.validate();
  return spec;
}

}  // namespace polarlab
