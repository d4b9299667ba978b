#include "polarlab/experiments.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "polarlab/extremal.hpp"
#include "polarlab/ordering.hpp"
#include "polarlab/rng.hpp"
#include "polarlab/transform.hpp"

namespace polarlab {

namespace {

using nlohmann::json;

constexpr std::uint64_t kDefaultSeed = 0x706f6c61726c6162ull;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ChannelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct LengthError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check_keys(const json& cfg, std::initializer_list<const char*> allowed) {
  for (const auto& item : cfg.items()) {
    bool known = false;
    for (const char* k : allowed) known = known || item.key() == k;
    if (!known) throw ConfigError("unknown config key: " + item.key());
  }
}

BinaryChannel parse_channel(const json& cfg, const char* field) {
  if (!cfg.contains(field))
    throw ConfigError(std::string("missing config key: ") + field);
  try {
    return channel_from_json(cfg.at(field));
  } catch (const json::exception& e) {
    throw ChannelError(std::string(field) + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ChannelError(std::string(field) + ": " + e.what());
  }
}

// Accepts either "n" (levels) or "N" (block length, must be a power of two).
int parse_levels(const json& cfg, int max_levels = 24) {
  if (cfg.contains("n")) {
    const int n = cfg.at("n").get<int>();
    if (n < 1 || n > max_levels)
      throw ConfigError("n outside [1, " + std::to_string(max_levels) + "]");
    return n;
  }
  if (cfg.contains("N")) {
    const long long total = cfg.at("N").get<long long>();
    if (total < 2 || (total & (total - 1)) != 0)
      throw LengthError("N must be a power of two >= 2, got " +
                        std::to_string(total));
    const int n = std::countr_zero(static_cast<unsigned long long>(total));
    if (n > max_levels)
      throw ConfigError("N exceeds 2^" + std::to_string(max_levels));
    return n;
  }
  throw ConfigError("config needs \"n\" or \"N\"");
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct CsvOutput {
  std::string name;  // file name
  std::string body;  // header line + rows
};

long csv_row_count(const std::string& body) {
  long lines = 0;
  for (char c : body) lines += c == '\n';
  return lines > 0 ? lines - 1 : 0;
}

std::vector<std::string> csv_columns(const std::string& body) {
  std::vector<std::string> cols;
  std::string cur;
  for (char c : body) {
    if (c == '\n') break;
    if (c == ',') {
      cols.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  cols.push_back(cur);
  return cols;
}

// Fractions of (z < thr, z > 1 - thr, middle) per level for a stationary
// base, over the deduplicated synthesized channels of that level.
std::vector<std::array<double, 3>> polarization_fractions(
    const BinaryChannel& w, int levels, double thr, int merge_cap) {
  std::vector<std::array<double, 3>> out;
  out.reserve(levels);
  if (auto e0 = erasure_parameter(w)) {
    std::vector<double> z{*e0};
    for (int lv = 0; lv < levels; ++lv) {
      std::vector<double> nz;
      nz.reserve(z.size() * 2);
      for (double v : z) {
        nz.push_back(2 * v - v * v);
        nz.push_back(v * v);
      }
      z = std::move(nz);
      long good = 0, bad = 0;
      for (double v : z) {
        good += v < thr;
        bad += v > 1 - thr;
      }
      const double total = static_cast<double>(z.size());
      out.push_back({good / total, bad / total, (total - good - bad) / total});
    }
    return out;
  }
  if (levels > 16)
    throw ConfigError(
        "polarization without erasure structure is limited to n <= 16");
  std::vector<BinaryChannel> cur{w};
  for (int lv = 0; lv < levels; ++lv) {
    std::vector<BinaryChannel> next;
    next.reserve(cur.size() * 2);
    long good = 0, bad = 0;
    for (const auto& c : cur) {
      TransformPair t = transform(c);
      for (BinaryChannel child :
           {merge_outputs(t.minus, merge_cap).channel,
            merge_outputs(t.plus, merge_cap).channel}) {
        const double z = bhattacharyya(child);
        good += z < thr;
        bad += z > 1 - thr;
        next.push_back(std::move(child));
      }
    }
    cur = std::move(next);
    const double total = static_cast<double>(cur.size());
    out.push_back({good / total, bad / total, (total - good - bad) / total});
  }
  return out;
}

CsvOutput handle_polarization(const json& cfg, std::uint64_t, int) {
  check_keys(cfg, {"kind", "channel", "n", "N", "threshold", "merge_cap", "seed"});
  const BinaryChannel w = parse_channel(cfg, "channel");
  const int levels = parse_levels(cfg);
  const double thr = cfg.value("threshold", 1e-3);
  const int merge_cap = cfg.value("merge_cap", 64);
  if (!(thr > 0 && thr < 0.5)) throw ConfigError("threshold outside (0, 0.5)");

  const auto fracs = polarization_fractions(w, levels, thr, merge_cap);
  std::string body = "n,frac_good,frac_bad,frac_mid\n";
  for (int lv = 0; lv < levels; ++lv)
    body += std::to_string(lv + 1) + "," + fmt(fracs[lv][0]) + "," +
            fmt(fracs[lv][1]) + "," + fmt(fracs[lv][2]) + "\n";
  return {"polarization.csv", std::move(body)};
}

CsvOutput handle_bler_sweep(const json& cfg, std::uint64_t seed, int threads) {
  check_keys(cfg, {"kind", "channel", "n", "N", "k_list", "trials",
                   "construction", "metric", "glrt_class", "genie_trials",
                   "merge_cap", "seed"});
  const BinaryChannel w = parse_channel(cfg, "channel");
  const int levels = parse_levels(cfg, 16);
  const int n_total = 1 << levels;
  const auto k_list = cfg.at("k_list").get<std::vector<int>>();
  const long trials = cfg.at("trials").get<long>();
  const std::string construction = cfg.value("construction", "z");
  const int merge_cap = cfg.value("merge_cap", 64);
  if (trials <= 0) throw ConfigError("trials must be positive");
  for (int k : k_list)
    if (k < 0 || k > n_total)
      throw ConfigError("k_list entries must lie in [0, N]");

  DecodeMetric metric = DecodeMetric::matched();
  std::optional<ChannelClass> cls;
  if (cfg.contains("glrt_class")) {
    std::vector<BinaryChannel> members;
    for (const auto& spec : cfg.at("glrt_class")) {
      try {
        members.push_back(channel_from_json(spec));
      } catch (const std::exception& e) {
        throw ChannelError(std::string("glrt_class: ") + e.what());
      }
    }
    cls.emplace("glrt_class", std::move(members));
    metric = DecodeMetric::glrt(*cls);
  } else if (cfg.contains("metric")) {
    metric = DecodeMetric::mismatched(parse_channel(cfg, "metric"));
  }

  SynthesisOptions sopt;
  sopt.merge_cap = merge_cap;
  std::vector<BitChannelReport> reports;
  if (construction == "z") {
    reports = synthesize(std::vector<BinaryChannel>(n_total, w), sopt).reports;
  } else if (construction == "genie") {
    CodeSpec probe;
    probe.n = levels;
    probe.frozen_mask.assign(n_total, 1);
    probe.frozen_values.assign(n_total, 0);
    const long gt = cfg.value("genie_trials", trials);
    const DecodeMetric& genie_metric =
        metric.kind == DecodeMetric::Kind::glrt ? DecodeMetric::matched()
                                                : metric;
    const auto counts = detail::genie_error_counts(
        {w}, probe, genie_metric, gt, derive_seed(seed, "construct", 0), threads);
    reports.resize(n_total);
    for (int i = 0; i < n_total; ++i) {
      const double p = static_cast<double>(counts[i]) / gt;
      reports[i] = {i, 0, 0, p, std::sqrt(p * (1 - p) / gt)};
    }
  } else if (construction != "compound") {
    throw ConfigError("construction must be z, genie or compound");
  }
  if (construction == "compound" && !cls)
    throw ConfigError("compound construction needs glrt_class");

  std::string body = "k,trials,errors,bler,se\n";
  for (int k : k_list) {
    CodeSpec spec;
    if (construction == "compound") {
      spec = compound_construct(*cls, levels, k, sopt);
    } else {
      spec = select_information_set(reports, k, construction);
    }
    const BlerResult r =
        mc_block_error({w}, spec, metric, trials,
                       derive_seed(seed, "bler-k", static_cast<std::uint64_t>(k)),
                       threads);
    body += std::to_string(k) + "," + std::to_string(r.trials) + "," +
            std::to_string(r.errors) + "," + fmt(r.bler) + "," + fmt(r.se) +
            "\n";
  }
  return {"bler_sweep.csv", std::move(body)};
}

CsvOutput handle_scaling(const json& cfg, std::uint64_t, int) {
  check_keys(cfg, {"kind", "eps", "rate", "n_list", "seed"});
  const double eps = cfg.at("eps").get<double>();
  const double rate = cfg.at("rate").get<double>();
  const auto n_list = cfg.at("n_list").get<std::vector<int>>();
  std::vector<ScalingRow> rows;
  try {
    rows = scaling_probe(eps, rate, n_list);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  std::string body = "n,union_bound,loglog\n";
  for (const auto& r : rows)
    body += std::to_string(r.n) + "," + fmt(r.union_bound) + "," +
            fmt(r.loglog) + "\n";
  return {"scaling_probe.csv", std::move(body)};
}

CsvOutput handle_mismatched_rate(const json& cfg, std::uint64_t seed,
                                 int threads) {
  check_keys(cfg, {"kind", "channel", "metric", "n_list", "target_bler",
                   "trials", "seed"});
  const BinaryChannel w = parse_channel(cfg, "channel");
  const BinaryChannel v = parse_channel(cfg, "metric");
  const auto n_list = cfg.at("n_list").get<std::vector<int>>();
  const double target = cfg.at("target_bler").get<double>();
  const long trials = cfg.at("trials").get<long>();
  if (!(target > 0 && target < 1)) throw ConfigError("target_bler outside (0,1)");
  if (trials <= 0) throw ConfigError("trials must be positive");

  std::string body = "n,block_length,k_star,rate,k_lo,k_hi,trials\n";
  for (int n : n_list) {
    if (n < 1 || n > 16) throw ConfigError("n_list entries must lie in [1, 16]");
    const auto pt = mismatched_rate_estimate(
        w, v, n, target, trials,
        derive_seed(seed, "rate-n", static_cast<std::uint64_t>(n)), threads);
    body += std::to_string(pt.n) + "," + std::to_string(1 << pt.n) + "," +
            std::to_string(pt.k_star) + "," + fmt(pt.rate) + "," +
            std::to_string(pt.k_lo) + "," + std::to_string(pt.k_hi) + "," +
            std::to_string(pt.trials) + "\n";
  }
  return {"mismatched_rate.csv", std::move(body)};
}

CsvOutput handle_e0_scan(const json& cfg, std::uint64_t, int) {
  check_keys(cfg, {"kind", "channel", "rho0", "rho_grid", "seed"});
  const BinaryChannel w = parse_channel(cfg, "channel");
  const double rho0 = cfg.at("rho0").get<double>();
  const auto grid = cfg.at("rho_grid").get<std::vector<double>>();
  if (!(rho0 > -1) || rho0 == 0) throw ConfigError("rho0 must be > -1, nonzero");
  for (double r : grid)
    if (!(r > -1)) throw ConfigError("rho_grid entries must be > -1");
  return {"e0_scan.csv", e0_scan_csv(e0_extremality_scan(w, rho0, grid))};
}

CsvOutput handle_order_probe(const json& cfg, std::uint64_t seed, int) {
  check_keys(cfg, {"kind", "w1", "w2", "n", "N", "k", "trials", "seed"});
  const BinaryChannel w1 = parse_channel(cfg, "w1");
  const BinaryChannel w2 = parse_channel(cfg, "w2");
  const int levels = parse_levels(cfg, 14);
  const int k = cfg.at("k").get<int>();
  const long trials = cfg.at("trials").get<long>();
  const auto row = polar_order_probe(w1, w2, levels, k, trials,
                                     derive_seed(seed, "probe", 0));
  return {"order_probe.csv", order_probe_csv({row})};
}

}  // namespace

BlerResult mc_block_error(const std::vector<BinaryChannel>& true_channels,
                          const CodeSpec& spec, const DecodeMetric& metric,
                          long trials, std::uint64_t seed, int threads) {
  spec.validate();
  if (trials <= 0)
    throw std::invalid_argument("mc_block_error: trials must be positive");
  const int n_total = spec.block_length();

  auto run_range = [&](long first, long last) -> long {
    long wrong = 0;
    std::vector<std::uint8_t> u(n_total);
    std::vector<double> llrs;
    std::optional<ScDecoder> dec;
    std::optional<LlrTables> tables;
    if (metric.kind != DecodeMetric::Kind::glrt) {
      dec.emplace(spec.n);
      tables.emplace(metric, true_channels, n_total);
    }
    for (long t = first; t < last; ++t) {
      Rng msg_rng(derive_seed(seed, "msg", static_cast<std::uint64_t>(t)));
      for (int i = 0; i < n_total; ++i)
        u[i] = spec.frozen_mask[i] ? spec.frozen_values[i]
                                   : static_cast<std::uint8_t>(msg_rng.coin());
      const std::vector<std::uint8_t> x = polar_encode(u);
      Rng noise_rng(derive_seed(seed, "noise", static_cast<std::uint64_t>(t)));
      const std::vector<int> y = transmit(x, true_channels, noise_rng);
      if (metric.kind == DecodeMetric::Kind::glrt) {
        wrong += glrt_decode(y, spec, *metric.members).u_hat != u;
      } else {
        tables->fill(y, llrs);
        wrong += dec->decode(llrs, spec).u_hat != u;
      }
    }
    return wrong;
  };

  threads = std::max(1, threads);
  long errors = 0;
  if (threads == 1 || trials < 2 * threads) {
    errors = run_range(0, trials);
  } else {
    const long chunk = (trials + threads - 1) / threads;
    std::vector<long> partial(threads, 0);
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) {
      const long first = w * chunk;
      const long last = std::min(trials, first + chunk);
      if (first >= last) break;
      pool.emplace_back([&, w, first, last] { partial[w] = run_range(first, last); });
    }
    for (auto& th : pool) th.join();
    for (long p : partial) errors += p;
  }

  BlerResult r;
  r.trials = trials;
  r.errors = errors;
  r.bler = static_cast<double>(errors) / trials;
  r.se = std::sqrt(r.bler * (1 - r.bler) / trials);
  return r;
}

std::vector<ScalingRow> scaling_probe(double eps, double rate,
                                      const std::vector<int>& n_list) {
  if (!(eps > 0 && eps < 1))
    throw std::invalid_argument("scaling_probe: eps outside (0, 1)");
  if (!(rate >= 0))
    throw std::invalid_argument("scaling_probe: rate must be nonnegative");
  if (rate >= 1 - eps)
    throw std::invalid_argument("scaling_probe: rate at or above capacity");
  std::vector<ScalingRow> rows;
  rows.reserve(n_list.size());
  for (int n : n_list) {
    if (n < 1 || n > 22)
      throw std::invalid_argument("scaling_probe: n outside [1, 22]");
    std::vector<double> z{eps};
    for (int lv = 0; lv < n; ++lv) {
      std::vector<double> nz;
      nz.reserve(z.size() * 2);
      for (double v : z) {
        nz.push_back(2 * v - v * v);
        nz.push_back(v * v);
      }
      z = std::move(nz);
    }
    const long k = static_cast<long>(
        std::ceil(rate * static_cast<double>(z.size())));
    double bound = 0;
    if (k > 0) {
      std::nth_element(z.begin(), z.begin() + (k - 1), z.end());
      for (long i = 0; i < k; ++i) bound += z[i];
    }
    ScalingRow row;
    row.n = n;
    row.union_bound = bound;
    row.loglog = std::log2(-std::log2(bound));
    rows.push_back(row);
  }
  return rows;
}

MismatchedRatePoint mismatched_rate_estimate(const BinaryChannel& w,
                                             const BinaryChannel& v, int n,
                                             double target_bler, long trials,
                                             std::uint64_t seed, int threads) {
  if (n < 1 || n > 20)
    throw std::invalid_argument("mismatched_rate_estimate: n outside [1, 20]");
  if (!(target_bler > 0 && target_bler < 1))
    throw std::invalid_argument("mismatched_rate_estimate: target outside (0,1)");
  const int n_total = 1 << n;
  CodeSpec probe;
  probe.n = n;
  probe.frozen_mask.assign(n_total, 1);
  probe.frozen_values.assign(n_total, 0);
  const auto counts = detail::genie_error_counts(
      {w}, probe, DecodeMetric::mismatched(v), trials, seed, threads);

  std::vector<int> idx(n_total);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (counts[a] != counts[b]) return counts[a] < counts[b];
    return a < b;
  });

  MismatchedRatePoint pt;
  pt.n = n;
  pt.trials = trials;
  double sum_p = 0, sum_var = 0;
  for (int k = 0; k < n_total; ++k) {
    const double p = static_cast<double>(counts[idx[k]]) / trials;
    sum_p += p;
    sum_var += p * (1 - p) / trials;
    const double se = std::sqrt(sum_var);
    if (sum_p <= target_bler) pt.k_star = k + 1;
    if (sum_p + 2 * se <= target_bler) pt.k_lo = k + 1;
    if (sum_p - 2 * se <= target_bler) pt.k_hi = k + 1;
  }
  pt.rate = static_cast<double>(pt.k_star) / n_total;
  return pt;
}

int run_experiment(const std::filesystem::path& config_path,
                   const RunOptions& opt, std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  json cfg;
  try {
    std::ifstream in(config_path);
    if (!in) {
      log << "config error: cannot open " << config_path.string() << "\n";
      return kBadConfig;
    }
    cfg = json::parse(in);
    if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
  } catch (const json::exception& e) {
    log << "config error: " << e.what() << "\n";
    return kBadConfig;
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kBadConfig;
  }

  const std::string kind = cfg.value("kind", "");
  std::uint64_t seed = kDefaultSeed;
  if (cfg.contains("seed")) seed = cfg.at("seed").get<std::uint64_t>();
  if (opt.seed) seed = *opt.seed;
  const int threads = std::max(1, opt.threads);

  CsvOutput out;
  try {
    if (kind == "polarization")
      out = handle_polarization(cfg, seed, threads);
    else if (kind == "bler_sweep")
      out = handle_bler_sweep(cfg, seed, threads);
    else if (kind == "scaling_probe")
      out = handle_scaling(cfg, seed, threads);
    else if (kind == "mismatched_rate")
      out = handle_mismatched_rate(cfg, seed, threads);
    else if (kind == "e0_scan")
      out = handle_e0_scan(cfg, seed, threads);
    else if (kind == "order_probe")
      out = handle_order_probe(cfg, seed, threads);
    else {
      log << "config error: unknown kind \"" << kind << "\"\n";
      return kBadConfig;
    }
  } catch (const ChannelError& e) {
    log << "channel error: " << e.what() << "\n";
    return kBadChannel;
  } catch (const LengthError& e) {
    log << "length error: " << e.what() << "\n";
    return kBadLength;
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kBadConfig;
  } catch (const json::exception& e) {
    log << "config error: " << e.what() << "\n";
    return kBadConfig;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kFailure;
  }

  try {
    std::filesystem::create_directories(opt.out_dir);
    std::ofstream csv(opt.out_dir / out.name, std::ios::binary);
    csv << out.body;
    if (!csv) throw std::runtime_error("failed to write " + out.name);
    csv.close();

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    json manifest;
    manifest["tool"] = "polarlab";
    manifest["version"] = kVersion;
    manifest["kind"] = kind;
    manifest["config"] = cfg;
    manifest["seed"] = seed;
    manifest["threads"] = threads;
    manifest["wall_time_seconds"] = wall;
    manifest["outputs"] = json::array({json{{"path", out.name},
                                            {"rows", csv_row_count(out.body)},
                                            {"columns", csv_columns(out.body)}}});
    std::ofstream mf(opt.out_dir / "manifest.json", std::ios::binary);
    mf << manifest.dump(2) << "\n";
    if (!mf) throw std::runtime_error("failed to write manifest.json");
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kFailure;
  }

  log << "wrote " << (opt.out_dir / out.name).string() << " ("
      << csv_row_count(out.body) << " rows)\n";
  return kOk;
}

namespace {

BinaryChannel random_verify_channel(Rng& rng) {
  const int m = 2 + static_cast<int>(rng.next() % 7);
  Eigen::ArrayXd a(m), b(m);
  for (int y = 0; y < m; ++y) {
    a[y] = -std::log(1.0 - rng.uniform01());
    b[y] = -std::log(1.0 - rng.uniform01());
  }
  a /= a.sum();
  b /= b.sum();
  return BinaryChannel(a, b);
}

}  // namespace

int run_verify(std::ostream& out) {
  int failures = 0;
  auto check = [&](const char* name, bool ok) {
    out << (ok ? "ok   " : "FAIL ") << name << "\n";
    failures += ok ? 0 : 1;
  };

  Rng rng(0x76657269667921ull);
  {
    bool conserved = true, multiplicative = true, e0_identity = true;
    for (int t = 0; t < 20; ++t) {
      const BinaryChannel w = random_verify_channel(rng);
      const BinaryChannel wp = random_verify_channel(rng);
      const auto c = conservation_check(w, wp);
      conserved = conserved && std::abs(c.parent_sum - c.children_sum) <= 1e-10;
      const auto tp = transform(w, wp);
      multiplicative =
          multiplicative && std::abs(bhattacharyya(tp.plus) -
                                     bhattacharyya(w) * bhattacharyya(wp)) <= 1e-12;
      e0_identity = e0_identity &&
                    std::abs(gallager_e0(w, 1.0) -
                             (1.0 - std::log2(1.0 + bhattacharyya(w)))) <= 1e-12;
    }
    check("capacity conservation across one transform", conserved);
    check("Z multiplies exactly on the plus branch", multiplicative);
    check("E0(1) matches 1 - log2(1 + Z)", e0_identity);
  }
  {
    const auto t = transform(make_bec(0.37));
    check("BEC transform follows the erasure recursion",
          std::abs(bhattacharyya(t.minus) - (2 * 0.37 - 0.37 * 0.37)) <= 1e-12 &&
              std::abs(bhattacharyya(t.plus) - 0.37 * 0.37) <= 1e-12);
  }
  {
    bool ok = true;
    for (int t = 0; t < 10; ++t) {
      std::vector<std::uint8_t> u(64);
      for (auto& bit : u) bit = static_cast<std::uint8_t>(rng.coin());
      ok = ok && polar_encode(polar_encode(u)) == u;
    }
    check("encoder is an involution", ok);
  }
  {
    CodeSpec spec;
    spec.n = 6;
    spec.frozen_mask.assign(64, 0);
    spec.frozen_values.assign(64, 0);
    ScDecoder dec(6);
    bool ok = true;
    long visits = 0;
    for (int t = 0; t < 10; ++t) {
      std::vector<std::uint8_t> u(64);
      for (auto& bit : u) bit = static_cast<std::uint8_t>(rng.coin());
      const auto x = polar_encode(u);
      std::vector<double> llrs(64);
      for (int i = 0; i < 64; ++i) llrs[i] = x[i] ? -kLlrCap : kLlrCap;
      const auto res = dec.decode(llrs, spec);
      ok = ok && res.u_hat == u;
      visits = res.node_visits;
    }
    check("noiseless decode inverts the encoder", ok);
    check("decoder visit count equals N log2 N", visits == 64 * 6);
  }
  {
    bool ok = true;
    for (double t : {0.1, 0.45, 0.8}) {
      ok = ok && std::abs(symmetric_capacity(bsc_with_capacity(t)) - t) <= 1e-10;
      ok = ok && std::abs(symmetric_capacity(bec_with_capacity(t)) - t) <= 1e-10;
      ok = ok && std::abs(gallager_e0(bec_with_e0(t * 0.5, 0.5), 0.5) - t * 0.5) <= 1e-10;
      ok = ok && std::abs(gallager_e0(bsc_with_e0(t * 0.5, 0.5), 0.5) - t * 0.5) <= 1e-10;
    }
    check("measure inverses round-trip", ok);
  }
  {
    const auto d_bsc = bsc_decomposition(make_bsc(0.11));
    const auto d_bec = bsc_decomposition(make_bec(0.3));
    check("crossover decompositions of BSC and BEC",
          d_bsc.atoms.size() == 1 && std::abs(d_bsc.atoms[0].p - 0.11) <= 1e-12 &&
              d_bec.atoms.size() == 2 &&
              std::abs(d_bec.atoms[0].p - 0.0) <= 1e-12 &&
              std::abs(d_bec.atoms[1].mass - 0.3) <= 1e-12);
    check("convex order is reflexive and detects spread",
          check_symmetric_convex_order(make_bsc(0.2), make_bsc(0.2)) ==
                  ConvexOrderVerdict::dominates &&
              check_symmetric_convex_order(make_bec(0.5), make_bsc(0.25)) ==
                  ConvexOrderVerdict::dominates);
    check("degradation feasibility on a BSC cascade",
          check_degradation(make_bsc(0.05), make_bsc(0.11)) ==
                  DegradationVerdict::degraded &&
              check_degradation(make_bsc(0.11), make_bsc(0.05)) ==
                  DegradationVerdict::not_degraded);
  }
  {
    CodeSpec probe;
    probe.n = 5;
    probe.frozen_mask.assign(32, 1);
    probe.frozen_values.assign(32, 0);
    const auto c1 = detail::genie_error_counts({make_bec(0.4)}, probe,
                                               DecodeMetric::matched(), 200,
                                               123, 1);
    const auto c2 = detail::genie_error_counts({make_bec(0.4)}, probe,
                                               DecodeMetric::matched(), 200,
                                               123, 3);
    check("genie counts are independent of the thread count", c1 == c2);

    const auto reports =
        synthesize(std::vector<BinaryChannel>(32, make_bec(0.4))).reports;
    const auto spec = select_information_set(reports, 12, "verify");
    const auto b1 = mc_block_error({make_bec(0.4)}, spec,
                                   DecodeMetric::matched(), 300, 77, 1);
    const auto b2 = mc_block_error({make_bec(0.4)}, spec,
                                   DecodeMetric::matched(), 300, 77, 4);
    check("block-error counts are independent of the thread count",
          b1.errors == b2.errors);
  }
  out << (failures == 0 ? "all checks passed\n"
                        : std::to_string(failures) + " check(s) failed\n");
  return failures == 0 ? kOk : kFailure;
}

}  // namespace polarlab
