#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "polarlab/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"polarlab: polarization experiments over binary-input channels"};
  app.require_subcommand(1);

  std::string config_path;
  polarlab::RunOptions opt;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  auto* run = app.add_subcommand("run", "execute a JSON experiment config");
  run->add_option("config", config_path, "path to the experiment config")
      ->required();
  run->add_option("--out", out_dir, "output directory (default .)");
  auto* seed_opt =
      run->add_option("--seed", seed, "override the config's master seed");
  run->add_option("--threads", opt.threads, "worker threads (default 1)")
      ->envname("POLARLAB_THREADS")
      ->check(CLI::Range(1, 256));

  auto* channels = app.add_subcommand("channels", "channel family helpers");
  auto* list = channels->add_subcommand("list", "print the known families");

  auto* verify = app.add_subcommand("verify", "run the built-in invariant suite");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    opt.out_dir = out_dir;
    if (seed_opt->count() > 0) opt.seed = seed;
    return polarlab::run_experiment(config_path, opt, std::cerr);
  }
  if (channels->parsed()) {
    if (!list->parsed()) {
      std::cerr << "usage: polarlab channels list\n";
      return polarlab::kBadConfig;
    }
    std::cout << "bsc     {\"family\":\"bsc\",\"p\":0.11}            "
                 "crossover p in [0, 0.5]\n"
              << "bec     {\"family\":\"bec\",\"eps\":0.5}           "
                 "erasure probability in [0, 1]\n"
              << "bawgn   {\"family\":\"bawgn\",\"snr\":1.0,\"bins\":64}  "
                 "linear snr > 0, even bins >= 2\n"
              << "literal {\"w0\":[...],\"w1\":[...],\"labels\":[...]}  "
                 "rows over a shared alphabet; labels optional\n";
    return polarlab::kOk;
  }
  if (verify->parsed()) return polarlab::run_verify(std::cout);
  return polarlab::kBadConfig;
}
