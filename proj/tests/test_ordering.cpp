#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "polarlab/channel.hpp"
#include "polarlab/ordering.hpp"
#include "polarlab/rng.hpp"

using namespace polarlab;

namespace {

Eigen::ArrayXd arr(std::initializer_list<double> v) {
  Eigen::ArrayXd a(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) a[i++] = x;
  return a;
}

// Symmetric channel realizing a given crossover mixture: one mirrored output
// pair per atom.
BinaryChannel channel_from_atoms(
    const std::vector<CrossoverDistribution::Atom>& atoms) {
  Eigen::ArrayXd w0(2 * static_cast<Eigen::Index>(atoms.size()));
  Eigen::ArrayXd w1(w0.size());
  Eigen::Index y = 0;
  for (const auto& a : atoms) {
    w0[y] = a.mass * (1 - a.p);
    w1[y] = a.mass * a.p;
    w0[y + 1] = a.mass * a.p;
    w1[y + 1] = a.mass * (1 - a.p);
    y += 2;
  }
  return BinaryChannel(w0, w1);
}

double mixture_capacity(const CrossoverDistribution& d) {
  double s = 0;
  for (const auto& a : d.atoms) s += a.mass * (1 - binary_entropy(a.p));
  return s;
}

double mixture_bhattacharyya(const CrossoverDistribution& d) {
  double s = 0;
  for (const auto& a : d.atoms) s += a.mass * 2 * std::sqrt(a.p * (1 - a.p));
  return s;
}

double mixture_e0(const CrossoverDistribution& d, double rho) {
  double s = 0;
  for (const auto& a : d.atoms) {
    const double sub =
        rho - (1 + rho) * std::log2(std::pow(1 - a.p, 1 / (1 + rho)) +
                                    std::pow(a.p, 1 / (1 + rho)));
    s += a.mass * std::exp2(-sub);
  }
  return -std::log2(s);
}

}  // namespace

TEST_CASE("crossover decompositions of the canonical families") {
  SUBCASE("a crossover channel is a single atom") {
    const auto d = bsc_decomposition(make_bsc(0.11));
    REQUIRE(d.atoms.size() == 1);
    CHECK(d.atoms[0].p == doctest::Approx(0.11).epsilon(1e-12));
    CHECK(d.atoms[0].mass == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.mean() == doctest::Approx(0.11).epsilon(1e-12));
  }

  SUBCASE("an erasure channel splits into a perfect and a blind atom") {
    const auto d = bsc_decomposition(make_bec(0.3));
    REQUIRE(d.atoms.size() == 2);
    CHECK(d.atoms[0].p == doctest::Approx(0.0));
    CHECK(d.atoms[0].mass == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(d.atoms[1].p == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(d.atoms[1].mass == doctest::Approx(0.3).epsilon(1e-12));
  }

  SUBCASE("degenerate endpoints collapse to one atom") {
    const auto blind = bsc_decomposition(make_bsc(0.5));
    REQUIRE(blind.atoms.size() == 1);
    CHECK(blind.atoms[0].p == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(blind.atoms[0].mass == doctest::Approx(1.0).epsilon(1e-12));

    const auto clean = bsc_decomposition(make_bec(0.0));
    REQUIRE(clean.atoms.size() == 1);
    CHECK(clean.atoms[0].p == doctest::Approx(0.0));
    CHECK(clean.atoms[0].mass == doctest::Approx(1.0).epsilon(1e-12));

    const auto erased = bsc_decomposition(make_bec(1.0));
    REQUIRE(erased.atoms.size() == 1);
    CHECK(erased.atoms[0].p == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("decomposition reconstructs every scalar measure") {
  std::vector<BinaryChannel> channels{make_quantized_bawgn(1.0, 16),
                                      make_bec(0.45), make_bsc(0.2)};
  Rng rng(derive_seed(41, "decomp", 0));
  for (int i = 0; i < 10; ++i)
    channels.push_back(oracle::random_symmetric_channel(rng));

  for (const auto& w : channels) {
    const auto d = bsc_decomposition(w);
    double mass = 0;
    double prev = -1;
    for (const auto& a : d.atoms) {
      CHECK(a.p >= 0.0);
      CHECK(a.p <= 0.5 + 1e-12);
      CHECK(a.mass > 0.0);
      CHECK(a.p > prev);
      prev = a.p;
      mass += a.mass;
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mixture_capacity(d) ==
          doctest::Approx(symmetric_capacity(w)).epsilon(1e-9));
    CHECK(mixture_bhattacharyya(d) ==
          doctest::Approx(bhattacharyya(w)).epsilon(1e-9));
    CHECK(mixture_e0(d, 1.0) ==
          doctest::Approx(gallager_e0(w, 1.0)).epsilon(1e-9));
  }
}

TEST_CASE("asymmetric channels are rejected with the offending output named") {
  const BinaryChannel skew(arr({0.9, 0.1}), arr({0.5, 0.5}));
  try {
    bsc_decomposition(skew);
    FAIL("expected a throw");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("no mirror") != std::string::npos);
  }

  const BinaryChannel labeled(arr({0.9, 0.1}), arr({0.5, 0.5}), {"a", "b"});
  try {
    bsc_decomposition(labeled);
    FAIL("expected a throw");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("a") != std::string::npos);
  }
}

TEST_CASE("convex order separates spread from concentration") {
  SUBCASE("every channel dominates itself") {
    for (const auto& w : {make_bsc(0.2), make_bec(0.3),
                          make_quantized_bawgn(1.0, 8)})
      CHECK(check_symmetric_convex_order(w, w) ==
            ConvexOrderVerdict::dominates);
  }

  SUBCASE("an erasure mixture dominates the crossover channel of equal mean") {
    const auto bec = make_bec(0.5);
    const auto bsc = make_bsc(0.25);
    CHECK(check_symmetric_convex_order(bec, bsc) ==
          ConvexOrderVerdict::dominates);
    CHECK(check_symmetric_convex_order(bsc, bec) ==
          ConvexOrderVerdict::dominated);
  }

  SUBCASE("different means are incomparable") {
    CHECK(check_symmetric_convex_order(make_bsc(0.05), make_bsc(0.2)) ==
          ConvexOrderVerdict::incomparable);
    CHECK(check_symmetric_convex_order(make_bsc(0.2), make_bsc(0.05)) ==
          ConvexOrderVerdict::incomparable);
  }

  SUBCASE("crossing survival functions with equal means are incomparable") {
    const auto w1 = channel_from_atoms({{0.0, 0.5}, {0.4, 0.5}});
    const auto w2 = channel_from_atoms({{0.1, 0.75}, {0.5, 0.25}});
    CHECK(bsc_decomposition(w1).mean() ==
          doctest::Approx(0.2).epsilon(1e-12));
    CHECK(bsc_decomposition(w2).mean() ==
          doctest::Approx(0.2).epsilon(1e-12));
    CHECK(check_symmetric_convex_order(w1, w2) ==
          ConvexOrderVerdict::incomparable);
    CHECK(check_symmetric_convex_order(w2, w1) ==
          ConvexOrderVerdict::incomparable);
  }
}

TEST_CASE("degradation feasibility matches hand-constructed cascades") {
  SUBCASE("erasure channels degrade along increasing erasure") {
    CHECK(check_degradation(make_bec(0.4), make_bec(0.6)) ==
          DegradationVerdict::degraded);
    CHECK(check_degradation(make_bec(0.6), make_bec(0.4)) ==
          DegradationVerdict::not_degraded);
  }

  SUBCASE("crossover channels degrade along increasing crossover") {
    CHECK(check_degradation(make_bsc(0.1), make_bsc(0.2)) ==
          DegradationVerdict::degraded);
    CHECK(check_degradation(make_bsc(0.2), make_bsc(0.1)) ==
          DegradationVerdict::not_degraded);
  }

  SUBCASE("an erasure channel degrades to the half-rate crossover channel") {
    CHECK(check_degradation(make_bec(0.3), make_bsc(0.15)) ==
          DegradationVerdict::degraded);
    CHECK(check_degradation(make_bsc(0.15), make_bec(0.3)) ==
          DegradationVerdict::not_degraded);
  }

  SUBCASE("a mild erasure channel degrades to a noisier crossover channel") {
    CHECK(check_degradation(make_bec(0.05), make_bsc(0.1)) ==
          DegradationVerdict::degraded);
    CHECK(check_degradation(make_bsc(0.1), make_bec(0.05)) ==
          DegradationVerdict::not_degraded);
  }

  SUBCASE("every channel degrades to itself") {
    Rng rng(derive_seed(43, "selfdeg", 0));
    for (const auto& w :
         {make_bsc(0.17), make_bec(0.62), oracle::random_channel(rng, 6),
          oracle::random_symmetric_channel(rng)})
      CHECK(check_degradation(w, w) == DegradationVerdict::degraded);
  }

  SUBCASE("coarsening the quantizer is a degradation, refining is not") {
    const auto fine = make_quantized_bawgn(1.0, 16);
    const auto coarse = make_quantized_bawgn(1.0, 8);
    CHECK(check_degradation(fine, coarse) == DegradationVerdict::degraded);
    CHECK(check_degradation(coarse, fine) == DegradationVerdict::not_degraded);
  }

  SUBCASE("oversized alphabets are rejected") {
    CHECK_THROWS_AS(check_degradation(make_quantized_bawgn(1.0, 64),
                                      make_bsc(0.1)),
                    std::invalid_argument);
  }

  SUBCASE("degradation implies every measure ordering") {
    const std::vector<std::pair<BinaryChannel, BinaryChannel>> pairs{
        {make_bec(0.4), make_bec(0.6)},
        {make_bsc(0.1), make_bsc(0.2)},
        {make_bec(0.3), make_bsc(0.15)},
        {make_quantized_bawgn(1.0, 16), make_quantized_bawgn(1.0, 8)}};
    for (const auto& [better, worse] : pairs) {
      REQUIRE(check_degradation(better, worse) ==
              DegradationVerdict::degraded);
      CHECK(symmetric_capacity(worse) <=
            symmetric_capacity(better) + 1e-9);
      CHECK(bhattacharyya(worse) >= bhattacharyya(better) - 1e-9);
      for (double rho : {0.5, 1.0, 2.0})
        CHECK(gallager_e0(worse, rho) <= gallager_e0(better, rho) + 1e-9);
    }
  }
}

TEST_CASE("order probe agrees with a known degraded pair and is repeatable") {
  const auto w1 = make_bec(0.3);
  const auto w2 = make_bec(0.5);
  const auto r = polar_order_probe(w1, w2, 8, 64, 400, 2024);
  CHECK(r.w1 == "BEC(0.3)");
  CHECK(r.w2 == "BEC(0.5)");
  CHECK(r.n == 8);
  CHECK(r.k == 64);
  CHECK(r.trials == 400);
  CHECK(r.consistent);
  CHECK(r.err2 >= r.err1);
  CHECK(r.se1 ==
        doctest::Approx(std::sqrt(r.err1 * (1 - r.err1) / 400)).epsilon(1e-15));
  CHECK(r.se2 ==
        doctest::Approx(std::sqrt(r.err2 * (1 - r.err2) / 400)).epsilon(1e-15));

  const auto again = polar_order_probe(w1, w2, 8, 64, 400, 2024);
  CHECK(again.err1 == r.err1);
  CHECK(again.err2 == r.err2);

  CHECK_THROWS_AS(polar_order_probe(w1, w2, 4, 8, 0, 1),
                  std::invalid_argument);
}

TEST_CASE("order probe csv is stable field for field") {
  OrderProbeReport r;
  r.w1 = "a";
  r.w2 = "b";
  r.n = 2;
  r.k = 1;
  r.trials = 16;
  r.err1 = 0.5;
  r.err2 = 0.25;
  r.se1 = 0.125;
  r.se2 = 0.0625;
  r.consistent = false;
  CHECK(order_probe_csv({r}) ==
        "w1,w2,n,k,err1,err2,se1,se2,verdict\n"
        "\"a\",\"b\",2,1,0.5,0.25,0.125,0.0625,inconsistent\n");
  r.consistent = true;
  CHECK(order_probe_csv({r, r}).find("consistent") != std::string::npos);
  CHECK(order_probe_csv({}) == "w1,w2,n,k,err1,err2,se1,se2,verdict\n");
}
