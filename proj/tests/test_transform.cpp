#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "polarlab/channel.hpp"
#include "polarlab/rng.hpp"
#include "polarlab/transform.hpp"

using namespace polarlab;

TEST_CASE("erasure channels transform to erasure channels, closed form") {
  const auto t = transform(make_bec(0.5));
  // 2e - e^2 and e^2, recognizable after collapsing equal-ratio outputs.
  const auto minus = merge_outputs(t.minus, 1 << 20).channel;
  const auto plus = merge_outputs(t.plus, 1 << 20).channel;
  CHECK(oracle::same_channel_up_to_relabeling(minus, make_bec(0.75), 1e-12));
  CHECK(oracle::same_channel_up_to_relabeling(plus, make_bec(0.25), 1e-12));
  CHECK(erasure_parameter(t.minus).has_value());
  CHECK(*erasure_parameter(t.minus) == doctest::Approx(0.75).epsilon(1e-13));
  CHECK(*erasure_parameter(t.plus) == doctest::Approx(0.25).epsilon(1e-13));
}

TEST_CASE("one step agrees with exhaustive two-use synthesis") {
  Rng rng(derive_seed(11, "transform-exact", 0));
  for (int trial = 0; trial < 20; ++trial) {
    const auto w = oracle::random_channel(rng, 5);
    const auto wp = oracle::random_channel(rng, 5);
    const auto t = transform(w, wp);
    const auto minus_ref = oracle::exact_bit_channel({w, wp}, 0);
    const auto plus_ref = oracle::exact_bit_channel({w, wp}, 1);
    CHECK(symmetric_capacity(t.minus) ==
          doctest::Approx(symmetric_capacity(minus_ref)).epsilon(1e-12));
    CHECK(symmetric_capacity(t.plus) ==
          doctest::Approx(symmetric_capacity(plus_ref)).epsilon(1e-12));
    CHECK(bhattacharyya(t.minus) ==
          doctest::Approx(bhattacharyya(minus_ref)).epsilon(1e-12));
    CHECK(bhattacharyya(t.plus) ==
          doctest::Approx(bhattacharyya(plus_ref)).epsilon(1e-12));
  }
}

TEST_CASE("capacity is conserved and the split is strict") {
  Rng rng(derive_seed(11, "transform-conserve", 0));
  for (int trial = 0; trial < 50; ++trial) {
    const auto w = oracle::random_channel(rng);
    const auto wp = oracle::random_channel(rng);
    const auto c = conservation_check(w, wp);
    CHECK(std::abs(c.children_sum - c.parent_sum) < 1e-10);
  }
  // Strictness for a stationary nondegenerate pair.
  const auto t = transform(make_bsc(0.11));
  CHECK(symmetric_capacity(t.plus) - symmetric_capacity(t.minus) > 1e-3);
  // Degenerate corners split into copies of themselves.
  const auto perfect = transform(make_bsc(0.0));
  CHECK(symmetric_capacity(perfect.minus) == doctest::Approx(1.0).epsilon(1e-12));
  const auto useless = transform(make_bsc(0.5));
  CHECK(std::abs(symmetric_capacity(useless.plus)) < 1e-12);
}

TEST_CASE("bhattacharyya recursion bounds") {
  Rng rng(derive_seed(11, "transform-z", 0));
  for (int trial = 0; trial < 50; ++trial) {
    const auto w = oracle::random_channel(rng);
    const auto wp = oracle::random_channel(rng);
    const auto t = transform(w, wp);
    const double z1 = bhattacharyya(w), z2 = bhattacharyya(wp);
    CHECK(bhattacharyya(t.plus) == doctest::Approx(z1 * z2).epsilon(1e-12));
    CHECK(bhattacharyya(t.minus) <= z1 + z2 - z1 * z2 + 1e-12);
    CHECK(bhattacharyya(t.minus) >= std::max(z1, z2) - 1e-12);
  }
  // The worse-channel bound is met with equality exactly on erasures.
  const auto te = transform(make_bec(0.3), make_bec(0.6));
  CHECK(bhattacharyya(te.minus) ==
        doctest::Approx(0.3 + 0.6 - 0.18).epsilon(1e-13));
  CHECK(bhattacharyya(te.plus) == doctest::Approx(0.18).epsilon(1e-13));
}

TEST_CASE("transform output is a deterministic function of its input") {
  const auto a = transform(make_quantized_bawgn(1.0, 16));
  const auto b = transform(make_quantized_bawgn(1.0, 16));
  REQUIRE(a.minus.num_outputs() == b.minus.num_outputs());
  for (Eigen::Index y = 0; y < a.minus.num_outputs(); ++y) {
    CHECK(a.minus.w0()[y] == b.minus.w0()[y]);
    CHECK(a.minus.w1()[y] == b.minus.w1()[y]);
  }
}

TEST_CASE("merging: exact collapse is lossless, greedy loss is measured") {
  // Equal-ratio outputs collapse with no capacity change.
  const auto t = transform(make_bsc(0.11));
  const auto m = merge_outputs(t.plus, 1 << 20);
  CHECK(m.capacity_loss == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(symmetric_capacity(m.channel) ==
        doctest::Approx(symmetric_capacity(t.plus)).epsilon(1e-12));
  CHECK(m.channel.num_outputs() < t.plus.num_outputs());

  // A channel already within budget and with distinct ratios is untouched.
  const auto g = make_quantized_bawgn(1.0, 16);
  const auto same = merge_outputs(g, 16);
  CHECK(same.capacity_loss == 0.0);
  CHECK(same.channel.num_outputs() == 16);
  for (Eigen::Index y = 0; y < 16; ++y) CHECK(same.channel.w0()[y] == g.w0()[y]);

  // Forcing the budget below the distinct-ratio count costs capacity, and
  // the reported loss is exactly the capacity drop.
  const auto tight = merge_outputs(g, 8);
  CHECK(tight.channel.num_outputs() == 8);
  CHECK(tight.capacity_loss ==
        doctest::Approx(symmetric_capacity(g) -
                        symmetric_capacity(tight.channel))
            .epsilon(1e-12));
  CHECK(tight.capacity_loss > 0.0);
  CHECK(tight.capacity_loss < 0.002);
  // Merging only ever degrades: never more capacity, never less z.
  CHECK(bhattacharyya(tight.channel) >= bhattacharyya(g) - 1e-12);

  CHECK_THROWS_AS(merge_outputs(g, 1), std::invalid_argument);
}

TEST_CASE("merging random channels respects the budget and degrades gently") {
  Rng rng(derive_seed(11, "merge-random", 0));
  for (int trial = 0; trial < 30; ++trial) {
    const auto w = oracle::random_channel(rng, 8);
    const auto wp = oracle::random_channel(rng, 8);
    const auto t = transform(w, wp);
    for (int cap : {4, 8, 16}) {
      const auto m = merge_outputs(t.plus, cap);
      CHECK(m.channel.num_outputs() <= cap);
      CHECK(m.capacity_loss >= -1e-14);
      CHECK(symmetric_capacity(m.channel) <=
            symmetric_capacity(t.plus) + 1e-12);
      CHECK(bhattacharyya(m.channel) >= bhattacharyya(t.plus) - 1e-12);
    }
  }
}

TEST_CASE("capacity split is sandwiched by the matched erasure and crossover "
          "channels") {
  Rng rng(derive_seed(11, "transform-extremal", 0));
  for (int trial = 0; trial < 40; ++trial) {
    const auto w = oracle::random_channel(rng);
    const auto s = extremal_split_check(w);
    CHECK(s.gap <= s.bec_gap + 1e-9);
    CHECK(s.gap >= s.bsc_gap - 1e-9);
  }
  const auto s = extremal_split_check(make_quantized_bawgn(1.0, 32));
  CHECK(s.bsc_gap == doctest::Approx(0.42841624023508873).epsilon(1e-10));
  CHECK(s.gap == doctest::Approx(0.47085886044034864).epsilon(1e-10));
  CHECK(s.bec_gap == doctest::Approx(0.49944343643531119).epsilon(1e-10));
}

TEST_CASE("one step never hurts the gallager function for positive rho") {
  Rng rng(derive_seed(11, "transform-e0", 0));
  for (int trial = 0; trial < 25; ++trial) {
    const auto w = oracle::random_channel(rng);
    for (double rho : {0.25, 0.5, 1.0, 2.0}) {
      const auto r = e0_improvement_check(w, rho);
      CHECK(r.children_sum >= r.parent_double - 1e-10);
    }
  }
  // Strict gain away from the degenerate corners.
  const auto r = e0_improvement_check(make_bsc(0.11), 1.0);
  CHECK(r.children_sum - r.parent_double > 1e-3);
}
