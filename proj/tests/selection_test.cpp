#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "gowlab/error.hpp"
#include "gowlab/reduce.hpp"
#include "gowlab/selection.hpp"
#include "test_util.hpp"

using namespace gowlab;
using namespace gowlab::testing;

namespace {

struct Fixture {
  GroupSpec g;
  ArithMap a;
  Families fam;
  MapList phi;
  std::vector<Index> good, bad;
};

// First good and first bad tuple for a random map on Z_16.
Fixture find_tuples(std::uint64_t seed) {
  const auto g = GroupSpec::make({16});
  const auto fam = derive_families(cube_system(2));
  for (std::uint64_t s = seed;; ++s) {
    std::mt19937_64 rng(s);
    const auto a = random_map(g, rng);
    const auto phi = uniform_maps(a, 4);
    std::vector<Index> good, bad;
    enumerate_solutions(fam, phi, full_windows(g, 4), ConstraintSet{},
                        [&](std::span<const Index> x, TupleClass c) {
                          if (c == TupleClass::kGood && good.empty()) good.assign(x.begin(), x.end());
                          if (c == TupleClass::kBad && bad.empty()) bad.assign(x.begin(), x.end());
                        });
    if (!good.empty() && !bad.empty()) return {g, a, fam, phi, good, bad};
  }
}

TupleKernel unit_kernel() {
  return [](std::span<const Index>, std::span<const Index>) { return Complex{1, 0}; };
}

}  // namespace

TEST_CASE("inclusion probability examples") {
  const auto g4 = GroupSpec::make({4});
  SelectionSamples none;
  CHECK(inclusion_probability(g4, 3, 1, none) == 1.0);
  SelectionSamples zero{{0}, {0}, {}};
  for (Index x = 0; x < 4; ++x) CHECK(inclusion_probability(g4, x, 2, zero) == 1.0);
  SelectionSamples half{{1}, {0}, {}};
  CHECK(std::abs(inclusion_probability(g4, 2, 0, half)) < 1e-15);
  SelectionSamples two{{1, 0}, {0, 1}, {{2, 3}}};
  const double p = inclusion_probability(g4, 1, 1, two);
  const double expect = (1 + std::cos(M_PI / 2)) * (1 + std::cos(M_PI)) * (1 + std::cos(M_PI / 2)) *
                        (1 + std::cos(3 * M_PI / 2)) / 16;
  CHECK(p == doctest::Approx(expect));
}

TEST_CASE("inclusion probability stays in [0, 1]") {
  const auto g = GroupSpec::make({9});
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto s = sample_rounds(g, 3, 4, seed);
    for (Index x = 0; x < 9; ++x) {
      const double p = inclusion_probability(g, x, (x * 5) % 9, s);
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
    }
  }
}

TEST_CASE("predicted probabilities") {
  CHECK(predicted_probs(4, 1, 3, 0).bad_exact == std::ldexp(1.0, -12));
  const auto k0 = predicted_probs(4, 1, 0, 5);
  CHECK(k0.bad_exact == 1.0);
  CHECK(k0.good_lower == 1.0);
  CHECK(predicted_probs(4, 1, 2, 0).good_lower ==
        doctest::Approx(std::ldexp(1.0, -8) * 1.125 * 1.125).epsilon(1e-14));
  const auto big = predicted_probs(8, 4, 2, 255320576.0);
  CHECK(big.bad_log2 == doctest::Approx(-64 + 2 * std::log2(1 + 255320576.0 / 16777216.0)));
  CHECK_THROWS_AS(predicted_probs(4, 1, 1, -1), Error);
}

TEST_CASE("counter-based streams") {
  CHECK(stream_hash(1, 2, 3, 4) == stream_hash(1, 2, 3, 4));
  CHECK(stream_hash(1, 2, 3, 4) != stream_hash(1, 2, 4, 3));
  std::vector<int> hist(7, 0);
  for (std::uint64_t i = 0; i < 70000; ++i) ++hist[bounded_draw(stream_hash(9, 0, i, 0), 7)];
  for (int h : hist) CHECK(std::abs(h - 10000) < 500);
  const auto a = sample_rounds(GroupSpec::make({16}), 2, 3, 77);
  const auto b = sample_rounds(GroupSpec::make({16}), 2, 3, 77);
  CHECK(a.r == b.r);
  CHECK(a.w == b.w);
  CHECK(a.w.size() == 1);
}

TEST_CASE("exhaustive averages reproduce the closed forms") {
  const auto f = find_tuples(40);
  for (std::size_t k = 1; k <= 2; ++k) {
    const auto pred = predicted_probs(4, 1, double(k), f.fam.stats.theta1);
    const double pb = exact_tuple_probability(f.g, f.bad, f.phi, 1, k);
    const double pg = exact_tuple_probability(f.g, f.good, f.phi, 1, k);
    CHECK(pb == doctest::Approx(pred.bad_exact).epsilon(1e-12));
    CHECK(pg >= pred.good_lower * (1 - 1e-12));
    CHECK(pg > pb);
  }

  // Z_8 has no non-degenerate 4-tuples; tuples with no relation holding on
  // both x and phi(x) still get exactly 2^{-4k}.
  const auto g8 = GroupSpec::make({8});
  const auto fam = derive_families(cube_system(2));
  std::mt19937_64 rng(41);
  const auto phi = uniform_maps(random_map(g8, rng), 4);
  int tested = 0;
  enumerate_solutions(fam, phi, full_windows(g8, 4), ConstraintSet{},
                      [&](std::span<const Index> x, TupleClass) {
                        if (tested >= 5) return;
                        std::vector<Index> px(4);
                        for (int j = 0; j < 4; ++j) px[j] = phi[j](x[j]);
                        bool shared = false;
                        IntRow eps(4, -1);
                        while (true) {
                          const bool zero = std::all_of(eps.begin(), eps.end(), [](int e) { return e == 0; });
                          if (!zero && dot(g8, eps, x) == 0 && dot(g8, eps, px) == 0) shared = true;
                          std::size_t k = 0;
                          while (k < 4 && ++eps[k] == 2) eps[k++] = -1;
                          if (k == 4) break;
                        }
                        if (shared) return;
                        const std::vector<Index> t(x.begin(), x.end());
                        CHECK(exact_tuple_probability(g8, t, phi, 1, 2) ==
                              doctest::Approx(std::ldexp(1.0, -8)).epsilon(1e-12));
                        ++tested;
                      });
  CHECK(tested == 5);
}

TEST_CASE("Monte Carlo inclusion matches the prediction") {
  const auto f = find_tuples(40);
  const auto pred = predicted_probs(4, 1, 2, 0);
  const int seeds = 10000;
  int hit_bad = 0, hit_good = 0;
  const auto w = full_windows(f.g, 4);
  for (int s = 0; s < seeds; ++s) {
    const auto sel = draw_selection(w, f.phi, 1, {2, std::uint64_t(s)});
    hit_bad += in_product(sel, f.bad);
    hit_good += in_product(sel, f.good);
  }
  const double pb = double(hit_bad) / seeds;
  const double se = std::sqrt(pred.bad_exact * (1 - pred.bad_exact) / seeds);
  CHECK(std::abs(pb - pred.bad_exact) <= 3 * se);
  const double pg = double(hit_good) / seeds;
  CHECK(pg >= pred.good_lower - 3 * std::sqrt(pred.good_lower * (1 - pred.good_lower) / seeds));
}

TEST_CASE("expected window sizes") {
  const auto g = GroupSpec::make({8});
  std::mt19937_64 rng(42);
  const auto a = random_map(g, rng);
  const auto phi = uniform_maps(a, 2);
  Windows w{Subset::range(8, 0, 8), Subset::range(8, 2, 7)};
  for (std::size_t j = 0; j < 2; ++j) {
    double expect = 0;
    for (Index x : w[j].elements()) expect += expected_inclusion(g, x, a(x), 1, 2);
    const int seeds = 4000;
    std::vector<double> sizes;
    for (int s = 0; s < seeds; ++s) {
      sizes.push_back(double(draw_selection(w, phi, 1, {2, std::uint64_t(1000 + s)})[j].count()));
    }
    double mean = 0, var = 0;
    for (double v : sizes) mean += v;
    mean /= seeds;
    for (double v : sizes) var += (v - mean) * (v - mean);
    var /= seeds - 1;
    CHECK(std::abs(mean - expect) <= 3 * std::sqrt(var / seeds));
  }
}

TEST_CASE("selection runs") {
  const auto f = find_tuples(40);
  const auto w = full_windows(f.g, 4);
  const auto none = run_selection(w, f.phi, f.fam, {0, 5});
  CHECK(none.selected == w);
  CHECK(none.after == none.before);
  const auto some = run_selection(w, f.phi, f.fam, {2, 5});
  for (std::size_t j = 0; j < 4; ++j) {
    for (Index x : some.selected[j].elements()) CHECK(w[j].contains(x));
  }
  CHECK(some.after.additive <= some.before.additive);
  CHECK(some.predicted.bad_exact == std::ldexp(1.0, -8));

  const std::size_t saved = worker_count();
  set_worker_count(1);
  const auto serial = draw_selection(w, f.phi, 1, {3, 99});
  set_worker_count(4);
  const auto parallel = draw_selection(w, f.phi, 1, {3, 99});
  set_worker_count(saved);
  CHECK(serial == parallel);
}

TEST_CASE("increment loop bookkeeping") {
  const auto g = GroupSpec::make({16});
  const auto fam = derive_families(cube_system(2));
  const auto id = uniform_maps(identity_map(g), 4);
  const auto w = full_windows(g, 4);

  const auto ones = increment_loop(unit_kernel(), id, fam, w, ConstraintSet{}, {2, 6, 0.0, 3});
  REQUIRE(ones.records.size() >= 2);
  for (std::size_t i = 0; i < ones.records.size(); ++i) {
    const auto& r = ones.records[i];
    CHECK(r.level == i);
    CHECK(r.sigma_abs_total == r.tau);
    if (r.tau > 0) CHECK(r.alpha == 1.0);
    CHECK(r.conserved);
  }

  const auto kernel = skew_sigma1_kernel(g);
  const auto tr = increment_loop(kernel, id, fam, w, ConstraintSet{}, {3, 10, 0.0, 11});
  CHECK(tr.records.size() == 11);
  CHECK(tr.stop_reason == "max_steps");
  for (std::size_t i = 1; i < tr.records.size(); ++i) {
    const auto& r = tr.records[i];
    const auto& p = tr.records[i - 1];
    CHECK(r.level == p.level + 1);
    CHECK(r.tau + r.removed_tau == p.tau);
    CHECK(r.tau <= p.tau);
    if (r.good > 0) CHECK(r.tau < p.tau);
  }

  const auto zero = increment_loop(kernel, id, fam, w, ConstraintSet{}, {3, 0, 0.0, 11});
  CHECK(zero.records.size() == 1);
  const auto stop = increment_loop(kernel, id, fam, w, ConstraintSet{}, {3, 10, 1e9, 11});
  CHECK(stop.records.size() == 1);
  CHECK(stop.stop_reason == "alpha_threshold");

  std::ostringstream out;
  write_trace_jsonl(out, zero);
  CHECK(out.str().find("\"schema\":\"gowlab.trace/1\"") != std::string::npos);
  CHECK(out.str().find("\"sigma_abs_total\"") != std::string::npos);
}
