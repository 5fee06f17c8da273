#include <cmath>
#include <random>

#include "doctest.h"
#include "gowlab/error.hpp"
#include "gowlab/norms.hpp"
#include "gowlab/reduce.hpp"
#include "test_util.hpp"

using namespace gowlab;
using namespace gowlab::testing;

namespace {

MultiFunction constant(const GroupSpec& g, std::size_t d, Complex c) {
  return MultiFunction::from_table(g, d, std::vector<Complex>(domain_size(g, d), c));
}

MultiFunction bilinear_phase(Index n) {
  const auto g = GroupSpec::make({n});
  return MultiFunction::tabulate(g, 2, [n](std::span<const Index> x) {
    return unit_root(std::uint64_t{x[0]} * x[1], n);
  });
}

std::vector<Complex> quadratic_phase(Index n) {
  std::vector<Complex> v(n);
  for (Index x = 0; x < n; ++x) v[x] = unit_root(std::uint64_t{x} * x, n);
  return v;
}

// u_i tables that ignore coordinate i, with values in [-1, 1].
CoordinateFreeTables random_coordinate_free(const GroupSpec& g, std::size_t d,
                                            std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  CoordinateFreeTables u;
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<double> v(domain_size(g, d - 1));
    for (auto& x : v) x = dist(rng);
    u.push_back(lift_skipping(g, d, i, v));
  }
  return u;
}

}  // namespace

TEST_CASE("gowers_norm examples") {
  for (std::size_t d = 1; d <= 3; ++d) {
    const auto r = gowers_norm(constant(GroupSpec::make({4}), d, 1.0));
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.semi_norm == (d == 1));
  }
  const auto f = bilinear_phase(5);
  const double expect = std::pow(5.0, -0.25);
  CHECK(gowers_norm(f).value == doctest::Approx(expect).epsilon(1e-12));
  CHECK(brute_norm(f) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(gowers_norm(f).value == doctest::Approx(0.66874).epsilon(1e-5));

  std::vector<Complex> delta(8, 0.0);
  delta[0] = 1.0;
  const auto g8 = GroupSpec::make({8});
  const auto r1 = gowers_norm(MultiFunction::from_table(g8, 1, delta));
  CHECK(r1.value == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(r1.semi_norm);
}

TEST_CASE("naive norm agrees with a literal brute force") {
  std::mt19937_64 rng(21);
  for (const auto& [n, d] : std::vector<std::pair<Index, std::size_t>>{{5, 1}, {4, 2}, {3, 3}, {2, 4}}) {
    const auto f = random_function(GroupSpec::make({n}), d, rng);
    CHECK(rel_err(gowers_norm(f).value, brute_norm(f)) < 1e-12);
  }
  const auto prod = random_function(GroupSpec::make({2, 3}), 2, rng);
  CHECK(rel_err(gowers_norm(prod).value, brute_norm(prod)) < 1e-12);
}

TEST_CASE("budget overflow names the required term count") {
  const auto f = constant(GroupSpec::make({16}), 4, 1.0);
  try {
    gowers_norm(f);
    FAIL("expected cost error");
  } catch (const CostError& e) {
    CHECK(e.required_terms() == doctest::Approx(std::pow(16.0, 8)));
    CHECK(e.kind() == ErrorKind::kCost);
  }
  CHECK_THROWS_AS(gowers_norm(constant(GroupSpec::make({4}), 2, 1.0), 100.0), CostError);
}

TEST_CASE("one-dimensional norm examples") {
  const auto z7 = GroupSpec::make({7});
  const std::vector<Complex> ones(7, 1.0);
  for (int d = 1; d <= 4; ++d) {
    CHECK(gowers_norm_onedim(z7, ones, d, NormMethod::kRecursive).value ==
          doctest::Approx(1.0).epsilon(1e-14));
  }
  const auto q = quadratic_phase(7);
  // Expected values from the naive brute force at N = 7.
  const double u2 = std::pow(7.0, -0.25);
  CHECK(rel_err(gowers_norm_onedim(z7, q, 2, NormMethod::kNaive).value, u2) < 1e-12);
  CHECK(rel_err(gowers_norm_onedim(z7, q, 2, NormMethod::kRecursive).value, u2) < 1e-12);
  CHECK(rel_err(gowers_norm_onedim(z7, q, 2, NormMethod::kFourier).value, u2) < 1e-12);
  CHECK(rel_err(gowers_norm_onedim(z7, q, 3, NormMethod::kNaive).value, 1.0) < 1e-12);
  CHECK(rel_err(gowers_norm_onedim(z7, q, 3, NormMethod::kRecursive).value, 1.0) < 1e-12);
  CHECK(rel_err(gowers_norm_onedim(z7, q, 3, NormMethod::kFourier).value, 1.0) < 1e-12);
  CHECK_THROWS_AS(gowers_norm_onedim(z7, q, 1, NormMethod::kFourier), Error);
  CHECK_THROWS_AS(gowers_norm_onedim(z7, q, 0, NormMethod::kRecursive), Error);

  std::mt19937_64 rng(22);
  const auto z16 = GroupSpec::make({16});
  const auto s = random_signs(16, rng);
  const double naive = gowers_norm_onedim(z16, s, 3, NormMethod::kNaive).value;
  const double rec = gowers_norm_onedim(z16, s, 3, NormMethod::kRecursive).value;
  CHECK(std::abs(naive - rec) < 1e-10);
  CHECK(std::abs(gowers_norm_onedim(z16, s, 3, NormMethod::kFourier).value - rec) < 1e-10);
}

TEST_CASE("calU norm examples") {
  CHECK(calU_norm(constant(GroupSpec::make({5}), 2, 1.0)) == doctest::Approx(625.0));
  CHECK(calU_norm(bilinear_phase(5)) == doctest::Approx(125.0).epsilon(1e-12));
  CHECK(calU_norm(constant(GroupSpec::make({5}), 2, 0.0)) == 0.0);
}

TEST_CASE("box norm examples") {
  const auto g = GroupSpec::make({4});
  CHECK(box_norm_u2(constant(g, 3, 1.0), 0, 2) == doctest::Approx(std::pow(4.0, 5)));
  std::mt19937_64 rng(23);
  const auto f2 = random_function(GroupSpec::make({6}), 2, rng);
  CHECK(rel_err(box_norm_u2(f2, 0, 1), calU_norm(f2)) < 1e-12);
  CHECK_THROWS_AS(box_norm_u2(f2, 1, 1), Error);
  CHECK_THROWS_AS(box_norm_u2(f2, 0, 2), Error);

  // Six nested loops, d = 3, N = 8, rho = (1, 3).
  const auto g8 = GroupSpec::make({8});
  const auto f = MultiFunction::from_table(g8, 3, random_phases(512, rng));
  Complex brute{0, 0};
  for (Index x1 = 0; x1 < 8; ++x1)
    for (Index x2 = 0; x2 < 8; ++x2)
      for (Index x3 = 0; x3 < 8; ++x3)
        for (Index y1 = 0; y1 < 8; ++y1)
          for (Index y3 = 0; y3 < 8; ++y3) {
            const Index a[3] = {x1, x2, x3}, b[3] = {y1, x2, x3}, c[3] = {x1, x2, y3},
                        e[3] = {y1, x2, y3};
            brute += f(a) * std::conj(f(b)) * std::conj(f(c)) * f(e);
          }
  CHECK(std::abs(brute.imag()) < 1e-9);
  CHECK(rel_err(box_norm_u2(f, 0, 2), brute.real()) < 1e-9);
}

TEST_CASE("skew compositions evaluate as defined") {
  const auto g = GroupSpec::make({5});
  const auto id = identity_map(g);
  const Index pt[2] = {1, 2};
  CHECK(std::abs(compose_skew(id, 1, SkewKind::kF)(pt) - unit_root(3, 5)) < 1e-15);
  CHECK(std::abs(compose_skew(id, 1, SkewKind::kH)(pt) - unit_root(2, 5)) < 1e-15);
  CHECK(std::abs(compose_skew(id, 1, SkewKind::kF, 1)(pt) - 1.0) < 1e-15);
  CHECK(compose_skew(id, 3, SkewKind::kF).is_materialized());
  CHECK(!compose_skew(id, 4, SkewKind::kF).is_materialized());
  CHECK(compose_skew(id, 2, SkewKind::kF).arity() == 3);
}

TEST_CASE("fiber identity examples") {
  const auto g = GroupSpec::make({11});
  CHECK(rect_norm_phase_fiber(identity_map(g)) == doctest::Approx(std::pow(11.0, -0.25)));
  CHECK(rect_norm_phase_fiber(make_map(g, std::vector<Index>(11, 3))) == doctest::Approx(1.0));
  const auto g8 = GroupSpec::make({8});
  std::vector<Index> two_to_one(8);
  for (Index x = 0; x < 8; ++x) two_to_one[x] = x / 2;
  const double v = rect_norm_phase_fiber(make_map(g8, two_to_one));
  CHECK(v == doctest::Approx(0.70711).epsilon(1e-5));
  CHECK(v == doctest::Approx(std::pow(2.0 / 8.0, 0.25)).epsilon(1e-14));
}

TEST_CASE("fiber identity matches the naive rectangular norm") {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 2 + trial;
    const auto a = random_map(GroupSpec::make({n}), rng);
    CHECK(rel_err(rect_norm_phase_fiber(a), gowers_norm(phase_function(a)).value) < 1e-10);
  }
  const auto a = random_map(GroupSpec::make({2, 5}), rng);
  CHECK(rel_err(rect_norm_phase_fiber(a), gowers_norm(phase_function(a)).value) < 1e-10);
}

TEST_CASE("cube count examples and method agreement") {
  for (Index n : {5u, 8u}) {
    const auto g = GroupSpec::make({n});
    const auto id = identity_map(g);
    const auto c = make_map(g, std::vector<Index>(n, 1));
    for (auto m : {NormMethod::kNaive, NormMethod::kSpectral}) {
      CHECK(cube_count(id, 1, m).count == n);
      CHECK(cube_count(c, 1, m).count == std::uint64_t{n} * n);
      CHECK(cube_count(id, 2, m).count == std::uint64_t{n} * n * n * n);
    }
  }
  std::mt19937_64 rng(25);
  for (Index n = 2; n <= 16; n += 2) {
    const auto a = random_map(GroupSpec::make({n}), rng);
    CHECK(cube_count(a, 1, NormMethod::kNaive).count ==
          cube_count(a, 1, NormMethod::kSpectral).count);
    CHECK(cube_count(a, 2, NormMethod::kNaive).count ==
          cube_count(a, 2, NormMethod::kSpectral).count);
  }
  CHECK_THROWS_AS(cube_count(identity_map(GroupSpec::make({4})), 1, NormMethod::kFourier), Error);
}

TEST_CASE("Gowers-Cauchy-Schwarz correlation") {
  const auto g5 = GroupSpec::make({5});
  const auto ones2 = std::vector<double>(25, 1.0);
  const CoordinateFreeTables unit{ones2, ones2};
  const auto one = constant(g5, 2, 1.0);
  const auto c = gcs_check(one, unit);
  CHECK(std::abs(c.correlation - 1.0) < 1e-14);
  CHECK(c.holds);

  const auto bp = bilinear_phase(5);
  const auto cb = gcs_check(bp, unit);
  CHECK(std::abs(cb.correlation - 0.2) < 1e-14);
  CHECK(cb.norm == doctest::Approx(std::pow(5.0, -0.25)));
  CHECK(cb.holds);

  std::mt19937_64 rng(26);
  const auto g8 = GroupSpec::make({8});
  for (int trial = 0; trial < 200; ++trial) {
    const auto f = random_function(g8, 2, rng);
    CHECK(gcs_check(f, random_coordinate_free(g8, 2, rng)).holds);
  }
}

TEST_CASE("coordinate-free contract violations") {
  const auto g = GroupSpec::make({4});
  const auto f = constant(g, 2, 1.0);
  std::vector<double> dependent(16);
  for (std::size_t i = 0; i < 16; ++i) dependent[i] = double(i) / 16.0;
  const std::vector<double> ok(16, 0.5);
  try {
    gcs_correlation(f, {dependent, ok});
    FAIL("expected contract error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kContract);
  }
  const std::vector<double> big(16, 2.0);
  CHECK_THROWS_AS(gcs_correlation(f, {ok, big}), Error);
  CHECK_THROWS_AS(gcs_correlation(f, {ok}), Error);
  CHECK_THROWS_AS(modulate(f, {dependent, ok}), Error);
}

TEST_CASE("modulation leaves norms unchanged") {
  std::mt19937_64 rng(27);
  const auto g8 = GroupSpec::make({8});
  const auto f = random_function(g8, 2, rng);
  const CoordinateFreeTables zero{std::vector<double>(64, 0.0), std::vector<double>(64, 0.0)};
  const auto same = modulate(f, zero);
  for (std::size_t i = 0; i < 64; ++i) CHECK(std::abs(same.table()[i] - f.table()[i]) < 1e-15);

  const auto u = random_coordinate_free(g8, 2, rng);
  CHECK(std::abs(gowers_norm(modulate(f, u)).value - gowers_norm(f).value) < 1e-10);

  // A lambda shift is a y-only modulation of e(x . a(y)).
  const auto a = random_map(g8, rng);
  const double base = gowers_norm(compose_skew(a, 1, SkewKind::kH, 0)).value;
  for (Index lambda = 1; lambda < 8; ++lambda) {
    CHECK(std::abs(gowers_norm(compose_skew(a, 1, SkewKind::kH, lambda)).value - base) < 1e-12);
  }
  // The product-phase variant is computable; no invariance asserted.
  CHECK(modulate_product_phase(f, u).arity() == 2);
}

TEST_CASE("norm axioms on small random instances") {
  std::mt19937_64 rng(28);
  for (int trial = 0; trial < 10; ++trial) {
    for (std::size_t d : {2u, 3u}) {
      const auto g = GroupSpec::make({d == 2 ? 8u : 5u});
      const auto f = random_function(g, d, rng);
      const auto h = random_function(g, d, rng);
      CHECK(gowers_norm(f + h).value <= gowers_norm(f).value + gowers_norm(h).value + 1e-9);
      const auto big = gowers_norm(f);
      double avg = 0;
      for (Index x = 0; x < g.order(); ++x) avg += gowers_norm(fix_last(f, x)).power;
      avg /= g.order();
      CHECK(avg <= std::pow(big.value, std::ldexp(1.0, int(d) - 1)) + 1e-9);
    }
    const auto z = GroupSpec::make({9});
    const auto v = random_disk(9, rng);
    for (int d = 2; d <= 4; ++d) {
      CHECK(gowers_norm_onedim(z, v, d - 1, NormMethod::kRecursive).value <=
            gowers_norm_onedim(z, v, d, NormMethod::kRecursive).value + 1e-9);
    }
  }
}

TEST_CASE("naive sums do not depend on the worker count") {
  std::mt19937_64 rng(29);
  const auto f = random_function(GroupSpec::make({6}), 3, rng);
  const std::size_t saved = worker_count();
  set_worker_count(1);
  const Complex serial = gowers_cube_sum(f);
  set_worker_count(4);
  const Complex parallel = gowers_cube_sum(f);
  set_worker_count(saved);
  CHECK(serial == parallel);
}
