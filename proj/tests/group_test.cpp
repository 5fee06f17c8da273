#include <cmath>
#include <numbers>

#include "doctest.h"
#include "gowlab/error.hpp"
#include "gowlab/group.hpp"

using namespace gowlab;

namespace {

Element el(const GroupSpec& g, std::initializer_list<std::int64_t> c) {
  std::vector<std::int64_t> v(c);
  return make_element(g, v);
}

bool near(Complex a, Complex b, double tol = 1e-14) { return std::abs(a - b) < tol; }

}  // namespace

TEST_CASE("make_group orders") {
  CHECK(GroupSpec::make({5}).order() == 5);
  CHECK(GroupSpec::make({2, 3}).order() == 6);
  CHECK(GroupSpec::make({1}).order() == 1);
  CHECK_THROWS_AS(GroupSpec::make({}), Error);
  CHECK_THROWS_AS(GroupSpec::make({3, 0}), Error);
  try {
    GroupSpec::make({});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kInvalidSpec);
  }
}

TEST_CASE("group spec grammar") {
  CHECK(GroupSpec::parse("Z:5").orders() == std::vector<std::uint32_t>{5});
  CHECK(GroupSpec::parse("z:2xZ:3").orders() == std::vector<std::uint32_t>{2, 3});
  CHECK(GroupSpec::parse("Z:2XZ:3").to_string() == "Z:2xZ:3");
  CHECK_THROWS_AS(GroupSpec::parse("Z5"), Error);
  CHECK_THROWS_AS(GroupSpec::parse("Z:2x"), Error);
  CHECK_THROWS_AS(GroupSpec::parse("Z:0"), Error);
}

TEST_CASE("group arithmetic examples") {
  const auto z5 = GroupSpec::make({5});
  CHECK(add(z5, el(z5, {3}), el(z5, {4})).flat == 2);
  const auto z7 = GroupSpec::make({7});
  CHECK(neg(z7, el(z7, {3})).flat == 4);
  const auto z23 = GroupSpec::make({2, 3});
  const auto sum = add(z23, el(z23, {1, 2}), el(z23, {1, 2}));
  CHECK(sum.coords == std::vector<std::uint32_t>{0, 1});
  CHECK(scalar_mul(z7, el(z7, {3}), -1).flat == 4);
  CHECK(scalar_mul(z7, el(z7, {3}), 0).flat == 0);
}

TEST_CASE("element/group mismatch is a domain error") {
  const auto z5 = GroupSpec::make({5});
  const auto z23 = GroupSpec::make({2, 3});
  const auto x = el(z23, {1, 1});
  try {
    add(z5, x, x);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kDomain);
  }
  Element forged{{9}, 9};
  CHECK_THROWS_AS(neg(z5, forged), Error);
}

TEST_CASE("character pairing examples") {
  const auto z4 = GroupSpec::make({4});
  CHECK(near(character_pair(z4, el(z4, {1}), el(z4, {2})), Complex(-1, 0)));
  for (Index x = 0; x < 4; ++x) CHECK(near(z4.character(0, x), Complex(1, 0)));
  const auto z23 = GroupSpec::make({2, 3});
  const Complex expect = std::polar(1.0, 2 * std::numbers::pi * 5.0 / 6.0);
  CHECK(near(character_pair(z23, el(z23, {1, 1}), el(z23, {1, 1})), expect));
}

TEST_CASE("group invariants hold exhaustively for N <= 36") {
  for (const auto& orders : std::vector<std::vector<std::uint32_t>>{
           {1}, {7}, {12}, {36}, {2, 3}, {6, 6}, {4, 9}, {2, 2, 3}, {3, 1, 4}}) {
    const auto g = GroupSpec::make(orders);
    const Index n = g.order();
    CAPTURE(g.to_string());
    for (Index x = 0; x < n; ++x) {
      CHECK(g.add(x, g.zero()) == x);
      CHECK(g.add(x, g.neg(x)) == g.zero());
      const auto c = g.coords(x);
      std::vector<std::int64_t> ci(c.begin(), c.end());
      CHECK(g.flat(ci) == x);
    }
    for (Index xi = 0; xi < n; ++xi) {
      Complex total{0, 0};
      for (Index x = 0; x < n; ++x) {
        total += g.character(xi, x);
        for (Index y = 0; y < n; ++y) {
          const Complex lhs = g.character(xi, g.add(x, y));
          const Complex rhs = g.character(xi, x) * g.character(xi, y);
          if (!near(lhs, rhs, 1e-12)) FAIL("pairing is not a homomorphism");
        }
      }
      const Complex expect = xi == 0 ? Complex(n, 0) : Complex(0, 0);
      CHECK(near(total, expect, 1e-11));
    }
  }
}

TEST_CASE("unit roots are accurate") {
  for (std::uint64_t n : {1u, 2u, 3u, 8u, 12u, 97u, 1000u}) {
    for (std::uint64_t k = 0; k < n; ++k) {
      const Complex expect = std::polar(1.0, 2 * std::numbers::pi * double(k) / double(n));
      CHECK(std::abs(unit_root(k, n) - expect) < 1e-14);
      CHECK(std::abs(std::abs(unit_root(k, n)) - 1.0) < 1e-15);
    }
  }
}
