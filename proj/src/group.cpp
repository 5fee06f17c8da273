#include "gowlab/group.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>

#include "gowlab/error.hpp"

namespace gowlab {

Complex unit_root(std::uint64_t k, std::uint64_t n) {
  k %= n;
  if (k == 0) return {1.0, 0.0};
  // Reduce to the first octant so sin/cos see arguments in [0, pi/4].
  const std::uint64_t k8 = 8 * k;
  if (k8 == n) return {std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2};
  if (2 * k == n) return {-1.0, 0.0};
  if (4 * k == n) return {0.0, 1.0};
  if (4 * k == 3 * n) return {0.0, -1.0};
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) /
                       static_cast<double>(n);
  if (2 * k > n) return std::conj(unit_root(n - k, n));
  if (4 * k > n) {
    // angle in (pi/2, pi): e(k/n) = i * e(k/n - 1/4).
    const double rest = angle - std::numbers::pi / 2;
    return {-std::sin(rest), std::cos(rest)};
  }
  return {std::cos(angle), std::sin(angle)};
}

GroupSpec GroupSpec::make(std::vector<std::uint32_t> orders) {
  if (orders.empty()) fail(ErrorKind::kInvalidSpec, "group: empty order list");
  std::uint64_t total = 1;
  std::uint64_t lcm = 1;
  for (const auto n : orders) {
    if (n == 0) fail(ErrorKind::kInvalidSpec, "group: zero cyclic order");
    total *= n;
    if (total > (std::uint64_t{1} << 31)) {
      fail(ErrorKind::kInvalidSpec, "group: order exceeds 2^31");
    }
    lcm = std::lcm(lcm, std::uint64_t{n});
  }
  GroupSpec g;
  g.orders_ = std::move(orders);
  g.order_ = static_cast<Index>(total);
  g.exponent_ = lcm;
  g.weights_.reserve(g.orders_.size());
  for (const auto n : g.orders_) g.weights_.push_back(lcm / n);
  auto roots = std::make_shared<std::vector<Complex>>(lcm);
  for (std::uint64_t k = 0; k < lcm; ++k) (*roots)[k] = unit_root(k, lcm);
  g.roots_ = std::move(roots);
  return g;
}

GroupSpec GroupSpec::parse(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  std::vector<std::uint32_t> orders;
  std::string_view rest = lower;
  while (true) {
    if (rest.substr(0, 2) != "z:") {
      fail(ErrorKind::kParse, "group spec: expected 'Z:<n>' in '" +
                                  std::string(text) + "'");
    }
    rest.remove_prefix(2);
    std::uint32_t n = 0;
    const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), n);
    if (ec != std::errc() || ptr == rest.data()) {
      fail(ErrorKind::kParse, "group spec: bad order in '" + std::string(text) + "'");
    }
    orders.push_back(n);
    rest.remove_prefix(static_cast<std::size_t>(ptr - rest.data()));
    if (rest.empty()) break;
    if (rest.front() != 'x') {
      fail(ErrorKind::kParse, "group spec: expected 'x' in '" + std::string(text) + "'");
    }
    rest.remove_prefix(1);
  }
  return make(std::move(orders));
}

Index GroupSpec::add(Index a, Index b) const noexcept {
  if (is_cyclic()) {
    const std::uint64_t s = std::uint64_t{a} + b;
    return static_cast<Index>(s >= order_ ? s - order_ : s);
  }
  Index out = 0;
  Index stride = order_;
  for (const auto n : orders_) {
    stride /= n;
    const Index ca = (a / stride) % n;
    const Index cb = (b / stride) % n;
    const Index c = ca + cb >= n ? ca + cb - n : ca + cb;
    out += c * stride;
  }
  return out;
}

Index GroupSpec::neg(Index a) const noexcept {
  if (is_cyclic()) return a == 0 ? 0 : order_ - a;
  Index out = 0;
  Index stride = order_;
  for (const auto n : orders_) {
    stride /= n;
    const Index c = (a / stride) % n;
    out += (c == 0 ? 0 : n - c) * stride;
  }
  return out;
}

Index GroupSpec::sub(Index a, Index b) const noexcept { return add(a, neg(b)); }

Index GroupSpec::scale(Index a, std::int64_t k) const noexcept {
  Index out = 0;
  Index stride = order_;
  for (const auto n : orders_) {
    stride /= n;
    const std::int64_t c = (a / stride) % n;
    std::int64_t r = (c * (k % static_cast<std::int64_t>(n))) % static_cast<std::int64_t>(n);
    if (r < 0) r += n;
    out += static_cast<Index>(r) * stride;
  }
  return out;
}

std::vector<std::uint32_t> GroupSpec::coords(Index flat) const {
  std::vector<std::uint32_t> out(orders_.size());
  for (std::size_t i = orders_.size(); i-- > 0;) {
    out[i] = flat % orders_[i];
    flat /= orders_[i];
  }
  return out;
}

Index GroupSpec::flat(std::span<const std::int64_t> coords) const {
  if (coords.size() != orders_.size()) {
    fail(ErrorKind::kDomain, "element has " + std::to_string(coords.size()) +
                                 " coordinates, group has " +
                                 std::to_string(orders_.size()) + " factors");
  }
  Index out = 0;
  for (std::size_t i = 0; i < orders_.size(); ++i) {
    const auto n = static_cast<std::int64_t>(orders_[i]);
    std::int64_t c = coords[i] % n;
    if (c < 0) c += n;
    out = out * orders_[i] + static_cast<Index>(c);
  }
  return out;
}

std::uint64_t GroupSpec::pairing(Index xi, Index x) const noexcept {
  if (is_cyclic()) {
    return (std::uint64_t{xi} * x) % order_;
  }
  std::uint64_t acc = 0;
  for (std::size_t i = orders_.size(); i-- > 0;) {
    const std::uint64_t n = orders_[i];
    acc += ((xi % n) * (x % n) % n) * weights_[i];
    xi /= static_cast<Index>(n);
    x /= static_cast<Index>(n);
  }
  return acc % exponent_;
}

std::string GroupSpec::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < orders_.size(); ++i) {
    if (i) out += 'x';
    out += "Z:" + std::to_string(orders_[i]);
  }
  return out;
}

Element make_element(const GroupSpec& g, std::span<const std::int64_t> coords) {
  return element_at(g, g.flat(coords));
}

Element element_at(const GroupSpec& g, Index flat) {
  if (flat >= g.order()) {
    fail(ErrorKind::kDomain, "flat index " + std::to_string(flat) +
                                 " outside group of order " + std::to_string(g.order()));
  }
  return Element{g.coords(flat), flat};
}

void check_member(const GroupSpec& g, const Element& x) {
  if (x.coords.size() != g.factor_count()) {
    fail(ErrorKind::kDomain, "element/group mismatch: coordinate count");
  }
  Index flat = 0;
  for (std::size_t i = 0; i < x.coords.size(); ++i) {
    if (x.coords[i] >= g.orders()[i]) {
      fail(ErrorKind::kDomain, "element/group mismatch: coordinate out of range");
    }
    flat = flat * g.orders()[i] + x.coords[i];
  }
  if (flat != x.flat) fail(ErrorKind::kDomain, "element/group mismatch: flat index");
}

Element add(const GroupSpec& g, const Element& a, const Element& b) {
  check_member(g, a);
  check_member(g, b);
  return element_at(g, g.add(a.flat, b.flat));
}

Element neg(const GroupSpec& g, const Element& a) {
  check_member(g, a);
  return element_at(g, g.neg(a.flat));
}

Element scalar_mul(const GroupSpec& g, const Element& a, std::int64_t k) {
  check_member(g, a);
  return element_at(g, g.scale(a.flat, k));
}

Complex character_pair(const GroupSpec& g, const Element& xi, const Element& x) {
  check_member(g, xi);
  check_member(g, x);
  return g.character(xi.flat, x.flat);
}

}  // namespace gowlab
