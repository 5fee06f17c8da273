#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gowlab {

using Complex = std::complex<double>;

/// Flat index of a group element, in [0, N).
using Index = std::uint32_t;

/// A finite abelian group Z_{n_1} x ... x Z_{n_r}.
///
/// Elements are addressed by a mixed-radix flat index with the first factor
/// most significant. Characters are identified with elements: the character
/// attached to xi sends x to e(sum_i xi_i x_i / n_i).
class GroupSpec {
 public:
  /// Throws Error(kInvalidSpec) on an empty list or a zero order.
  static GroupSpec make(std::vector<std::uint32_t> orders);

  /// Parses "Z:5" or "Z:2xZ:3" (case-insensitive).
  static GroupSpec parse(std::string_view text);

  const std::vector<std::uint32_t>& orders() const noexcept { return orders_; }
  Index order() const noexcept { return order_; }
  std::size_t factor_count() const noexcept { return orders_.size(); }
  bool is_cyclic() const noexcept { return orders_.size() == 1; }

  /// Least common multiple of the factor orders. Character values are
  /// e(k / exponent()) for an integer k.
  std::uint64_t exponent() const noexcept { return exponent_; }

  Index zero() const noexcept { return 0; }
  Index add(Index a, Index b) const noexcept;
  Index sub(Index a, Index b) const noexcept;
  Index neg(Index a) const noexcept;
  Index scale(Index a, std::int64_t k) const noexcept;

  std::vector<std::uint32_t> coords(Index flat) const;
  /// Reduces each coordinate modulo its factor before encoding.
  Index flat(std::span<const std::int64_t> coords) const;

  /// Numerator k of the pairing xi . x = k / exponent(), reduced mod exponent().
  std::uint64_t pairing(Index xi, Index x) const noexcept;
  /// e(k / exponent()).
  Complex root(std::uint64_t k) const noexcept {
    return (*roots_)[k % exponent_];
  }
  Complex character(Index xi, Index x) const noexcept {
    return root(pairing(xi, x));
  }

  /// "Z:2xZ:3".
  std::string to_string() const;

  friend bool operator==(const GroupSpec& a, const GroupSpec& b) {
    return a.orders_ == b.orders_;
  }

 private:
  GroupSpec() = default;

  std::vector<std::uint32_t> orders_;
  std::vector<std::uint64_t> weights_;  // exponent / n_i
  Index order_ = 1;
  std::uint64_t exponent_ = 1;
  std::shared_ptr<const std::vector<Complex>> roots_;
};

/// An element carried with its coordinates, for API boundaries where
/// membership has to be validated.
struct Element {
  std::vector<std::uint32_t> coords;
  Index flat = 0;

  friend bool operator==(const Element&, const Element&) = default;
};

Element make_element(const GroupSpec& g, std::span<const std::int64_t> coords);
Element element_at(const GroupSpec& g, Index flat);

/// Throws Error(kDomain) if `x` is not a well-formed element of `g`.
void check_member(const GroupSpec& g, const Element& x);

Element add(const GroupSpec& g, const Element& a, const Element& b);
Element neg(const GroupSpec& g, const Element& a);
Element scalar_mul(const GroupSpec& g, const Element& a, std::int64_t k);
Complex character_pair(const GroupSpec& g, const Element& xi, const Element& x);

/// e(k / n) computed with exact octant reduction.
Complex unit_root(std::uint64_t k, std::uint64_t n);

}  // namespace gowlab
