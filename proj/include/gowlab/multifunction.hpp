#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "gowlab/group.hpp"

namespace gowlab {

/// Largest domain N^d stored as a dense table.
inline constexpr std::uint64_t kMaterializeLimit = std::uint64_t{1} << 24;

/// Number of points of G^arity, saturating at UINT64_MAX.
std::uint64_t domain_size(const GroupSpec& g, std::size_t arity);

/// A complex function on G^d, either a dense table (x_1 most significant in
/// the flat index) or a pure evaluator.
class MultiFunction {
 public:
  using Evaluator = std::function<Complex(std::span<const Index>)>;

  static MultiFunction from_table(GroupSpec g, std::size_t arity, std::vector<Complex> values);
  static MultiFunction lazy(GroupSpec g, std::size_t arity, Evaluator eval);
  /// Materializes when N^d <= kMaterializeLimit, otherwise stays lazy.
  static MultiFunction tabulate(GroupSpec g, std::size_t arity, const Evaluator& eval);

  const GroupSpec& group() const noexcept { return group_; }
  std::size_t arity() const noexcept { return arity_; }
  bool is_materialized() const noexcept { return eval_ == nullptr; }
  std::uint64_t size() const noexcept { return domain_size(group_, arity_); }

  Complex operator()(std::span<const Index> x) const;
  Complex at_flat(std::uint64_t flat) const;

  /// Dense values; throws Error(kDomain) for a lazy function.
  const std::vector<Complex>& table() const;
  /// Copy with a dense table; throws CostError above kMaterializeLimit.
  MultiFunction materialized() const;

  /// Decodes a flat index of G^d into coordinates.
  void decode(std::uint64_t flat, std::span<Index> x) const;
  std::uint64_t encode(std::span<const Index> x) const;

 private:
  MultiFunction(GroupSpec g, std::size_t arity) : group_(std::move(g)), arity_(arity) {}

  GroupSpec group_;
  std::size_t arity_;
  std::shared_ptr<const std::vector<Complex>> values_;  // shared, immutable
  Evaluator eval_;
};

/// Pointwise combinations of two functions on the same G^d.
MultiFunction operator+(const MultiFunction& f, const MultiFunction& g);
MultiFunction pointwise_product(const MultiFunction& f, const MultiFunction& g);

/// A total map a: G -> G.
struct ArithMap {
  GroupSpec group;
  std::vector<Index> table;

  Index operator()(Index x) const { return table[x]; }
  /// |a^{-1}(j)| for every j.
  std::vector<std::uint64_t> fiber_sizes() const;
  std::uint64_t max_fiber() const;
};

ArithMap make_map(const GroupSpec& g, std::vector<Index> table);

}  // namespace gowlab
