#include "gowlab/multifunction.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "gowlab/error.hpp"

namespace gowlab {

std::uint64_t domain_size(const GroupSpec& g, std::size_t arity) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < arity; ++i) {
    if (total > std::numeric_limits<std::uint64_t>::max() / g.order()) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    total *= g.order();
  }
  return total;
}

MultiFunction MultiFunction::from_table(GroupSpec g, std::size_t arity,
                                        std::vector<Complex> values) {
  if (arity == 0) fail(ErrorKind::kDomain, "function arity must be positive");
  MultiFunction f(std::move(g), arity);
  if (values.size() != f.size()) {
    fail(ErrorKind::kDomain, "table has " + std::to_string(values.size()) +
                                 " entries, expected " + std::to_string(f.size()));
  }
  f.values_ = std::make_shared<const std::vector<Complex>>(std::move(values));
  return f;
}

MultiFunction MultiFunction::lazy(GroupSpec g, std::size_t arity, Evaluator eval) {
  if (arity == 0) fail(ErrorKind::kDomain, "function arity must be positive");
  MultiFunction f(std::move(g), arity);
  f.eval_ = std::move(eval);
  return f;
}

MultiFunction MultiFunction::tabulate(GroupSpec g, std::size_t arity, const Evaluator& eval) {
  auto f = lazy(std::move(g), arity, eval);
  if (f.size() <= kMaterializeLimit) return f.materialized();
  return f;
}

void MultiFunction::decode(std::uint64_t flat, std::span<Index> x) const {
  const Index n = group_.order();
  for (std::size_t i = arity_; i-- > 0;) {
    x[i] = static_cast<Index>(flat % n);
    flat /= n;
  }
}

std::uint64_t MultiFunction::encode(std::span<const Index> x) const {
  std::uint64_t flat = 0;
  for (std::size_t i = 0; i < arity_; ++i) flat = flat * group_.order() + x[i];
  return flat;
}

Complex MultiFunction::operator()(std::span<const Index> x) const {
  if (eval_) return eval_(x);
  return (*values_)[encode(x)];
}

Complex MultiFunction::at_flat(std::uint64_t flat) const {
  if (!eval_) return (*values_)[flat];
  std::vector<Index> x(arity_);
  decode(flat, x);
  return eval_(x);
}

const std::vector<Complex>& MultiFunction::table() const {
  if (eval_) fail(ErrorKind::kDomain, "function is lazy; no dense table");
  return *values_;
}

MultiFunction MultiFunction::materialized() const {
  if (!eval_) return *this;
  const std::uint64_t n = size();
  if (n > kMaterializeLimit) {
    throw CostError("materialization needs " + std::to_string(n) + " entries (limit 2^24)",
                    static_cast<double>(n), static_cast<double>(kMaterializeLimit));
  }
  std::vector<Complex> values(n);
  std::vector<Index> x(arity_, 0);
  for (std::uint64_t flat = 0; flat < n; ++flat) {
    values[flat] = eval_(x);
    for (std::size_t i = arity_; i-- > 0;) {
      if (++x[i] < group_.order()) break;
      x[i] = 0;
    }
  }
  return from_table(group_, arity_, std::move(values));
}

namespace {

void check_compatible(const MultiFunction& f, const MultiFunction& g) {
  if (!(f.group() == g.group()) || f.arity() != g.arity()) {
    fail(ErrorKind::kDomain, "functions live on different domains");
  }
}

}  // namespace

MultiFunction operator+(const MultiFunction& f, const MultiFunction& g) {
  check_compatible(f, g);
  const auto& a = f.materialized().table();
  const auto& b = g.materialized().table();
  std::vector<Complex> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return MultiFunction::from_table(f.group(), f.arity(), std::move(out));
}

MultiFunction pointwise_product(const MultiFunction& f, const MultiFunction& g) {
  check_compatible(f, g);
  const auto fa = f.materialized();
  const auto ga = g.materialized();
  std::vector<Complex> out(fa.table().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = fa.table()[i] * ga.table()[i];
  return MultiFunction::from_table(f.group(), f.arity(), std::move(out));
}

std::vector<std::uint64_t> ArithMap::fiber_sizes() const {
  std::vector<std::uint64_t> sizes(group.order(), 0);
  for (const Index v : table) ++sizes[v];
  return sizes;
}

std::uint64_t ArithMap::max_fiber() const {
  const auto sizes = fiber_sizes();
  return *std::max_element(sizes.begin(), sizes.end());
}

ArithMap make_map(const GroupSpec& g, std::vector<Index> table) {
  if (table.size() != g.order()) {
    fail(ErrorKind::kDomain, "map table length does not match group order");
  }
  for (const Index v : table) {
    if (v >= g.order()) fail(ErrorKind::kDomain, "map value outside the group");
  }
  return ArithMap{g, std::move(table)};
}

}  // namespace gowlab
