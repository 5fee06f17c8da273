#include "gowlab/linsys.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <sstream>

#include "gowlab/error.hpp"
#include "gowlab/reduce.hpp"
#include "json.hpp"

namespace gowlab {

namespace {

using Matrix = std::vector<std::vector<std::int64_t>>;

double ipow(double base, std::size_t exp) {
  double r = 1.0;
  for (std::size_t i = 0; i < exp; ++i) r *= base;
  return r;
}

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  double r = 1.0;
  for (std::size_t i = 0; i < k; ++i) r = r * double(n - i) / double(i + 1);
  return std::round(r);
}

// Calls fn(idx) for every k-subset of [0, n) in lexicographic order;
// stops early when fn returns false.
template <typename Fn>
void for_each_combination(std::size_t n, std::size_t k, Fn&& fn) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    if (!fn(std::span<const std::size_t>(idx))) return;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

void strip_content(std::vector<std::int64_t>& row) {
  std::int64_t g = 0;
  for (auto v : row) g = std::gcd(g, v);
  if (g > 1) {
    for (auto& v : row) v /= g;
  }
}

// Gauss-Jordan without fractions: each pivot row keeps its own pivot value,
// rows are divided by their content after every update. Returns pivot columns.
std::vector<std::size_t> reduce_rows(Matrix& a) {
  std::vector<std::size_t> pivots;
  const std::size_t cols = a.empty() ? 0 : a[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
    std::size_t p = r;
    while (p < a.size() && a[p][c] == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[r], a[p]);
    if (a[r][c] < 0) {
      for (auto& v : a[r]) v = -v;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == r || a[i][c] == 0) continue;
      const std::int64_t f = a[i][c], piv = a[r][c];
      for (std::size_t j = 0; j < cols; ++j) a[i][j] = piv * a[i][j] - f * a[r][j];
      strip_content(a[i]);
    }
    strip_content(a[r]);
    pivots.push_back(c);
    ++r;
  }
  a.resize(r);
  return pivots;
}

Matrix to_matrix(std::span<const IntRow> rows) {
  Matrix a;
  for (const auto& row : rows) a.emplace_back(row.begin(), row.end());
  return a;
}

Matrix minor_matrix(const LinSystem& sys, std::span<const std::size_t> cols) {
  Matrix a(sys.m(), std::vector<std::int64_t>(cols.size()));
  for (std::size_t i = 0; i < sys.m(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) a[i][j] = sys.rows[i][cols[j]];
  return a;
}

int ternary_digit(int v) { return v == 0 ? 0 : (v == 1 ? 1 : 2); }

std::string pivot_list(std::span<const std::size_t> cols) {
  std::string s = "{";
  for (std::size_t i = 0; i < cols.size(); ++i) s += (i ? "," : "") + std::to_string(cols[i]);
  return s + "}";
}

// Scans every nonzero eta in {0,+-1}^l with eta . x = 0 and reports whether
// one lies outside E.
bool has_foreign_relation(const GroupSpec& g, std::span<const Index> x,
                          const EquationFamily& E) {
  const std::size_t l = x.size();
  IntRow eta(l, 0);
  bool found = false;
  auto rec = [&](auto&& self, std::size_t j, Index partial, bool nonzero) -> void {
    if (found) return;
    if (j == l) {
      if (nonzero && partial == 0 && !E.contains(eta)) found = true;
      return;
    }
    eta[j] = 0;
    self(self, j + 1, partial, nonzero);
    eta[j] = 1;
    self(self, j + 1, g.add(partial, x[j]), true);
    eta[j] = -1;
    self(self, j + 1, g.sub(partial, x[j]), true);
    eta[j] = 0;
  };
  rec(rec, 0, g.zero(), false);
  return found;
}

bool is_good(const GroupSpec& g, std::span<const Index> x, std::span<const Index> phix,
             const EquationFamily& E) {
  for (std::size_t e = 1; e < E.vectors.size(); ++e) {
    if (dot(g, E.vectors[e], x) == 0 && dot(g, E.vectors[e], phix) == 0) return true;
  }
  return false;
}

void apply_maps(const MapList& phi, std::span<const Index> x, std::span<Index> out) {
  for (std::size_t j = 0; j < x.size(); ++j) out[j] = phi[j](x[j]);
}

void check_inputs(const Families& fam, const MapList& phi, const Windows& windows) {
  const std::size_t l = fam.base.l;
  if (phi.size() != l) fail(ErrorKind::kDomain, "need one map per variable");
  if (windows.size() != l) fail(ErrorKind::kDomain, "need one window per variable");
  for (std::size_t j = 1; j < l; ++j) {
    if (!(phi[j].group == phi[0].group)) fail(ErrorKind::kDomain, "maps on different groups");
  }
  for (const auto& w : windows) {
    if (w.universe() != phi[0].group.order()) fail(ErrorKind::kDomain, "window size mismatch");
  }
}

// Runs body(shard, x) over all free assignments, sharded by the value of the
// first free variable. x is completed before the call.
template <typename Body>
void for_each_solution_shard(const GroupSpec& g, const PivotSolver& solver, std::size_t l,
                             Index shard, Body&& body) {
  const Index n = g.order();
  const std::size_t f = solver.free.size();
  std::vector<Index> x(l, 0);
  std::vector<Index> digits(f, 0);
  digits[0] = shard;
  while (true) {
    for (std::size_t k = 0; k < f; ++k) x[solver.free[k]] = digits[k];
    solver.complete(g, x);
    body(std::span<const Index>(x));
    std::size_t k = f;
    while (k > 1) {
      --k;
      if (++digits[k] < n) break;
      digits[k] = 0;
      if (k == 1) return;
    }
    if (f == 1) return;
  }
}

}  // namespace

LinSystem LinSystem::make(std::size_t l, std::vector<IntRow> rows, std::string provenance) {
  if (l == 0) fail(ErrorKind::kInvalidSpec, "system needs at least one variable");
  for (const auto& row : rows) {
    if (row.size() != l) fail(ErrorKind::kInvalidSpec, "row length differs from l");
    for (int v : row) {
      if (v < -1 || v > 1) fail(ErrorKind::kInvalidSpec, "coefficients must be in {-1,0,1}");
    }
  }
  return LinSystem{l, std::move(rows), std::move(provenance)};
}

std::size_t rational_rank(std::span<const IntRow> rows) {
  auto a = to_matrix(rows);
  return reduce_rows(a).size();
}

std::int64_t determinant(Matrix a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  std::int64_t sign = 1, prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a[p][k] == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      std::swap(a[p], a[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        const __int128 v = __int128(a[i][j]) * a[k][k] - __int128(a[i][k]) * a[k][j];
        a[i][j] = static_cast<std::int64_t>(v / prev);
      }
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

bool in_row_space(const LinSystem& sys, std::span<const int> v) {
  if (v.size() != sys.l) fail(ErrorKind::kDomain, "vector length differs from l");
  std::vector<IntRow> rows = sys.rows;
  rows.emplace_back(v.begin(), v.end());
  return rational_rank(rows) == rational_rank(sys.rows);
}

LinSystem cube_system(int d) {
  if (d < 2 || d > 4) fail(ErrorKind::kDomain, "cube_system needs 2 <= d <= 4");
  const std::size_t l = std::size_t{1} << d;
  std::vector<IntRow> rows;
  for (int size = 0; size <= d - 2; ++size) {
    for_each_combination(d, size, [&](std::span<const std::size_t> fixed) {
      IntRow row(l, 0);
      for (std::size_t w = 0; w < l; ++w) {
        bool zero_on_fixed = true;
        for (auto i : fixed) {
          if ((w >> (d - 1 - i)) & 1) zero_on_fixed = false;
        }
        if (zero_on_fixed) row[w] = (std::popcount(w) % 2) ? -1 : 1;
      }
      rows.push_back(std::move(row));
      return true;
    });
  }
  return LinSystem::make(l, std::move(rows), "cube:" + std::to_string(d));
}

void PivotSolver::complete(const GroupSpec& g, std::span<Index> x) const {
  for (std::size_t i = 0; i < bound.size(); ++i) {
    Index acc = g.zero();
    for (std::size_t j = 0; j < free.size(); ++j) {
      if (coef[i][j] != 0) acc = g.add(acc, g.scale(x[free[j]], coef[i][j]));
    }
    x[bound[i]] = acc;
  }
}

std::vector<std::vector<std::size_t>> unimodular_pivots(const LinSystem& sys) {
  std::vector<std::vector<std::size_t>> out;
  for_each_combination(sys.l, sys.m(), [&](std::span<const std::size_t> cols) {
    if (std::abs(determinant(minor_matrix(sys, cols))) == 1) out.emplace_back(cols.begin(), cols.end());
    return true;
  });
  return out;
}

PivotSolver make_solver(const LinSystem& sys, std::span<const std::size_t> bound) {
  const std::size_t m = sys.m();
  if (bound.size() != m) fail(ErrorKind::kPivot, "pivot set must have m columns");
  std::vector<std::size_t> cols(bound.begin(), bound.end());
  std::sort(cols.begin(), cols.end());
  if (std::adjacent_find(cols.begin(), cols.end()) != cols.end() || (m && cols.back() >= sys.l)) {
    fail(ErrorKind::kPivot, "pivot columns must be distinct and < l");
  }
  const auto b = minor_matrix(sys, cols);
  const std::int64_t det = determinant(b);
  if (std::abs(det) != 1) {
    fail(ErrorKind::kPivot, "minor on " + pivot_list(cols) + " has determinant " +
                                std::to_string(det) + ", need +-1");
  }
  PivotSolver s;
  s.bound = cols;
  for (std::size_t j = 0; j < sys.l; ++j) {
    if (!std::binary_search(cols.begin(), cols.end(), j)) s.free.push_back(j);
  }
  // B^{-1} = det * adj(B) for det = +-1.
  Matrix inv(m, std::vector<std::int64_t>(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      Matrix sub;
      for (std::size_t r = 0; r < m; ++r) {
        if (r == j) continue;
        std::vector<std::int64_t> row;
        for (std::size_t c = 0; c < m; ++c) {
          if (c != i) row.push_back(b[r][c]);
        }
        sub.push_back(std::move(row));
      }
      const std::int64_t cof = ((i + j) % 2 ? -1 : 1) * determinant(std::move(sub));
      inv[i][j] = det * cof;
    }
  }
  s.coef.assign(m, std::vector<std::int64_t>(s.free.size(), 0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < s.free.size(); ++j) {
      std::int64_t acc = 0;
      for (std::size_t k = 0; k < m; ++k) acc += inv[i][k] * sys.rows[k][s.free[j]];
      s.coef[i][j] = -acc;
    }
  }
  return s;
}

PivotSolver first_solver(const LinSystem& sys) {
  std::optional<std::vector<std::size_t>> first;
  for_each_combination(sys.l, sys.m(), [&](std::span<const std::size_t> cols) {
    if (std::abs(determinant(minor_matrix(sys, cols))) == 1) {
      first.emplace(cols.begin(), cols.end());
      return false;
    }
    return true;
  });
  if (!first) fail(ErrorKind::kPivot, "no m-column minor with determinant +-1");
  return make_solver(sys, *first);
}

std::uint64_t ternary_code(std::span<const int> v) {
  std::uint64_t code = 0;
  for (int x : v) code = code * 3 + ternary_digit(x);
  return code;
}

bool EquationFamily::contains(std::span<const int> v) const {
  return index_of(v).has_value();
}

std::optional<std::size_t> EquationFamily::index_of(std::span<const int> v) const {
  if (v.size() != l) return std::nullopt;
  const auto code = ternary_code(v);
  const auto it = std::lower_bound(codes.begin(), codes.end(), code);
  if (it == codes.end() || *it != code) return std::nullopt;
  return static_cast<std::size_t>(it - codes.begin());
}

Families derive_families(const LinSystem& sys, double set_limit) {
  const std::size_t l = sys.l, m = sys.m();
  if (m >= l) fail(ErrorKind::kContract, "need m < l");
  if (rational_rank(sys) != m) fail(ErrorKind::kContract, "base system is rank deficient");

  Families fam;
  fam.base = sys;
  fam.solver = first_solver(sys);

  // A row space vector is fixed by its entries on the pivot columns.
  auto red = to_matrix(sys.rows);
  const auto pivots = reduce_rows(red);
  std::int64_t lcm = 1;
  for (std::size_t i = 0; i < m; ++i) lcm = std::lcm(lcm, red[i][pivots[i]]);
  std::vector<IntRow> found;
  std::vector<int> c(m, -1);
  const std::uint64_t combos = static_cast<std::uint64_t>(ipow(3.0, m));
  std::vector<std::int64_t> acc(l);
  for (std::uint64_t k = 0; k < combos; ++k) {
    std::uint64_t t = k;
    for (std::size_t i = 0; i < m; ++i, t /= 3) c[i] = int(t % 3) - 1;
    std::fill(acc.begin(), acc.end(), 0);
    for (std::size_t i = 0; i < m; ++i) {
      if (c[i] == 0) continue;
      const std::int64_t scale = c[i] * (lcm / red[i][pivots[i]]);
      for (std::size_t j = 0; j < l; ++j) acc[j] += scale * red[i][j];
    }
    IntRow v(l);
    bool ok = true;
    for (std::size_t j = 0; j < l && ok; ++j) {
      if (acc[j] % lcm != 0) {
        ok = false;
        break;
      }
      const std::int64_t q = acc[j] / lcm;
      if (q < -1 || q > 1) ok = false;
      v[j] = int(q);
    }
    if (ok) found.push_back(std::move(v));
  }
  std::sort(found.begin(), found.end(),
            [](const IntRow& a, const IntRow& b) { return ternary_code(a) < ternary_code(b); });
  auto& E = fam.E;
  E.l = l;
  E.vectors = std::move(found);
  for (const auto& v : E.vectors) {
    E.codes.push_back(ternary_code(v));
    E.theta.push_back(std::uint64_t{1} << std::count(v.begin(), v.end(), 0));
  }

  auto& st = fam.stats;
  st.m = m;
  st.family_size = E.vectors.size();
  for (auto th : E.theta) st.theta_sum += double(th);
  st.theta = ipow(st.theta_sum, m - 1);
  st.theta1 = st.theta - std::ldexp(1.0, int(l * (m - 1)));
  // e_{m-1} of the weights by the usual recurrence.
  std::vector<double> esym(m, 0.0);
  esym[0] = 1.0;
  for (auto th : E.theta) {
    for (std::size_t k = m - 1; k > 0; --k) esym[k] += esym[k - 1] * double(th);
  }
  st.theta_distinct = esym[m - 1];

  const std::size_t nonzero = E.vectors.size() - 1;
  fam.first_row_weight.assign(E.vectors.size(), 0.0);
  if (binomial(nonzero, m) <= set_limit) {
    auto& S = fam.S;
    S.enumerated = true;
    std::vector<std::uint64_t> containing(E.vectors.size(), 0);
    std::vector<IntRow> pick(m);
    for_each_combination(nonzero, m, [&](std::span<const std::size_t> idx) {
      for (std::size_t i = 0; i < m; ++i) pick[i] = E.vectors[idx[i] + 1];
      if (rational_rank(pick) == m) {
        std::vector<std::size_t> sys_idx(m);
        for (std::size_t i = 0; i < m; ++i) {
          sys_idx[i] = idx[i] + 1;
          ++containing[idx[i] + 1];
        }
        S.systems.push_back(std::move(sys_idx));
      }
      return true;
    });
    S.set_count = S.systems.size();
    double fact = 1.0;
    for (std::size_t i = 2; i < m; ++i) fact *= double(i);
    S.ordered_count = fact * double(m) * double(S.set_count);
    for (std::size_t e = 1; e < E.vectors.size(); ++e) fam.first_row_weight[e] = fact * double(containing[e]);
  }
  return fam;
}

Subset Subset::empty(Index n) {
  Subset s;
  s.n_ = n;
  s.bits_.assign((std::size_t{n} + 63) / 64, 0);
  return s;
}

Subset Subset::full(Index n) { return range(n, 0, n); }

Subset Subset::range(Index n, Index lo, Index hi) {
  if (lo > hi || hi > n) fail(ErrorKind::kDomain, "range outside the group");
  Subset s = empty(n);
  for (Index x = lo; x < hi; ++x) s.insert(x);
  return s;
}

Subset Subset::from_list(Index n, std::span<const Index> xs) {
  Subset s = empty(n);
  for (auto x : xs) {
    if (x >= n) fail(ErrorKind::kDomain, "element outside the group");
    s.insert(x);
  }
  return s;
}

std::size_t Subset::count() const noexcept {
  std::size_t c = 0;
  for (auto w : bits_) c += std::popcount(w);
  return c;
}

std::vector<Index> Subset::elements() const {
  std::vector<Index> out;
  for (Index x = 0; x < n_; ++x) {
    if (contains(x)) out.push_back(x);
  }
  return out;
}

Windows full_windows(const GroupSpec& g, std::size_t l) {
  return Windows(l, Subset::full(g.order()));
}

bool in_product(const Windows& w, std::span<const Index> x) {
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!w[j].contains(x[j])) return false;
  }
  return true;
}

bool ConstraintSet::contains(std::span<const Index> x) const {
  for (const auto& c : clauses_) {
    if (!in_product(c.outer, x) || in_product(c.inner, x)) return false;
  }
  return true;
}

ConstraintSet ConstraintSet::refine(Windows outer, Windows inner) const {
  auto clauses = clauses_;
  clauses.push_back(Clause{std::move(outer), std::move(inner)});
  return ConstraintSet(std::move(clauses));
}

const char* to_string(TupleClass c) {
  switch (c) {
    case TupleClass::kNotAdditive: return "not-additive";
    case TupleClass::kDegenerate: return "degenerate";
    case TupleClass::kGood: return "good";
    case TupleClass::kBad: return "bad";
  }
  return "?";
}

MapList uniform_maps(const ArithMap& a, std::size_t l) { return MapList(l, a); }

Index dot(const GroupSpec& g, std::span<const int> v, std::span<const Index> x) {
  Index acc = g.zero();
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (v[j] == 1) {
      acc = g.add(acc, x[j]);
    } else if (v[j] == -1) {
      acc = g.sub(acc, x[j]);
    }
  }
  return acc;
}

TupleClass classify_tuple(const GroupSpec& g, std::span<const Index> x, const MapList& phi,
                          const Families& fam) {
  if (x.size() != fam.base.l || phi.size() != fam.base.l) {
    fail(ErrorKind::kDomain, "tuple length differs from l");
  }
  for (const auto& row : fam.base.rows) {
    if (dot(g, row, x) != 0) return TupleClass::kNotAdditive;
  }
  if (has_foreign_relation(g, x, fam.E)) return TupleClass::kDegenerate;
  std::vector<Index> phix(x.size());
  apply_maps(phi, x, phix);
  return is_good(g, x, phix, fam.E) ? TupleClass::kGood : TupleClass::kBad;
}

ClassCounts& ClassCounts::operator+=(const ClassCounts& o) {
  additive += o.additive;
  degenerate += o.degenerate;
  good += o.good;
  bad += o.bad;
  return *this;
}

EnumerationResult enumerate_solutions(const Families& fam, const MapList& phi,
                                      const Windows& windows, const ConstraintSet& c,
                                      const TupleVisitor& visit, double budget) {
  check_inputs(fam, phi, windows);
  const GroupSpec& g = phi[0].group;
  const std::size_t l = fam.base.l;
  const std::size_t f = fam.solver.free.size();
  const double terms = ipow(g.order(), f);
  charge(terms, budget, "solution enumeration");

  auto run_shard = [&](Index shard, const TupleVisitor* v) {
    ClassCounts counts;
    std::vector<Index> phix(l);
    for_each_solution_shard(g, fam.solver, l, shard, [&](std::span<const Index> x) {
      if (!in_product(windows, x) || !c.contains(x)) return;
      ++counts.additive;
      TupleClass cls;
      if (has_foreign_relation(g, x, fam.E)) {
        ++counts.degenerate;
        cls = TupleClass::kDegenerate;
      } else {
        apply_maps(phi, x, phix);
        if (is_good(g, x, phix, fam.E)) {
          ++counts.good;
          cls = TupleClass::kGood;
        } else {
          ++counts.bad;
          cls = TupleClass::kBad;
        }
      }
      if (v) (*v)(x, cls);
    });
    return counts;
  };

  EnumerationResult res;
  res.visited = static_cast<std::uint64_t>(terms);
  const Index n = g.order();
  if (visit) {
    for (Index s = 0; s < n; ++s) res.counts += run_shard(s, &visit);
    return res;
  }
  std::vector<ClassCounts> parts(n);
  parallel_for(n, [&](std::size_t s) { parts[s] = run_shard(static_cast<Index>(s), nullptr); });
  for (const auto& p : parts) res.counts += p;
  return res;
}

SigmaTau sigma_tau(const TupleKernel& f, const MapList& phi, const Families& fam,
                   const Windows& windows, const ConstraintSet& c, double budget) {
  check_inputs(fam, phi, windows);
  if (!fam.S.enumerated) {
    fail(ErrorKind::kCost, "system family too large to enumerate; weights unavailable");
  }
  const GroupSpec& g = phi[0].group;
  const std::size_t l = fam.base.l;
  const std::size_t rows = fam.E.vectors.size();
  charge(ipow(g.order(), fam.solver.free.size()), budget, "sigma/tau enumeration");

  struct Shard {
    std::vector<PairwiseSum<Complex>> sigma;
    std::vector<std::uint64_t> tau;
  };
  const Index n = g.order();
  std::vector<Shard> parts(n);
  parallel_for(n, [&](std::size_t s) {
    Shard& sh = parts[s];
    sh.sigma.resize(rows);
    sh.tau.assign(rows, 0);
    std::vector<Index> phix(l);
    for_each_solution_shard(g, fam.solver, l, static_cast<Index>(s), [&](std::span<const Index> x) {
      if (!in_product(windows, x) || !c.contains(x)) return;
      apply_maps(phi, x, phix);
      std::optional<Complex> value;
      for (std::size_t e = 1; e < rows; ++e) {
        const auto& v = fam.E.vectors[e];
        if (dot(g, v, x) != 0 || dot(g, v, phix) != 0) continue;
        if (!value) value = f(x, phix);
        sh.sigma[e].add(*value);
        ++sh.tau[e];
      }
    });
  });

  SigmaTau out;
  PairwiseSum<double> abs_total, tau_total;
  PairwiseSum<Complex> signed_total;
  for (std::size_t e = 1; e < rows; ++e) {
    PairwiseSum<Complex> sig;
    std::uint64_t tau = 0;
    for (const auto& sh : parts) {
      sig.add(sh.sigma[e].total());
      tau += sh.tau[e];
    }
    EquationSigma row{e, fam.first_row_weight[e], sig.total(), tau};
    abs_total.add(row.weight * std::abs(row.sigma));
    signed_total.add(row.weight * row.sigma);
    tau_total.add(row.weight * double(row.tau));
    out.per_row.push_back(row);
  }
  out.sigma_total = abs_total.total();
  out.sigma_signed = signed_total.total();
  out.tau_total = tau_total.total();
  return out;
}

MultiFunction substitute_reduce(const TupleKernel& f, const LinSystem& v, const MapList& phi,
                                const GroupSpec& g, std::size_t rho,
                                std::span<const std::size_t> js) {
  const std::size_t l = v.l, m = v.m();
  if (phi.size() != l) fail(ErrorKind::kDomain, "need one map per variable");
  auto valid_choices = [&]() {
    std::string s;
    int listed = 0;
    for (std::size_t r = 0; r < l && listed < 8; ++r) {
      if (v.rows[0][r] == 0) continue;
      std::vector<std::size_t> others;
      for (std::size_t j = 0; j < l; ++j) {
        if (j != r) others.push_back(j);
      }
      for_each_combination(others.size(), m - 1, [&](std::span<const std::size_t> idx) {
        std::vector<std::size_t> cols{r};
        for (auto i : idx) cols.push_back(others[i]);
        std::vector<std::size_t> sorted = cols;
        std::sort(sorted.begin(), sorted.end());
        if (std::abs(determinant(minor_matrix(v, sorted))) == 1) {
          std::vector<std::size_t> jj(cols.begin() + 1, cols.end());
          s += " rho=" + std::to_string(r) + " js=" + pivot_list(jj);
          ++listed;
        }
        return listed < 8;
      });
    }
    return s.empty() ? std::string(" none") : s;
  };
  auto pivot_error = [&](const std::string& why) {
    fail(ErrorKind::kPivot, why + "; valid choices:" + valid_choices());
  };
  if (rho >= l) pivot_error("rho out of range");
  if (js.size() + 1 != m) pivot_error("need m-1 extra pivot variables");
  if (v.rows[0][rho] == 0) pivot_error("phi_rho does not occur in the first row");
  std::vector<std::size_t> bound{rho};
  for (auto j : js) {
    if (j >= l || j == rho || std::find(bound.begin(), bound.end(), j) != bound.end()) {
      pivot_error("pivot variables must be distinct, < l and differ from rho");
    }
    bound.push_back(j);
  }
  std::sort(bound.begin(), bound.end());
  if (std::abs(determinant(minor_matrix(v, bound))) != 1) pivot_error("minor is not +-1");
  const PivotSolver solver = make_solver(v, bound);
  const int eps_rho = v.rows[0][rho];
  const IntRow first = v.rows[0];

  auto eval = [=](std::span<const Index> free_vals) {
    std::vector<Index> x(l, 0), phix(l, 0);
    for (std::size_t k = 0; k < solver.free.size(); ++k) x[solver.free[k]] = free_vals[k];
    solver.complete(g, x);
    Index rest = g.zero();
    for (std::size_t j = 0; j < l; ++j) {
      if (j == rho) continue;
      phix[j] = phi[j](x[j]);
      rest = g.add(rest, g.scale(phix[j], first[j]));
    }
    phix[rho] = g.scale(rest, -eps_rho);
    return f(x, phix);
  };
  return MultiFunction::tabulate(g, l - m, eval);
}

TupleKernel skew_sigma1_kernel(const GroupSpec& g) {
  const double n = g.order();
  return [g, n](std::span<const Index> z, std::span<const Index> p) {
    return n * g.character(z[0], g.sub(p[0], p[1])) *
           std::conj(g.character(z[2], g.sub(p[2], p[3])));
  };
}

Complex sigma1_closed_form(const ArithMap& a) {
  const GroupSpec& g = a.group;
  const Index n = g.order();
  std::vector<Complex> parts(n);
  parallel_for(n, [&](std::size_t xi) {
    const Index x = static_cast<Index>(xi);
    PairwiseSum<Complex> acc;
    for (Index xp = 0; xp < n; ++xp) {
      for (Index d = 0; d < n; ++d) {
        const Index ax = a(x), axd = a(g.add(x, d)), axp = a(xp), axpd = a(g.add(xp, d));
        if (g.add(g.sub(g.sub(ax, axp), axd), axpd) != 0) continue;
        acc.add(double(n) * g.character(g.sub(x, xp), g.sub(ax, axd)));
      }
    }
    parts[xi] = acc.total();
  });
  return pairwise_sum<Complex>(parts);
}

Complex skew_sigma_sum(const ArithMap& a, int t, double budget) {
  if (t < 1) fail(ErrorKind::kDomain, "t must be >= 1");
  const GroupSpec& g = a.group;
  const Index n = g.order();
  const std::size_t inner = 1 + 2 * std::size_t(t - 1);  // D, y_2.., y'_2..
  charge(ipow(n, 2 + inner), budget, "skew sigma sum");
  const std::size_t corners = std::size_t{1} << (t + 1);
  const std::size_t ys = std::size_t(t - 1);

  std::vector<Complex> parts(std::size_t{n} * n);
  parallel_for(parts.size(), [&](std::size_t job) {
    const Index xs[2] = {static_cast<Index>(job / n), static_cast<Index>(job % n)};
    std::vector<Index> v(inner, 0);
    PairwiseSum<Complex> acc;
    while (true) {
      Index constraint = g.zero();
      std::uint64_t phase = 0;  // numerator over g.exponent()
      const std::uint64_t L = g.exponent();
      for (std::size_t w = 0; w < corners; ++w) {
        // bit t is w_1, bit t-1 is the D bit, lower bits pick y or y'.
        const int w1 = (w >> t) & 1;
        Index z = xs[w1];
        if ((w >> (t - 1)) & 1) z = g.add(z, v[0]);
        for (std::size_t i = 0; i < ys; ++i) {
          const bool primed = (w >> (ys - 1 - i)) & 1;
          z = g.add(z, v[1 + i + (primed ? ys : 0)]);
        }
        const Index az = a(z);
        const bool odd = std::popcount(w) % 2;
        constraint = odd ? g.sub(constraint, az) : g.add(constraint, az);
        const std::uint64_t p = g.pairing(xs[w1], az);
        phase = (phase + (odd ? L - p : p)) % L;
      }
      if (constraint == 0) acc.add(double(n) * g.root(phase));
      std::size_t k = 0;
      while (k < inner && ++v[k] == n) v[k++] = 0;
      if (k == inner) break;
    }
    parts[job] = acc.total();
  });
  return pairwise_sum<Complex>(parts);
}

std::string system_to_json(const LinSystem& sys) {
  nlohmann::json j;
  j["l"] = sys.l;
  j["m"] = sys.m();
  j["rows"] = sys.rows;
  j["provenance"] = sys.provenance;
  return j.dump();
}

LinSystem system_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
    auto sys = LinSystem::make(j.at("l").get<std::size_t>(), j.at("rows").get<std::vector<IntRow>>(),
                               j.value("provenance", std::string{}));
    if (j.contains("m") && j.at("m").get<std::size_t>() != sys.m()) {
      fail(ErrorKind::kParse, "m does not match the row count");
    }
    return sys;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kParse, std::string("bad system fixture: ") + e.what());
  }
}

void write_class_report(std::ostream& out, std::span<const ClassReportRow> rows) {
  out << "system_id,additive,degenerate,good,bad,sigma_re,sigma_im,tau\n";
  out << std::setprecision(17);
  for (const auto& r : rows) {
    out << r.system_id << ',' << r.counts.additive << ',' << r.counts.degenerate << ','
        << r.counts.good << ',' << r.counts.bad << ',' << r.sigma.real() << ','
        << r.sigma.imag() << ',' << r.tau << '\n';
  }
}

}  // namespace gowlab
