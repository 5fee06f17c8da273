#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gowlab/multifunction.hpp"
#include "gowlab/norms.hpp"

namespace gowlab {

/// A row with entries in {-1, 0, 1}.
using IntRow = std::vector<int>;

/// m equations sum_j rows[i][j] x_j = 0 in l unknowns. The first row doubles
/// as the equation imposed on the images phi_j(x_j).
struct LinSystem {
  std::size_t l = 0;
  std::vector<IntRow> rows;
  std::string provenance;

  std::size_t m() const noexcept { return rows.size(); }

  /// Throws Error(kInvalidSpec) on ragged rows or entries outside {-1,0,1}.
  static LinSystem make(std::size_t l, std::vector<IntRow> rows, std::string provenance = {});
};

/// Exact rank over the rationals (fraction-free elimination).
std::size_t rational_rank(std::span<const IntRow> rows);
inline std::size_t rational_rank(const LinSystem& sys) { return rational_rank(sys.rows); }

/// Determinant of a square integer matrix (Bareiss).
std::int64_t determinant(std::vector<std::vector<std::int64_t>> a);

/// Exact membership of v in the rational row space of sys.
bool in_row_space(const LinSystem& sys, std::span<const int> v);

/// Alternating sums over the sub-faces of {0,1}^d with at most d-2 fixed
/// zero coordinates; l = 2^d, m = 2^d - d - 1. Variable index omega has
/// omega_1 as its most significant bit. Requires 2 <= d <= 4.
LinSystem cube_system(int d);

/// Integer solution map for a column set whose minor has determinant +-1:
/// x[bound[i]] = sum_j coef[i][j] x[free[j]].
struct PivotSolver {
  std::vector<std::size_t> bound;
  std::vector<std::size_t> free;
  std::vector<std::vector<std::int64_t>> coef;

  /// Fills every coordinate of x from the values at x[free].
  void complete(const GroupSpec& g, std::span<Index> x) const;
};

/// Every m-subset of columns (lexicographic order) with minor +-1.
std::vector<std::vector<std::size_t>> unimodular_pivots(const LinSystem& sys);

/// Throws Error(kPivot) if the minor on `bound` is not +-1.
PivotSolver make_solver(const LinSystem& sys, std::span<const std::size_t> bound);

/// Solver on the lexicographically first unimodular column set.
PivotSolver first_solver(const LinSystem& sys);

/// {0,+-1}^l vectors in the row space, zero first, then in base-3 order.
struct EquationFamily {
  std::size_t l = 0;
  std::vector<IntRow> vectors;
  std::vector<std::uint64_t> theta;     ///< 2^{#zero entries}
  std::vector<std::uint64_t> codes;     ///< sorted base-3 codes, parallel to vectors

  bool contains(std::span<const int> v) const;
  std::optional<std::size_t> index_of(std::span<const int> v) const;
};

std::uint64_t ternary_code(std::span<const int> v);

/// Full-rank m-subsets of E \ {0}, stored as sorted index lists into E.
struct SystemFamily {
  bool enumerated = false;
  std::vector<std::vector<std::size_t>> systems;
  std::uint64_t set_count = 0;
  double ordered_count = 0.0;  ///< m! * set_count, sign variants and orderings distinct
};

struct FamilyStats {
  std::size_t m = 0;
  std::size_t family_size = 0;  ///< |E|
  double theta_sum = 0.0;       ///< sum_e theta(e)
  double theta = 0.0;           ///< (sum_e theta(e))^{m-1}, ordered with repetition
  double theta1 = 0.0;          ///< theta - 2^{l(m-1)}
  double theta_distinct = 0.0;  ///< elementary symmetric e_{m-1} of the theta(e)
};

/// Everything the counting machinery needs about a base system.
struct Families {
  LinSystem base;
  EquationFamily E;
  SystemFamily S;
  FamilyStats stats;
  /// Per index into E: number of ordered systems whose first row is that
  /// vector, (m-1)! * #{sets containing it}. Zero for the zero vector.
  std::vector<double> first_row_weight;
  PivotSolver solver;
};

/// Throws Error(kContract) if the rank is below m, Error(kPivot) if no
/// unimodular minor exists. Systems are enumerated only while
/// C(|E|-1, m) <= set_limit.
Families derive_families(const LinSystem& sys, double set_limit = 4.0e6);

/// Membership bitmap of a subset of G.
class Subset {
 public:
  static Subset empty(Index n);
  static Subset full(Index n);
  /// {lo, ..., hi-1}.
  static Subset range(Index n, Index lo, Index hi);
  static Subset from_list(Index n, std::span<const Index> xs);

  Index universe() const noexcept { return n_; }
  bool contains(Index x) const noexcept { return (bits_[x >> 6] >> (x & 63)) & 1; }
  void insert(Index x) noexcept { bits_[x >> 6] |= std::uint64_t{1} << (x & 63); }
  void erase(Index x) noexcept { bits_[x >> 6] &= ~(std::uint64_t{1} << (x & 63)); }
  std::size_t count() const noexcept;
  std::vector<Index> elements() const;

  friend bool operator==(const Subset&, const Subset&) = default;

 private:
  Index n_ = 0;
  std::vector<std::uint64_t> bits_;
};

using Windows = std::vector<Subset>;

Windows full_windows(const GroupSpec& g, std::size_t l);
bool in_product(const Windows& w, std::span<const Index> x);

/// One difference clause Outer \ Inner of two products.
struct Clause {
  Windows outer;
  Windows inner;
};

/// Intersection of difference clauses; no clauses means all of G^l.
class ConstraintSet {
 public:
  ConstraintSet() = default;
  explicit ConstraintSet(std::vector<Clause> clauses) : clauses_(std::move(clauses)) {}

  std::size_t level() const noexcept { return clauses_.size(); }
  const std::vector<Clause>& clauses() const noexcept { return clauses_; }
  bool contains(std::span<const Index> x) const;
  /// ((outer product) \ (inner product)) intersected with this set.
  ConstraintSet refine(Windows outer, Windows inner) const;

 private:
  std::vector<Clause> clauses_;
};

enum class TupleClass { kNotAdditive, kDegenerate, kGood, kBad };

const char* to_string(TupleClass c);

/// phi_j for each coordinate.
using MapList = std::vector<ArithMap>;
MapList uniform_maps(const ArithMap& a, std::size_t l);

/// Class of a single tuple. Additive means a solution of the base system.
/// Degeneracy is decided by a full scan of {0,+-1}^l.
TupleClass classify_tuple(const GroupSpec& g, std::span<const Index> x, const MapList& phi,
                          const Families& fam);

/// sum_j v_j x_j in G.
Index dot(const GroupSpec& g, std::span<const int> v, std::span<const Index> x);

struct ClassCounts {
  std::uint64_t additive = 0;
  std::uint64_t degenerate = 0;
  std::uint64_t good = 0;
  std::uint64_t bad = 0;

  friend bool operator==(const ClassCounts&, const ClassCounts&) = default;
  ClassCounts& operator+=(const ClassCounts& o);
};

struct EnumerationResult {
  ClassCounts counts;
  std::uint64_t visited = 0;  ///< free-variable assignments, N^{l-m}
};

using TupleVisitor = std::function<void(std::span<const Index> x, TupleClass c)>;

/// Solutions of the base system inside (prod B_j) intersected with C, with
/// per-class counts. A visitor, if given, is called serially in
/// free-variable order. Throws CostError when N^{l-m} > budget.
EnumerationResult enumerate_solutions(const Families& fam, const MapList& phi,
                                      const Windows& windows, const ConstraintSet& c,
                                      const TupleVisitor& visit = {},
                                      double budget = kDefaultTermBudget);

/// f(x_1..x_l, phi_1(x_1)..phi_l(x_l)).
using TupleKernel = std::function<Complex(std::span<const Index> x, std::span<const Index> phi)>;

struct EquationSigma {
  std::size_t e = 0;   ///< index into E
  double weight = 0.0; ///< ordered systems with this first row
  Complex sigma;
  std::uint64_t tau = 0;
};

struct SigmaTau {
  std::vector<EquationSigma> per_row;  ///< one entry per nonzero e in E
  double sigma_total = 0.0;            ///< sum over systems of |sigma_{f,v}|
  Complex sigma_signed;                ///< sum over systems of sigma_{f,v}
  double tau_total = 0.0;
};

/// sigma_{f,v} and tau_{f,v} for every ordered system v, grouped by first
/// row: tuples of (prod B_j) intersected with C solving the base system,
/// e.x = 0 and e.phi(x) = 0. Requires fam.S.enumerated.
SigmaTau sigma_tau(const TupleKernel& f, const MapList& phi, const Families& fam,
                   const Windows& windows, const ConstraintSet& c,
                   double budget = kDefaultTermBudget);

/// f with x_rho, phi_rho(x_rho) and x_j (j in js) eliminated through v; a
/// function of the remaining l - m coordinates in increasing order. Throws
/// Error(kPivot) naming valid (rho, js) choices if v[0][rho] = 0 or the
/// minor on {rho} + js is not +-1.
MultiFunction substitute_reduce(const TupleKernel& f, const LinSystem& v, const MapList& phi,
                                const GroupSpec& g, std::size_t rho,
                                std::span<const std::size_t> js);

/// z = (x, x + D, x', x' + D) kernel for the t = 1 skew sum on cube_system(2):
/// N e(z_0 (phi_0 - phi_1) - z_2 (phi_2 - phi_3)).
TupleKernel skew_sigma1_kernel(const GroupSpec& g);

/// sum_{x,x',D} e((x - x')(a(x) - a(x+D))) N [a(x) - a(x') - a(x+D) + a(x'+D) = 0].
Complex sigma1_closed_form(const ArithMap& a);

/// The constrained sum for general t: over x, x', D, y_2..y_t, y'_2..y'_t of
/// e(sum_w (-1)^{|w|} x_{w_1} a(z_w)) N [sum_w (-1)^{|w|} a(z_w) = 0] with
/// z_w = x_{w_1} + w_2 D + y_{(w_3..)}. Throws CostError above the budget.
Complex skew_sigma_sum(const ArithMap& a, int t, double budget = kDefaultTermBudget);

/// {l, m, rows, provenance}.
std::string system_to_json(const LinSystem& sys);
LinSystem system_from_json(std::string_view text);

struct ClassReportRow {
  std::string system_id;
  ClassCounts counts;
  Complex sigma;
  double tau = 0.0;
};

void write_class_report(std::ostream& out, std::span<const ClassReportRow> rows);

}  // namespace gowlab
