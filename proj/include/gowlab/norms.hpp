#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gowlab/multifunction.hpp"

namespace gowlab {

/// Default ceiling on the number of summands a brute-force sum may visit.
inline constexpr double kDefaultTermBudget = 2147483648.0;  // 2^31

enum class NormMethod { kNaive, kRecursive, kFourier, kFiber, kSpectral, kGram };

const char* to_string(NormMethod method);
NormMethod parse_norm_method(std::string_view name);

struct NormResult {
  double value = 0.0;  ///< ||f||_{U^d}
  double power = 0.0;  ///< ||f||_{U^d}^{2^d}, the cube average itself
  NormMethod method = NormMethod::kNaive;
  std::uint64_t term_count = 0;
  bool semi_norm = false;  ///< d = 1 gives only |E f|
};

/// Sum over all pairs x, x' in G^d of prod_omega C^{|omega|} f(x^omega).
/// Throws CostError when N^{2d} exceeds the budget.
Complex gowers_cube_sum(const MultiFunction& f, double budget = kDefaultTermBudget);

/// Normalized U^d norm by direct summation over every cube. Throws
/// Error(kPrecision) if the imaginary residue exceeds 1e-9 of the term scale.
NormResult gowers_norm(const MultiFunction& f, double budget = kDefaultTermBudget);

/// U^d norm of the projection f(x_1,...,x_d) = g(x_1 + ... + x_d).
///   kNaive     - gowers_norm of the projected table
///   kRecursive - ||g||^{2^d} = E_h ||g conj(g(.+h))||^{2^{d-1}}_{U^{d-1}}
///   kFourier   - derivatives down to U^2, then N^{-4} sum |hat g|^4
NormResult gowers_norm_onedim(const GroupSpec& group, std::span<const Complex> g, int d,
                              NormMethod method, double budget = kDefaultTermBudget);

/// g(x_1 + ... + x_d) as a function on G^d.
MultiFunction project_onedim(const GroupSpec& group, std::span<const Complex> g, int d);

/// Unnormalized N^{2d} ||f||^{2^d}_{U^d}; the raw cube sum.
double calU_norm(const MultiFunction& f, double budget = kDefaultTermBudget);

/// Raw box sum over x_1..x_d, x'_{rho1}, x'_{rho2} (0-based rho1 < rho2),
/// evaluated through the Gram matrices of the (rho1, rho2) slices.
/// The budget is charged N^{d+2}, the number of defining terms.
double box_norm_u2(const MultiFunction& f, std::size_t rho1, std::size_t rho2,
                   double budget = kDefaultTermBudget);

enum class SkewKind { kF, kH };

/// F_t(x, y_1..y_t) = e((x - lambda) . a(x + y_1 + ... + y_t)) or
/// H_t(x, y_1..y_t) = e((x - lambda) . a(y_1 + ... + y_t)).
MultiFunction compose_skew(const ArithMap& a, int t, SkewKind kind, Index lambda = 0);

/// e(x . a(y)) on G^2.
MultiFunction phase_function(const ArithMap& a);

/// ((1/N^2) sum_j |M_j|^2)^{1/4}, M_j the fibers of a.
double rect_norm_phase_fiber(const ArithMap& a);

struct CubeCount {
  std::uint64_t count = 0;
  double raw = 0.0;  ///< unrounded value for the spectral method
  NormMethod method = NormMethod::kNaive;
  std::uint64_t term_count = 0;
};

/// #{(y, y') in G^{2t} : sum_omega (-1)^{|omega|} a(y^omega_1 + ... + y^omega_t) = 0}.
///   kNaive    - enumerate all N^{2t} pairs
///   kSpectral - N^{2t-1} sum_xi ||e(xi . a)||^{2^t}_{U^t}, rounded; throws
///               Error(kPrecision) if the residue exceeds 1e-6
CubeCount cube_count(const ArithMap& a, int t, NormMethod method,
                     double budget = kDefaultTermBudget);

/// Real tables on G^d; entry i must not depend on coordinate i.
using CoordinateFreeTables = std::vector<std::vector<double>>;

/// Lifts v on G^{d-1} (coordinates other than `skip`, in order) to G^d.
std::vector<double> lift_skipping(const GroupSpec& group, std::size_t d, std::size_t skip,
                                  std::span<const double> v);

/// Throws Error(kContract) if u does not have d entries of size N^d, has a value
/// outside [-1, 1] (when `bounded`), or fails a randomized independence probe
/// of 100 perturbations per table.
void check_coordinate_free(const MultiFunction& f, const CoordinateFreeTables& u,
                           bool bounded = true);

/// E_x f(x) prod_i u_i(x).
Complex gcs_correlation(const MultiFunction& f, const CoordinateFreeTables& u);

struct GcsCheck {
  Complex correlation;
  double norm = 0.0;  ///< ||f||_{U^d}
  bool holds = false; ///< |correlation| <= norm (+1e-12 slack)
};

GcsCheck gcs_check(const MultiFunction& f, const CoordinateFreeTables& u,
                   double budget = kDefaultTermBudget);

/// f(x) prod_i e(u_i(x)); leaves every U^d norm unchanged.
MultiFunction modulate(const MultiFunction& f, const CoordinateFreeTables& u);

/// f(x) e(prod_i u_i(x)), the product-phase variant. No invariance claimed.
MultiFunction modulate_product_phase(const MultiFunction& f, const CoordinateFreeTables& u);

/// f_{x_d}(x_1, ..., x_{d-1}) = f(x_1, ..., x_{d-1}, last).
MultiFunction fix_last(const MultiFunction& f, Index last);

}  // namespace gowlab
