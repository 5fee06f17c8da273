#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gowlab/multifunction.hpp"
#include "gowlab/norms.hpp"

namespace gowlab::lab {

/// Parsed map grammar:
///   const:c  identity  pow:k  inv  inv-nonzero  randmap:seed  randbij:seed
///   ktoone:K:seed
struct MapSpec {
  enum class Kind { kConst, kIdentity, kPow, kInv, kInvNonzero, kRandMap, kRandBij, kKToOne };
  Kind kind = Kind::kIdentity;
  std::uint64_t value = 0;  ///< c, k or K
  std::uint64_t seed = 0;

  static MapSpec parse(std::string_view text);
  std::string to_string() const;
  friend bool operator==(const MapSpec&, const MapSpec&) = default;
};

/// pow and inv work in the ring Z_N and need a cyclic group; inv also needs N
/// prime and sends 0 to 0 (inv-nonzero sends 0 to 1). Random maps draw from
/// mt19937_64 with a hand-written Fisher-Yates, so tables are the same on
/// every platform.
ArithMap build_map(const GroupSpec& g, const MapSpec& spec);
inline ArithMap build_map(const GroupSpec& g, std::string_view spec) {
  return build_map(g, MapSpec::parse(spec));
}

bool is_prime(std::uint64_t n);

struct ApSmooth {
  std::vector<double> P;  ///< indicator of {0, .., P_len - 1}
  std::vector<double> W;  ///< (P * P_1) / t_len, P_1 = {0, .., t_len - 1}
  double sum_W = 0.0;
  std::size_t deviation_points = 0;  ///< #{x : W(x) != P(x)}
  double spectral_l1 = 0.0;          ///< sum_r |hat W(r)|, unnormalized transform
  double spectral_bound = 0.0;       ///< N P_len^{1/2} t_len^{-1/2}
};

ApSmooth ap_smooth(const GroupSpec& g, std::size_t P_len, std::size_t t_len);

struct ConvexityReport {
  double kappa = 1.0;
  double log_base = 2.0;
  double mean_h = 0.0;  ///< (1/n) sum h(x_i)
  double h_mean = 0.0;  ///< h((1/n) sum x_i)
  std::string direction;  ///< "equal", "mean_h_greater" or "mean_h_less"
  bool stated_holds = false;  ///< mean_h <= h_mean
  bool near_one = false;      ///< some x_i within 1e-6 of 1
};

/// h(x) = 1 / (log_b x)^kappa. Reports which way the inequality goes;
/// Jensen gives mean_h >= h_mean since h is convex on (1, inf).
ConvexityReport convexity_probe(double kappa, const std::vector<double>& xs,
                                double log_base = 2.0);

/// f(z_1 + .. + z_r + x_1 + .. + x_s, x_1 + .. + x_s + y_1 + .. + y_t) with
/// f(u, v) = e(u . a(v)), as a function on G^{r+s+t}.
MultiFunction rst_function(const ArithMap& a, int r, int s, int t);
/// Naive U^{r+s+t} norm of rst_function.
NormResult rst_probe(const ArithMap& a, int r, int s, int t, double budget = kDefaultTermBudget);

}  // namespace gowlab::lab
