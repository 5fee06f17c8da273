#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gowlab {

/// A positive real x held as log2(x) = mant * 2^exp2, so that double
/// exponentials such as base^{2^{3lm}} stay representable.
struct ScaledLog {
  double mant = 0.0;
  double exp2 = 0.0;

  static ScaledLog of(double x);           ///< x > 0
  static ScaledLog from_log2(double l2) { return {l2, 0.0}; }

  /// log2 of the value; may be +-inf once exp2 is large.
  double log2() const;
  /// The value itself; 0 or inf outside double range.
  double value() const;

  /// x^e for a plain exponent e.
  ScaledLog pow(double e) const { return normalize({mant * e, exp2}); }
  /// x^{c 2^k}.
  ScaledLog pow_scaled(double c, double k) const { return normalize({mant * c, exp2 + k}); }

  friend ScaledLog operator*(const ScaledLog& a, const ScaledLog& b);
  friend ScaledLog operator/(const ScaledLog& a, const ScaledLog& b);
  friend bool operator<(const ScaledLog& a, const ScaledLog& b);

  static ScaledLog normalize(ScaledLog s);
};

ScaledLog max(const ScaledLog& a, const ScaledLog& b);

/// Parameters for every evaluator; unused fields are ignored.
struct BoundParams {
  double l = 4, m = 1;
  double N = 256;
  double eps = 0.5;
  std::optional<double> log2_inv_eps;  ///< overrides eps for eps below double range
  double eps1 = 0.5;
  double alpha = 0.5, omega = 0.5;
  double t = 1;
  double c_t = 1.0;        ///< the unspecified constant c(t)
  double implied = 1.0;    ///< constant behind the << sign
  double K = 1;
  double P_len = 0;        ///< |P| for the set corollary; 0 skips its hypotheses
  std::optional<double> S_size;  ///< |S|; defaults to 3^{lm}
};

enum class BoundKind {
  kTheorem,
  kCorRectT1,
  kCorRectTGeneral,
  kCorInjection,
  kCorSetsP,
  kLemmaIncZeta,
  kLemmaIncSteps,
};

const char* to_string(BoundKind k);
BoundKind parse_bound_kind(std::string_view name);
std::vector<BoundKind> all_bound_kinds();

struct BoundVariant {
  std::string name;
  ScaledLog bound;
  bool vacuous = false;
};

struct BoundResult {
  BoundKind kind = BoundKind::kTheorem;
  ScaledLog bound;     ///< the printed right-hand side
  ScaledLog trivial;   ///< what holds with no hypothesis at all
  bool vacuous = false;
  /// Exponents, prefactors and bases of the printed formula, as numbers.
  std::map<std::string, double> shape;
  /// Other printings of the same bound (512 vs 2^8, 2^-19 vs 2^-21 and so on).
  std::vector<BoundVariant> variants;
  std::map<std::string, bool> hypotheses;
};

/// Evaluates the printed right-hand side verbatim in log space. log is the
/// natural logarithm. Throws Error(kDomain) for eps >= 1 or eps <= 0 where
/// log(1/eps) is needed, and for parameters outside their ranges.
BoundResult bound_eval(const BoundParams& p, BoundKind which);

}  // namespace gowlab
