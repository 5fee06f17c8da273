#include "gowlab/bounds.hpp"

#include <cmath>
#include <limits>

#include "gowlab/error.hpp"

namespace gowlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ScaledLog pow2(double e) { return ScaledLog::from_log2(e); }

bool is_prime(double n) {
  if (n < 2 || n != std::floor(n)) return false;
  const auto v = static_cast<std::uint64_t>(n);
  for (std::uint64_t d = 2; d * d <= v; ++d) {
    if (v % d == 0) return false;
  }
  return true;
}

void require(bool ok, const char* what) {
  if (!ok) fail(ErrorKind::kDomain, what);
}

// log2(1/eps) for a user-supplied eps.
double log2_inv_eps(const BoundParams& p) {
  if (p.log2_inv_eps) {
    require(*p.log2_inv_eps > 0, "log2(1/eps) must be positive");
    return *p.log2_inv_eps;
  }
  require(p.eps > 0 && p.eps < 1, "eps must lie in (0, 1) for log(1/eps)");
  return -std::log2(p.eps);
}

// log2 of the natural logarithm log(1/eps).
double log2_ln(double l2inv) { return std::log2(l2inv) + std::log2(std::log(2.0)); }

double s_size(const BoundParams& p) {
  return p.S_size ? *p.S_size : std::pow(3.0, p.l * p.m);
}

void check_shape(const BoundParams& p) {
  require(p.l >= 1 && p.m >= 1 && p.m < p.l, "need 1 <= m < l");
  require(p.N >= 1, "N must be >= 1");
}

// 3^{pre} max{2^30 (num / log(1/eps))^{2^{-e1}}, 4 (base / N)^{2^{-e2}}} N^{np}
// with every quantity given by its log2. An infinite l2_log_term means
// log(1/eps) = 0.
ScaledLog two_branch(double pre_log3, double num_log2, double l2_ln, double e1_log2,
                     double base_log2, double n_log2, double e2_log2, double np) {
  const double b1 = std::isinf(l2_ln) ? kInf : 30.0 + (num_log2 - l2_ln) * std::exp2(e1_log2);
  const double b2 = 2.0 + (base_log2 - n_log2) * std::exp2(e2_log2);
  return ScaledLog::from_log2(pre_log3 * std::log2(3.0) + std::max(b1, b2) + np * n_log2);
}

void theorem(const BoundParams& p, BoundResult& r) {
  check_shape(p);
  const double lm = p.l * p.m;
  const double l2ln = log2_ln(log2_inv_eps(p));
  // (128 lm 2^{3ml})^{-1} and (16 lm 2^{3ml})^{-1} as powers of two
  const double e1 = -(7.0 + std::log2(lm) + 3.0 * lm);
  const double e2 = -(4.0 + std::log2(lm) + 3.0 * lm);
  const double nl = std::log2(p.N);
  r.bound = two_branch(lm, 9.0, l2ln, e1, 2.0 * p.l, nl, e2, p.l - p.m);
  r.trivial = ScaledLog::of(s_size(p)) * pow2(nl * (p.l - p.m));
  r.shape = {{"prefactor_log3", lm},      {"exponent1_log2", e1}, {"exponent2_log2", e2},
             {"inner_base_log2", 2 * p.l}, {"log_numerator", 512}, {"first_constant_log2", 30},
             {"second_constant", 4},       {"n_power", p.l - p.m}};
  r.variants.push_back({"log-numerator-2^8",
                        two_branch(lm, 8.0, l2ln, e1, 2.0 * p.l, nl, e2, p.l - p.m), false});
}

struct AltPrinting {
  const char* name;
  double num_log2, e1, e2;
};

void rect_t1(const BoundParams& p, BoundResult& r, double l2inv, double e1, double e2,
             const AltPrinting& alt) {
  require(p.N >= 1, "N must be >= 1");
  const double nl = std::log2(p.N);
  const double l2ln = l2inv > 0 ? log2_ln(l2inv) : kInf;
  r.bound = two_branch(4, 8, l2ln, e1, 8, nl, e2, 4);
  r.trivial = pow2(4 * nl);
  r.shape = {{"prefactor_log3", 4},   {"exponent1_log2", e1},       {"exponent2_log2", e2},
             {"inner_base_log2", 8},  {"log_numerator", 256},       {"first_constant_log2", 30},
             {"second_constant", 4},  {"n_power", 4}};
  r.variants.push_back({alt.name, two_branch(4, alt.num_log2, l2ln, alt.e1, 8, nl, alt.e2, 4), false});
}

void injection_like(const BoundParams& p, BoundResult& r, double k_scale, double root,
                    double e1, double e2, const AltPrinting& alt) {
  require(p.K >= 1 && p.K <= p.N, "need 1 <= K <= N");
  // eps_* = (k_scale K / N)^{1/root}; eps_* >= 1 leaves log(1/eps_*) <= 0
  const double l2inv = (std::log2(p.N) - std::log2(k_scale * p.K)) / root;
  rect_t1(p, r, l2inv, e1, e2, alt);
  r.shape["eps_star_log2"] = -l2inv;
  if (l2inv <= 0) r.bound = ScaledLog::from_log2(kInf);
}

void zeta(const BoundParams& p, BoundResult& r) {
  check_shape(p);
  require(p.alpha > 0 && p.alpha <= 1 && p.omega > 0 && p.omega <= 1 && p.eps1 > 0 &&
              p.eps1 <= 1,
          "alpha, omega, eps1 must lie in (0, 1]");
  const double S = s_size(p);
  const double lm = p.l * p.m;
  const double base = p.alpha * p.eps1 / (32.0 * (1.0 + 1.0 / p.omega) * S);
  r.bound = ScaledLog::of(base).pow_scaled(lm, 3 * lm);
  r.trivial = ScaledLog::of(1.0);
  r.shape = {{"base", base}, {"exponent_scale", lm}, {"exponent_log2", 3 * lm}};
  // The promised decrease zeta tau is below one tuple.
  const auto tuples = ScaledLog::of(S) * pow2(std::log2(p.N) * (p.l - p.m));
  r.vacuous = (r.bound * tuples) < ScaledLog::of(1.0);
}

void steps(const BoundParams& p, BoundResult& r) {
  check_shape(p);
  require(p.eps1 > 0 && p.eps1 <= 1, "eps1 must lie in (0, 1]");
  const double S = s_size(p);
  const double lm = p.l * p.m;
  const double base = p.eps1 * p.eps1 / (64.0 * (1.0 + 2.0 * S / p.eps1) * S * S);
  const auto zeta_star = ScaledLog::of(base).pow_scaled(lm, 3 * lm);
  r.bound = ScaledLog::of(16.0 * std::log(2.0 * S / p.eps1)) / zeta_star;
  r.trivial = ScaledLog::of(S) * pow2(std::log2(p.N) * (p.l - p.m));
  r.shape = {{"zeta_star_base", base}, {"exponent_scale", lm}, {"exponent_log2", 3 * lm},
             {"zeta_star_log2", zeta_star.log2()}};
}

}  // namespace

ScaledLog ScaledLog::normalize(ScaledLog s) {
  if (s.mant == 0.0 || !std::isfinite(s.mant)) {
    if (s.mant == 0.0) s.exp2 = 0.0;
    return s;
  }
  int e = 0;
  s.mant = std::frexp(s.mant, &e);
  s.exp2 += e;
  return s;
}

ScaledLog ScaledLog::of(double x) {
  if (!(x > 0)) fail(ErrorKind::kDomain, "ScaledLog needs a positive value");
  return normalize({std::log2(x), 0.0});
}

double ScaledLog::log2() const {
  if (mant == 0.0) return 0.0;
  if (!std::isfinite(mant)) return mant;
  if (exp2 > 2000) return mant > 0 ? kInf : -kInf;
  if (exp2 < -2000) return 0.0;
  return std::ldexp(mant, static_cast<int>(exp2));
}

double ScaledLog::value() const { return std::exp2(log2()); }

ScaledLog operator*(const ScaledLog& a, const ScaledLog& b) {
  if (a.mant == 0.0) return b;
  if (b.mant == 0.0) return a;
  if (!std::isfinite(a.mant) || !std::isfinite(b.mant)) return {a.mant + b.mant, 0.0};
  const double e = std::max(a.exp2, b.exp2);
  auto scaled = [e](const ScaledLog& s) {
    const double shift = s.exp2 - e;
    return shift < -2000 ? 0.0 : std::ldexp(s.mant, static_cast<int>(shift));
  };
  return ScaledLog::normalize({scaled(a) + scaled(b), e});
}

ScaledLog operator/(const ScaledLog& a, const ScaledLog& b) {
  return a * ScaledLog{-b.mant, b.exp2};
}

bool operator<(const ScaledLog& a, const ScaledLog& b) {
  const ScaledLog d = a / b;
  return d.mant < 0 || (std::isnan(d.mant) && a.mant < b.mant);
}

ScaledLog max(const ScaledLog& a, const ScaledLog& b) { return a < b ? b : a; }

const char* to_string(BoundKind k) {
  switch (k) {
    case BoundKind::kTheorem: return "theorem";
    case BoundKind::kCorRectT1: return "cor_rect_t1";
    case BoundKind::kCorRectTGeneral: return "cor_rect_tgeneral";
    case BoundKind::kCorInjection: return "cor_injection";
    case BoundKind::kCorSetsP: return "cor_sets_P";
    case BoundKind::kLemmaIncZeta: return "lemma_inc_zeta";
    case BoundKind::kLemmaIncSteps: return "lemma_inc_steps";
  }
  return "?";
}

std::vector<BoundKind> all_bound_kinds() {
  return {BoundKind::kTheorem,      BoundKind::kCorRectT1,    BoundKind::kCorRectTGeneral,
          BoundKind::kCorInjection, BoundKind::kCorSetsP,     BoundKind::kLemmaIncZeta,
          BoundKind::kLemmaIncSteps};
}

BoundKind parse_bound_kind(std::string_view name) {
  for (auto k : all_bound_kinds()) {
    if (name == to_string(k)) return k;
  }
  fail(ErrorKind::kParse, "unknown bound '" + std::string(name) + "'");
}

BoundResult bound_eval(const BoundParams& p, BoundKind which) {
  BoundResult r;
  r.kind = which;
  switch (which) {
    case BoundKind::kTheorem:
      theorem(p, r);
      break;
    case BoundKind::kCorRectT1:
      rect_t1(p, r, log2_inv_eps(p), -21, -18, {"log-numerator-512", 9, -21, -18});
      break;
    case BoundKind::kCorRectTGeneral: {
      require(p.t >= 1 && p.c_t > 0 && p.implied > 0, "need t >= 1, c(t) > 0, constant > 0");
      require(p.N >= 1, "N must be >= 1");
      const double l2ln = log2_ln(log2_inv_eps(p));
      const double nl = std::log2(p.N);
      const double inner = std::max(-l2ln, -p.c_t * nl);
      r.bound = ScaledLog::from_log2(std::log2(p.implied) + inner + (2 * p.t + 2) * nl);
      r.trivial = pow2((2 * p.t + 2) * nl);
      r.shape = {{"n_power", 2 * p.t + 2}, {"c_t", p.c_t}, {"implied", p.implied}};
      break;
    }
    case BoundKind::kCorInjection:
      injection_like(p, r, 1.0, 4.0, -19, -16, {"rectangle-exponents", 8, -21, -18});
      r.hypotheses["K_at_least_1"] = p.K >= 1;
      break;
    case BoundKind::kCorSetsP: {
      injection_like(p, r, 4.0, 48.0, -21, -18, {"injection-exponents", 8, -19, -16});
      r.hypotheses["N_prime"] = is_prime(p.N);
      if (p.P_len > 0) {
        r.hypotheses["P_large"] = p.P_len >= 32.0 * std::pow(p.N, 0.75);
        r.hypotheses["K_small"] = p.K <= std::ldexp(1.0, -18) * std::pow(p.P_len, 4) / std::pow(p.N, 3);
      }
      r.shape["rectangle_input_log2"] = 8 + (std::log2(p.K) - std::log2(p.N)) / 12 + 4 * std::log2(p.N);
      break;
    }
    case BoundKind::kLemmaIncZeta:
      zeta(p, r);
      return r;
    case BoundKind::kLemmaIncSteps:
      steps(p, r);
      break;
  }
  r.vacuous = !(r.bound < r.trivial);
  for (auto& v : r.variants) v.vacuous = !(v.bound < r.trivial);
  return r;
}

}  // namespace gowlab
