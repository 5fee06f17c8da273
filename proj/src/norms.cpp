#include "gowlab/norms.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "gowlab/error.hpp"
#include "gowlab/harmonic.hpp"
#include "gowlab/reduce.hpp"

namespace gowlab {
namespace {

constexpr double kImagResidue = 1e-9;
constexpr double kRoundingResidue = 1e-6;
constexpr std::size_t kContractProbes = 100;
constexpr std::uint64_t kContractSeed = 0x636f6f7264ULL;

double ipow(double base, std::size_t exp) {
  double r = 1.0;
  for (std::size_t i = 0; i < exp; ++i) r *= base;
  return r;
}

Complex phase(double u) { return std::polar(1.0, 2.0 * std::numbers::pi * u); }

// Cube sum of a dense table on G^d. The outer pair (x_1, x'_1) is one job;
// the last coordinate pair is folded as Q(x_d) conj(Q(x'_d)), which is the
// value of each individual term.
Complex cube_sum_table(const std::vector<Complex>& table, Index n, std::size_t d) {
  std::vector<std::uint64_t> stride(d);
  std::uint64_t s = 1;
  for (std::size_t i = d; i-- > 0;) {
    stride[i] = s;
    s *= n;
  }
  const std::size_t half = std::size_t{1} << (d - 1);

  auto job = [&](std::size_t outer) -> Complex {
    PairwiseSum<Complex> acc;
    std::vector<Complex> q(n);
    std::vector<Complex> qc(n);

    auto leaf = [&](const std::vector<std::uint64_t>& idx) {
      // idx holds 2^{d-1} partial indices over coordinates 0..d-2.
      for (Index xd = 0; xd < n; ++xd) {
        Complex prod{1.0, 0.0};
        for (std::size_t w = 0; w < half; ++w) {
          const Complex v = table[idx[w] + xd * stride[d - 1]];
          prod *= (std::popcount(w) & 1) ? std::conj(v) : v;
        }
        q[xd] = prod;
        qc[xd] = std::conj(prod);
      }
      for (Index xd = 0; xd < n; ++xd) {
        for (Index xd2 = 0; xd2 < n; ++xd2) acc.add(q[xd] * qc[xd2]);
      }
    };

    if (d == 1) {
      // Only the (x_1, x'_1) pair exists: term f(x_1) conj f(x'_1).
      const Index x = static_cast<Index>(outer / n);
      const Index xp = static_cast<Index>(outer % n);
      return table[x] * std::conj(table[xp]);
    }

    const Index x1 = static_cast<Index>(outer / n);
    const Index x1p = static_cast<Index>(outer % n);
    std::vector<std::uint64_t> level0{x1 * stride[0], x1p * stride[0]};
    if (d == 2) {
      leaf(level0);
      return acc.total();
    }
    // Depth-first over pairs for coordinates 1..d-2.
    std::vector<std::vector<std::uint64_t>> stack(d - 1);
    stack[0] = level0;
    std::function<void(std::size_t)> descend = [&](std::size_t c) {
      if (c == d - 1) {
        leaf(stack[c - 1]);
        return;
      }
      const auto& prev = stack[c - 1];
      auto& cur = stack[c];
      cur.resize(prev.size() * 2);
      for (Index x = 0; x < n; ++x) {
        for (Index xp = 0; xp < n; ++xp) {
          for (std::size_t w = 0; w < prev.size(); ++w) {
            cur[w] = prev[w] + x * stride[c];
            cur[w + prev.size()] = prev[w] + xp * stride[c];
          }
          descend(c + 1);
        }
      }
    };
    descend(1);
    return acc.total();
  };
  return parallel_sum<Complex>(std::size_t{n} * n, job);
}

double max_abs(const std::vector<Complex>& t) {
  double m = 0.0;
  for (const auto& v : t) m = std::max(m, std::abs(v));
  return m;
}

// ||v||^{2^d}_{U^d} by the derivative recursion.
double onedim_power(const GroupSpec& g, const std::vector<Complex>& v, int d) {
  const Index n = g.order();
  if (d == 1) {
    PairwiseSum<Complex> acc;
    for (const auto& x : v) acc.add(x);
    return std::norm(acc.total() / static_cast<double>(n));
  }
  auto job = [&](std::size_t h) -> double {
    std::vector<Complex> diff(n);
    for (Index x = 0; x < n; ++x) diff[x] = v[x] * std::conj(v[g.add(x, static_cast<Index>(h))]);
    return onedim_power(g, diff, d - 1);
  };
  double total;
  if (d >= 3) {
    total = parallel_sum<double>(n, job);
  } else {
    PairwiseSum<double> acc;
    for (Index h = 0; h < n; ++h) acc.add(job(h));
    total = acc.total();
  }
  return total / static_cast<double>(n);
}

// Same recursion, but U^2 is finished as N^{-4} sum |hat v|^4.
double fourier_power(const GroupSpec& g, const std::vector<Complex>& v, int d) {
  const Index n = g.order();
  if (d == 2) {
    const Spectrum s = dft(g, v);
    PairwiseSum<double> acc;
    for (const auto& c : s.values) acc.add(std::norm(c) * std::norm(c));
    return acc.total() / ipow(n, 4);
  }
  PairwiseSum<double> acc;
  std::vector<Complex> diff(n);
  for (Index h = 0; h < n; ++h) {
    for (Index x = 0; x < n; ++x) diff[x] = v[x] * std::conj(v[g.add(x, h)]);
    acc.add(fourier_power(g, diff, d - 1));
  }
  return acc.total() / static_cast<double>(n);
}

NormResult finish(double power, NormMethod method, std::uint64_t terms, int d) {
  NormResult r;
  r.power = std::max(0.0, power);
  r.value = std::pow(r.power, 1.0 / std::ldexp(1.0, d));
  r.method = method;
  r.term_count = terms;
  r.semi_norm = d == 1;
  return r;
}

}  // namespace

const char* to_string(NormMethod method) {
  switch (method) {
    case NormMethod::kNaive: return "naive";
    case NormMethod::kRecursive: return "recursive";
    case NormMethod::kFourier: return "fourier";
    case NormMethod::kFiber: return "fiber";
    case NormMethod::kSpectral: return "spectral";
    case NormMethod::kGram: return "gram";
  }
  return "unknown";
}

NormMethod parse_norm_method(std::string_view name) {
  for (const auto m : {NormMethod::kNaive, NormMethod::kRecursive, NormMethod::kFourier,
                       NormMethod::kFiber, NormMethod::kSpectral, NormMethod::kGram}) {
    if (name == to_string(m)) return m;
  }
  fail(ErrorKind::kParse, "unknown norm method '" + std::string(name) + "'");
}

Complex gowers_cube_sum(const MultiFunction& f, double budget) {
  const std::size_t d = f.arity();
  const double terms = ipow(f.group().order(), 2 * d);
  charge(terms, budget, "U^" + std::to_string(d) + " cube sum");
  if (f.is_materialized()) return cube_sum_table(f.table(), f.group().order(), d);
  const MultiFunction dense = f.materialized();
  return cube_sum_table(dense.table(), f.group().order(), d);
}

namespace {

// Real cube sum after the residue check.
double checked_cube_sum(const MultiFunction& f, double budget) {
  const std::size_t d = f.arity();
  const MultiFunction dense = f.is_materialized() ? f : f.materialized();
  const Complex sum = gowers_cube_sum(dense, budget);
  const double terms = ipow(f.group().order(), 2 * d);
  const double scale =
      terms * std::max(1.0, ipow(max_abs(dense.table()), std::size_t{1} << d));
  if (std::abs(sum.imag()) > kImagResidue * scale || sum.real() < -kImagResidue * scale) {
    fail(ErrorKind::kPrecision, "U^d cube sum has residue " + std::to_string(sum.imag()) +
                                    " + negative part " + std::to_string(sum.real()));
  }
  return std::max(0.0, sum.real());
}

}  // namespace

NormResult gowers_norm(const MultiFunction& f, double budget) {
  const std::size_t d = f.arity();
  const double terms = ipow(f.group().order(), 2 * d);
  const double sum = checked_cube_sum(f, budget);
  return finish(sum / terms, NormMethod::kNaive, static_cast<std::uint64_t>(terms),
                static_cast<int>(d));
}

MultiFunction project_onedim(const GroupSpec& group, std::span<const Complex> g, int d) {
  if (d < 1) fail(ErrorKind::kDomain, "U^d needs d >= 1");
  if (g.size() != group.order()) fail(ErrorKind::kDomain, "table length does not match group");
  std::vector<Complex> values(g.begin(), g.end());
  return MultiFunction::tabulate(group, static_cast<std::size_t>(d),
                                 [group, values](std::span<const Index> x) {
                                   Index s = 0;
                                   for (const Index xi : x) s = group.add(s, xi);
                                   return values[s];
                                 });
}

NormResult gowers_norm_onedim(const GroupSpec& group, std::span<const Complex> g, int d,
                              NormMethod method, double budget) {
  if (d < 1) fail(ErrorKind::kDomain, "U^d needs d >= 1");
  if (g.size() != group.order()) fail(ErrorKind::kDomain, "table length does not match group");
  const Index n = group.order();
  switch (method) {
    case NormMethod::kNaive: {
      auto r = gowers_norm(project_onedim(group, g, d), budget);
      return r;
    }
    case NormMethod::kRecursive: {
      const double terms = ipow(n, static_cast<std::size_t>(d));
      charge(terms, budget, "recursive U^d");
      const std::vector<Complex> v(g.begin(), g.end());
      return finish(onedim_power(group, v, d), method, static_cast<std::uint64_t>(terms), d);
    }
    case NormMethod::kFourier: {
      if (d < 2) fail(ErrorKind::kDomain, "fourier method needs d >= 2");
      const double terms = ipow(n, static_cast<std::size_t>(d - 1));
      charge(terms, budget, "fourier U^d");
      const std::vector<Complex> v(g.begin(), g.end());
      return finish(fourier_power(group, v, d), method, static_cast<std::uint64_t>(terms), d);
    }
    default:
      fail(ErrorKind::kDomain, std::string("method '") + to_string(method) +
                                   "' does not apply to one-dimensional norms");
  }
}

double calU_norm(const MultiFunction& f, double budget) {
  return checked_cube_sum(f, budget);
}

double box_norm_u2(const MultiFunction& f, std::size_t rho1, std::size_t rho2, double budget) {
  const std::size_t d = f.arity();
  if (!(rho1 < rho2 && rho2 < d)) {
    fail(ErrorKind::kDomain, "box norm needs 0 <= rho1 < rho2 < d");
  }
  const Index n = f.group().order();
  charge(ipow(n, d + 2), budget, "box norm");
  const std::size_t others = d - 2;
  const std::uint64_t outer = domain_size(f.group(), others);

  auto job = [&](std::size_t o) -> double {
    std::vector<Index> x(d, 0);
    std::uint64_t rest = o;
    for (std::size_t i = d; i-- > 0;) {
      if (i == rho1 || i == rho2) continue;
      x[i] = static_cast<Index>(rest % n);
      rest /= n;
    }
    std::vector<Complex> m(std::size_t{n} * n);
    for (Index a = 0; a < n; ++a) {
      for (Index b = 0; b < n; ++b) {
        x[rho1] = a;
        x[rho2] = b;
        m[std::size_t{a} * n + b] = f(x);
      }
    }
    PairwiseSum<double> acc;
    for (Index a = 0; a < n; ++a) {
      for (Index a2 = 0; a2 < n; ++a2) {
        PairwiseSum<Complex> gram;
        for (Index b = 0; b < n; ++b) {
          gram.add(m[std::size_t{a} * n + b] * std::conj(m[std::size_t{a2} * n + b]));
        }
        acc.add(std::norm(gram.total()));
      }
    }
    return acc.total();
  };
  return parallel_sum<double>(outer, job);
}

MultiFunction compose_skew(const ArithMap& a, int t, SkewKind kind, Index lambda) {
  if (t < 1) fail(ErrorKind::kDomain, "skew composition needs t >= 1");
  const GroupSpec g = a.group;
  ArithMap map = a;
  MultiFunction::Evaluator eval = [g, map, kind, lambda](std::span<const Index> x) {
    Index s = 0;
    for (std::size_t i = 1; i < x.size(); ++i) s = g.add(s, x[i]);
    const Index target = kind == SkewKind::kF ? g.add(x[0], s) : s;
    return g.character(map(target), g.sub(x[0], lambda));
  };
  const auto arity = static_cast<std::size_t>(t) + 1;
  if (arity <= 4) return MultiFunction::tabulate(g, arity, eval);
  return MultiFunction::lazy(g, arity, std::move(eval));
}

MultiFunction phase_function(const ArithMap& a) {
  return compose_skew(a, 1, SkewKind::kH, 0);
}

double rect_norm_phase_fiber(const ArithMap& a) {
  const double n = a.group.order();
  double sq = 0.0;
  for (const auto m : a.fiber_sizes()) sq += static_cast<double>(m) * static_cast<double>(m);
  return std::pow(sq / (n * n), 0.25);
}

CubeCount cube_count(const ArithMap& a, int t, NormMethod method, double budget) {
  if (t < 1) fail(ErrorKind::kDomain, "cube count needs t >= 1");
  const GroupSpec& g = a.group;
  const Index n = g.order();
  CubeCount out;
  out.method = method;
  if (method == NormMethod::kNaive) {
    const double terms = ipow(n, 2 * static_cast<std::size_t>(t));
    charge(terms, budget, "naive cube count");
    out.term_count = static_cast<std::uint64_t>(terms);
    const auto ts = static_cast<std::size_t>(t);
    auto job = [&](std::size_t outer) -> double {
      std::vector<std::vector<Index>> sums(ts + 1);
      sums[1] = {static_cast<Index>(outer / n), static_cast<Index>(outer % n)};
      std::uint64_t hits = 0;
      std::function<void(std::size_t)> descend = [&](std::size_t c) {
        if (c == ts) {
          Index alt = 0;
          const auto& s = sums[ts];
          for (std::size_t w = 0; w < s.size(); ++w) {
            alt = (std::popcount(w) & 1) ? g.sub(alt, a(s[w])) : g.add(alt, a(s[w]));
          }
          if (alt == 0) ++hits;
          return;
        }
        const auto& prev = sums[c];
        auto& cur = sums[c + 1];
        cur.resize(prev.size() * 2);
        for (Index y = 0; y < n; ++y) {
          for (Index yp = 0; yp < n; ++yp) {
            for (std::size_t w = 0; w < prev.size(); ++w) {
              cur[w] = g.add(prev[w], y);
              cur[w + prev.size()] = g.add(prev[w], yp);
            }
            descend(c + 1);
          }
        }
      };
      descend(1);
      return static_cast<double>(hits);
    };
    const double total = parallel_sum<double>(std::size_t{n} * n, job);
    out.count = static_cast<std::uint64_t>(total);
    out.raw = total;
    return out;
  }
  if (method != NormMethod::kSpectral) {
    fail(ErrorKind::kDomain, "cube count supports naive and spectral methods");
  }
  const double terms = ipow(n, static_cast<std::size_t>(t) + 1);
  charge(terms, budget, "spectral cube count");
  out.term_count = static_cast<std::uint64_t>(terms);
  PairwiseSum<double> acc;
  std::vector<Complex> g_xi(n);
  for (Index xi = 0; xi < n; ++xi) {
    for (Index z = 0; z < n; ++z) g_xi[z] = g.character(xi, a(z));
    acc.add(gowers_norm_onedim(g, g_xi, t, NormMethod::kRecursive, budget).power);
  }
  out.raw = acc.total() * ipow(n, 2 * static_cast<std::size_t>(t) - 1);
  const double rounded = std::round(out.raw);
  if (std::abs(out.raw - rounded) >= kRoundingResidue) {
    fail(ErrorKind::kPrecision, "spectral cube count " + std::to_string(out.raw) +
                                    " is not within 1e-6 of an integer");
  }
  out.count = static_cast<std::uint64_t>(rounded);
  return out;
}

std::vector<double> lift_skipping(const GroupSpec& group, std::size_t d, std::size_t skip,
                                  std::span<const double> v) {
  if (skip >= d) fail(ErrorKind::kDomain, "skipped coordinate out of range");
  const Index n = group.order();
  if (v.size() != domain_size(group, d - 1)) {
    fail(ErrorKind::kDomain, "lift_skipping: table size mismatch");
  }
  const std::uint64_t total = domain_size(group, d);
  std::vector<double> out(total);
  std::vector<Index> x(d);
  for (std::uint64_t flat = 0; flat < total; ++flat) {
    std::uint64_t r = flat;
    for (std::size_t i = d; i-- > 0;) {
      x[i] = static_cast<Index>(r % n);
      r /= n;
    }
    std::uint64_t reduced = 0;
    for (std::size_t i = 0; i < d; ++i) {
      if (i != skip) reduced = reduced * n + x[i];
    }
    out[flat] = v[reduced];
  }
  return out;
}

void check_coordinate_free(const MultiFunction& f, const CoordinateFreeTables& u,
                           bool bounded) {
  const std::size_t d = f.arity();
  const Index n = f.group().order();
  if (u.size() != d) {
    fail(ErrorKind::kContract, "need " + std::to_string(d) + " coordinate-free tables");
  }
  std::mt19937_64 rng(kContractSeed);
  std::vector<Index> x(d);
  for (std::size_t i = 0; i < d; ++i) {
    if (u[i].size() != f.size()) fail(ErrorKind::kContract, "table size mismatch");
    if (bounded) {
      for (const double v : u[i]) {
        if (!(v >= -1.0 && v <= 1.0)) {
          fail(ErrorKind::kContract, "u_" + std::to_string(i + 1) + " leaves [-1, 1]");
        }
      }
    }
    std::uniform_int_distribution<std::uint64_t> pick_point(0, f.size() - 1);
    std::uniform_int_distribution<Index> pick_value(0, n - 1);
    for (std::size_t probe = 0; probe < kContractProbes; ++probe) {
      const std::uint64_t flat = pick_point(rng);
      f.decode(flat, x);
      x[i] = pick_value(rng);
      if (u[i][f.encode(x)] != u[i][flat]) {
        fail(ErrorKind::kContract,
             "u_" + std::to_string(i + 1) + " depends on coordinate " + std::to_string(i + 1));
      }
    }
  }
}

Complex gcs_correlation(const MultiFunction& f, const CoordinateFreeTables& u) {
  check_coordinate_free(f, u, true);
  const MultiFunction dense = f.materialized();
  PairwiseSum<Complex> acc;
  for (std::uint64_t flat = 0; flat < dense.size(); ++flat) {
    double w = 1.0;
    for (const auto& ui : u) w *= ui[flat];
    acc.add(dense.table()[flat] * w);
  }
  return acc.total() / static_cast<double>(dense.size());
}

GcsCheck gcs_check(const MultiFunction& f, const CoordinateFreeTables& u, double budget) {
  GcsCheck c;
  c.correlation = gcs_correlation(f, u);
  c.norm = gowers_norm(f, budget).value;
  c.holds = std::abs(c.correlation) <= c.norm + 1e-12;
  return c;
}

MultiFunction modulate(const MultiFunction& f, const CoordinateFreeTables& u) {
  check_coordinate_free(f, u, true);
  const MultiFunction dense = f.materialized();
  std::vector<Complex> out(dense.table());
  for (std::uint64_t flat = 0; flat < out.size(); ++flat) {
    for (const auto& ui : u) out[flat] *= phase(ui[flat]);
  }
  return MultiFunction::from_table(f.group(), f.arity(), std::move(out));
}

MultiFunction modulate_product_phase(const MultiFunction& f, const CoordinateFreeTables& u) {
  check_coordinate_free(f, u, true);
  const MultiFunction dense = f.materialized();
  std::vector<Complex> out(dense.table());
  for (std::uint64_t flat = 0; flat < out.size(); ++flat) {
    double prod = 1.0;
    for (const auto& ui : u) prod *= ui[flat];
    out[flat] *= phase(prod);
  }
  return MultiFunction::from_table(f.group(), f.arity(), std::move(out));
}

MultiFunction fix_last(const MultiFunction& f, Index last) {
  if (f.arity() < 2) fail(ErrorKind::kDomain, "fix_last needs arity >= 2");
  const MultiFunction dense = f.materialized();
  const Index n = f.group().order();
  std::vector<Complex> out(dense.size() / n);
  for (std::uint64_t i = 0; i < out.size(); ++i) out[i] = dense.table()[i * n + last];
  return MultiFunction::from_table(f.group(), f.arity() - 1, std::move(out));
}

}  // namespace gowlab
