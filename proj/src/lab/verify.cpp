#include "gowlab/lab/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>

#include "gowlab/bounds.hpp"
#include "gowlab/error.hpp"
#include "gowlab/lab/catalog.hpp"
#include "gowlab/linsys.hpp"
#include "gowlab/oracle.hpp"
#include "gowlab/selection.hpp"
#include "json.hpp"

namespace gowlab::lab {

namespace {

constexpr std::uint64_t kSuiteTag = 40;

struct Ctx {
  std::uint64_t seed;
  double budget;
  SuiteReport* report;

  void add(std::string name, double residual, double tol, std::string detail = {}) {
    const bool pass = std::isfinite(residual) && residual <= tol;
    report->checks.push_back({std::move(name), residual, tol, pass, std::move(detail)});
  }
  void flag(std::string name, bool ok, std::string detail = {}) {
    add(std::move(name), ok ? 0.0 : 1.0, 0.0, std::move(detail));
  }
  std::uint64_t draw(std::uint64_t a, std::uint64_t b = 0) const {
    return stream_hash(seed, kSuiteTag, a, b);
  }
  std::mt19937_64 rng(std::uint64_t a) const { return std::mt19937_64(draw(a, 1)); }
};

double rel(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

std::string tag(Index n) { return "N=" + std::to_string(n); }

std::vector<Complex> disk_values(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Complex> out(n);
  for (auto& v : out) v = std::polar(u(rng), 2.0 * std::numbers::pi * u(rng));
  return out;
}

MultiFunction random_function(const GroupSpec& g, std::size_t d, std::mt19937_64& rng) {
  return MultiFunction::from_table(g, d, disk_values(domain_size(g, d), rng));
}

CoordinateFreeTables random_free_tables(const GroupSpec& g, std::size_t d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CoordinateFreeTables out;
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<double> v(domain_size(g, d - 1));
    for (auto& x : v) x = u(rng);
    out.push_back(lift_skipping(g, d, i, v));
  }
  return out;
}

ArithMap random_map(const GroupSpec& g, const Ctx& c, std::uint64_t i) {
  return build_map(g, MapSpec{MapSpec::Kind::kRandMap, 0, c.draw(i, 7)});
}

// Literal box sum: every x in G^d and the two primed coordinates.
double brute_box(const MultiFunction& f, std::size_t r1, std::size_t r2) {
  const std::size_t d = f.arity();
  const Index n = f.group().order();
  std::vector<Index> x(d), v(d);
  Complex total{0, 0};
  for (std::uint64_t flat = 0; flat < f.size(); ++flat) {
    f.decode(flat, x);
    for (Index y1 = 0; y1 < n; ++y1) {
      for (Index y2 = 0; y2 < n; ++y2) {
        Complex term{1, 0};
        for (int w = 0; w < 4; ++w) {
          v = x;
          if (w & 1) v[r1] = y1;
          if (w & 2) v[r2] = y2;
          const Complex val = f(v);
          term *= (std::popcount(unsigned(w)) & 1) ? std::conj(val) : val;
        }
        total += term;
      }
    }
  }
  return total.real();
}

void fiber_identity(Ctx& c) {
  for (std::uint64_t i = 0; i < 50; ++i) {
    const Index n = 5 + Index(c.draw(i) % 28);
    const auto g = GroupSpec::make({n});
    const auto a = random_map(g, c, i);
    const double lhs = gowers_norm(phase_function(a), c.budget).power * double(n) * n;
    double rhs = 0;
    for (auto m : a.fiber_sizes()) rhs += double(m) * double(m);
    c.add("map " + std::to_string(i) + " " + tag(n), rel(lhs, rhs), 1e-10);
  }
}

void cube_count_identity(Ctx& c) {
  auto one = [&](const ArithMap& a, int t, const std::string& name) {
    const double n = a.group.order();
    const double raw = calU_norm(compose_skew(a, t, SkewKind::kH), c.budget);
    const auto naive = cube_count(a, t, NormMethod::kNaive, c.budget);
    const auto spectral = cube_count(a, t, NormMethod::kSpectral, c.budget);
    c.add("t=" + std::to_string(t) + " " + name, std::abs(std::round(raw) - n * n * double(naive.count)),
          0.0, "calU=" + std::to_string(raw));
    c.add("t=" + std::to_string(t) + " spectral " + name,
          std::abs(double(naive.count) - double(spectral.count)), 0.0);
  };
  for (Index n = 2; n <= 16; ++n) {
    const auto g = GroupSpec::make({n});
    one(random_map(g, c, n), 1, tag(n));
  }
  for (Index n = 2; n <= 8; ++n) {
    const auto g = GroupSpec::make({n});
    one(random_map(g, c, 100 + n), 2, tag(n));
  }
  const auto g8 = GroupSpec::make({8});
  one(build_map(g8, "identity"), 2, "identity N=8");
  one(build_map(g8, "const:3"), 2, "const N=8");
}

void sigma_representation(Ctx& c) {
  const auto fam = derive_families(cube_system(2));
  for (Index n = 2; n <= 12; ++n) {
    const auto g = GroupSpec::make({n});
    const auto a = random_map(g, c, n);
    const double direct = calU_norm(compose_skew(a, 1, SkewKind::kF), c.budget);
    const auto st = sigma_tau(skew_sigma1_kernel(g), uniform_maps(a, 4), fam, full_windows(g, 4),
                              ConstraintSet{}, c.budget);
    const Complex s = st.per_row.at(0).sigma;
    c.add("sigma1 sum " + tag(n), rel(s.real(), direct), 1e-9, "calU=" + std::to_string(direct));
    c.add("sigma1 imaginary " + tag(n), std::abs(s.imag()) / std::max(1.0, direct), 1e-9);
    c.add("closed form " + tag(n), rel(sigma1_closed_form(a).real(), direct), 1e-9);
  }
}

void norm_methods(Ctx& c) {
  for (std::uint64_t i = 0; i < 25; ++i) {
    const int d = 2 + int(i % 3);
    // naive U^4 at N = 16 costs minutes; the naive leg stops at N = 10 there
    const Index top = d == 4 ? 10 : 16;
    const Index n = 2 + Index(c.draw(i) % (top - 1));
    const auto g = GroupSpec::make({n});
    auto rng = c.rng(i);
    const auto v = disk_values(n, rng);
    const double naive = gowers_norm_onedim(g, v, d, NormMethod::kNaive, c.budget).value;
    const double rec = gowers_norm_onedim(g, v, d, NormMethod::kRecursive, c.budget).value;
    const double four = gowers_norm_onedim(g, v, d, NormMethod::kFourier, c.budget).value;
    const double r = std::max({std::abs(naive - rec), std::abs(naive - four), std::abs(rec - four)});
    c.add("function " + std::to_string(i) + " d=" + std::to_string(d) + " " + tag(n), r, 1e-9);
  }
  for (std::uint64_t i = 0; i < 5; ++i) {
    const auto g = GroupSpec::make({16});
    auto rng = c.rng(50 + i);
    const auto v = disk_values(16, rng);
    const double rec = gowers_norm_onedim(g, v, 4, NormMethod::kRecursive, c.budget).value;
    const double four = gowers_norm_onedim(g, v, 4, NormMethod::kFourier, c.budget).value;
    c.add("recursive vs fourier d=4 N=16 #" + std::to_string(i), std::abs(rec - four), 1e-9);
  }
  const auto g8 = GroupSpec::make({8});
  const std::size_t pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (std::uint64_t i = 0; i < 6; ++i) {
    auto rng = c.rng(100 + i);
    const auto f = random_function(g8, 3, rng);
    const auto& p = pairs[i % 3];
    c.add("box rho=(" + std::to_string(p[0]) + "," + std::to_string(p[1]) + ") #" + std::to_string(i),
          rel(box_norm_u2(f, p[0], p[1], c.budget), brute_box(f, p[0], p[1])), 1e-9);
  }
}

void norm_axioms(Ctx& c) {
  double worst[5] = {0, 0, 0, 0, 0};
  int fails[5] = {0, 0, 0, 0, 0};
  auto note = [&](int k, double excess) {
    worst[k] = std::max(worst[k], excess);
    fails[k] += excess > 1e-9;
  };
  for (std::uint64_t i = 0; i < 100; ++i) {
    const std::size_t d = 2 + i % 2;
    const Index n = 2 + Index(c.draw(i) % 7);
    const auto g = GroupSpec::make({n});
    auto rng = c.rng(i);
    const auto f = random_function(g, d, rng);
    const auto h = random_function(g, d, rng);
    const auto nf = gowers_norm(f, c.budget);
    note(0, gowers_norm(f + h, c.budget).value - nf.value - gowers_norm(h, c.budget).value);

    double avg = 0;
    for (Index x = 0; x < n; ++x) avg += gowers_norm(fix_last(f, x), c.budget).power;
    avg /= n;
    note(1, avg - std::pow(nf.value, std::ldexp(1.0, int(d) - 1)));

    const auto v = disk_values(n, rng);
    note(2, gowers_norm_onedim(g, v, int(d) - 1, NormMethod::kNaive, c.budget).value -
                gowers_norm_onedim(g, v, int(d), NormMethod::kNaive, c.budget).value);

    const auto u = random_free_tables(g, d, rng);
    const auto gcs = gcs_check(f, u, c.budget);
    note(3, std::abs(gcs.correlation) - gcs.norm);

    note(4, std::abs(gowers_norm(modulate(f, u), c.budget).value - nf.value));
  }
  const char* names[5] = {"triangle", "monotonicity (fixed last coordinate)",
                          "monotonicity (one-dimensional)", "Gowers-Cauchy-Schwarz",
                          "modulation invariance"};
  for (int k = 0; k < 5; ++k) {
    c.add(std::string(names[k]) + " over 100 trials", std::max(0.0, worst[k]), 1e-9,
          std::to_string(fails[k]) + " violations");
  }
}

void families(Ctx& c) {
  for (int d = 2; d <= 4; ++d) {
    const auto sys = cube_system(d);
    c.flag("rank d=" + std::to_string(d), rational_rank(sys) == (std::size_t{1} << d) - d - 1);
  }
  const auto fam2 = derive_families(cube_system(2));
  c.flag("d=2 family has 2 members", fam2.S.enumerated && fam2.S.set_count == 2);
  const std::set<IntRow> want{{0, 0, 0, 0}, {1, -1, -1, 1}, {-1, 1, 1, -1}};
  const std::set<IntRow> got(fam2.E.vectors.begin(), fam2.E.vectors.end());
  c.flag("d=2 E = {0, +-(1,-1,-1,1)}", got == want && fam2.E.vectors.size() == 3);

  auto compare = [&](const Families& fam, const GroupSpec& g, const MapList& phi, const Windows& w,
                     const std::string& name) {
    const auto fast = enumerate_solutions(fam, phi, w, ConstraintSet{}, {}, c.budget).counts;
    const auto slow = oracle::class_counts(fam.base, g, phi, w, ConstraintSet{});
    c.flag(name, fast == slow,
           "additive " + std::to_string(fast.additive) + " degenerate " + std::to_string(fast.degenerate) +
               " good " + std::to_string(fast.good) + " bad " + std::to_string(fast.bad));
  };
  for (Index n = 2; n <= 8; ++n) {
    const auto g = GroupSpec::make({n});
    const auto phi = uniform_maps(random_map(g, c, n), 4);
    compare(fam2, g, phi, full_windows(g, 4), "l=4 " + tag(n));
    Windows w;
    for (int j = 0; j < 4; ++j) w.push_back(Subset::range(n, Index(j % 2), n));
    compare(fam2, g, phi, w, "l=4 windows " + tag(n));
  }
  // N <= 8 is all degenerate; N = 16 also separates good from bad
  const auto g16 = GroupSpec::make({16});
  compare(fam2, g16, uniform_maps(random_map(g16, c, 16), 4), full_windows(g16, 4), "l=4 N=16");
  compare(fam2, g16, uniform_maps(build_map(g16, "const:5"), 4), full_windows(g16, 4), "l=4 N=16 const map");
  const auto fam3 = derive_families(cube_system(3));
  const auto g4 = GroupSpec::make({4});
  compare(fam3, g4, uniform_maps(random_map(g4, c, 99), 8), full_windows(g4, 8), "l=8 N=4");
}

struct TuplePair {
  MapList phi;
  std::vector<Index> good, bad;
};

TuplePair find_tuples(const Families& fam, const GroupSpec& g, const Ctx& c) {
  for (std::uint64_t i = 0; i < 64; ++i) {
    const auto phi = uniform_maps(random_map(g, c, 200 + i), fam.base.l);
    TuplePair tp{phi, {}, {}};
    enumerate_solutions(fam, phi, full_windows(g, fam.base.l), ConstraintSet{},
                        [&](std::span<const Index> x, TupleClass k) {
                          if (k == TupleClass::kGood && tp.good.empty()) tp.good.assign(x.begin(), x.end());
                          if (k == TupleClass::kBad && tp.bad.empty()) tp.bad.assign(x.begin(), x.end());
                        });
    if (!tp.good.empty() && !tp.bad.empty()) return tp;
  }
  fail(ErrorKind::kContract, "no map with both good and bad tuples");
}

// No nonzero {0,+-1} relation holds on both x and phi(x).
bool relation_free(const GroupSpec& g, std::span<const Index> x, const MapList& phi) {
  std::vector<Index> px(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) px[j] = phi[j](x[j]);
  IntRow eps(x.size(), -1);
  while (true) {
    const bool zero = std::all_of(eps.begin(), eps.end(), [](int e) { return e == 0; });
    if (!zero && dot(g, eps, x) == 0 && dot(g, eps, px) == 0) return false;
    std::size_t k = 0;
    while (k < eps.size() && ++eps[k] == 2) eps[k++] = -1;
    if (k == eps.size()) return true;
  }
}

void selection(Ctx& c) {
  const auto fam = derive_families(cube_system(2));
  const double th1 = fam.stats.theta1;
  c.flag("theta1 = 0 for m = 1", th1 == 0.0);

  // Z_8: every additive 4-tuple is degenerate, so the exact check uses
  // tuples with no relation shared by x and phi(x).
  const auto g8 = GroupSpec::make({8});
  const auto phi8 = uniform_maps(random_map(g8, c, 300), 4);
  std::vector<std::vector<Index>> free8;
  enumerate_solutions(fam, phi8, full_windows(g8, 4), ConstraintSet{},
                      [&](std::span<const Index> x, TupleClass) {
                        if (free8.size() < 8 && relation_free(g8, x, phi8)) free8.emplace_back(x.begin(), x.end());
                      });
  c.flag("N=8 relation-free tuples found", free8.size() == 8);
  for (std::size_t k = 1; k <= 2; ++k) {
    const double want = predicted_probs(4, 1, double(k), th1).bad_exact;
    double worst = 0;
    for (const auto& x : free8) {
      worst = std::max(worst, rel(exact_tuple_probability(g8, x, phi8, 1, k, c.budget), want));
    }
    c.add("N=8 exhaustive k=" + std::to_string(k) + " equals 2^{-4k}", worst, 1e-12);
  }

  const auto g16 = GroupSpec::make({16});
  const auto tp = find_tuples(fam, g16, c);
  double exact_bad = 0, exact_good = 0;
  for (std::size_t k = 1; k <= 2; ++k) {
    const auto pred = predicted_probs(4, 1, double(k), th1);
    const double pb = exact_tuple_probability(g16, tp.bad, tp.phi, 1, k, c.budget);
    const double pg = exact_tuple_probability(g16, tp.good, tp.phi, 1, k, c.budget);
    c.add("N=16 bad tuple exhaustive k=" + std::to_string(k), rel(pb, pred.bad_exact), 1e-12);
    c.add("N=16 good tuple >= bound k=" + std::to_string(k), std::max(0.0, pred.good_lower - pg),
          1e-15, "p=" + std::to_string(pg));
    exact_bad = pb;
    exact_good = pg;
  }

  const int seeds = 10000;
  int hb = 0, hg = 0;
  const auto w = full_windows(g16, 4);
  for (int s = 0; s < seeds; ++s) {
    const auto sel = draw_selection(w, tp.phi, 1, {2, c.draw(1000 + s)});
    hb += in_product(sel, tp.bad);
    hg += in_product(sel, tp.good);
  }
  auto z = [&](int hits, double p) {
    return std::abs(double(hits) / seeds - p) / std::sqrt(p * (1 - p) / seeds);
  };
  c.add("Monte Carlo bad tuple, standard errors", z(hb, exact_bad), 3.0);
  c.add("Monte Carlo good tuple, standard errors", z(hg, exact_good), 3.0);
}

void increment(Ctx& c) {
  const auto fam = derive_families(cube_system(2));
  TupleKernel unit = [](std::span<const Index>, std::span<const Index>) { return Complex{1, 0}; };
  auto audit = [&](const IncrementTrace& tr, bool unit_kernel, const std::string& name) {
    bool conserved = true, levels = tr.records.front().level == 0, equal = true;
    double worst = 0;
    for (std::size_t i = 0; i < tr.records.size(); ++i) {
      const auto& r = tr.records[i];
      if (unit_kernel) equal = equal && r.sigma_abs_total == r.tau;
      if (i == 0) continue;
      const auto& p = tr.records[i - 1];
      worst = std::max(worst, std::abs(r.tau + r.removed_tau - p.tau));
      conserved = conserved && r.conserved;
      levels = levels && r.level == p.level + 1;
    }
    c.add(name + " conservation", worst, 0.0, std::to_string(tr.records.size() - 1) + " steps");
    c.flag(name + " conserved flags", conserved);
    c.flag(name + " level +1 per step", levels);
    if (unit_kernel) c.flag(name + " sigma = tau", equal);
  };
  for (Index n : {5u, 8u}) {
    const auto g = GroupSpec::make({n});
    const auto phi = uniform_maps(random_map(g, c, 400 + n), 4);
    const auto tr = increment_loop(unit, phi, fam, full_windows(g, 4), ConstraintSet{},
                                   {2, 6, 0.0, c.draw(410 + n)}, c.budget);
    audit(tr, true, "f=1 " + tag(n));
  }
  const auto g16 = GroupSpec::make({16});
  const auto kernel = skew_sigma1_kernel(g16);
  const auto id = uniform_maps(build_map(g16, "identity"), 4);
  audit(increment_loop(kernel, id, fam, full_windows(g16, 4), ConstraintSet{},
                       {3, 10, 0.0, c.draw(420)}, c.budget),
        false, "skew identity N=16");
  const auto rnd = uniform_maps(random_map(g16, c, 421), 4);
  audit(increment_loop(kernel, rnd, fam, full_windows(g16, 4), ConstraintSet{},
                       {3, 10, 0.0, c.draw(422)}, c.budget),
        false, "skew random map N=16");
}

void bounds(Ctx& c) {
  BoundParams p;
  p.l = 4;
  p.m = 1;
  p.N = 4096;
  p.eps = 1e-6;
  for (const auto kind : {BoundKind::kTheorem, BoundKind::kCorRectT1}) {
    const auto r = bound_eval(p, kind);
    const std::string k = to_string(kind);
    c.flag(k + " prefactor 3^4", r.shape.at("prefactor_log3") == 4);
    c.flag(k + " exponent 2^-21", r.shape.at("exponent1_log2") == -21);
    c.flag(k + " exponent 2^-18", r.shape.at("exponent2_log2") == -18);
    c.flag(k + " inner base 2^8", r.shape.at("inner_base_log2") == 8);
  }
  int total = 0, vacuous = 0;
  for (int ln = 1; ln <= 20; ++ln) {
    p.N = std::exp2(ln);
    for (int le = -1; le <= 20; ++le) {
      p.log2_inv_eps = le < 0 ? 1e-9 : std::exp2(le);
      for (const auto kind : {BoundKind::kTheorem, BoundKind::kCorRectT1}) {
        const auto r = bound_eval(p, kind);
        ++total;
        vacuous += r.vacuous;
        for (const auto& v : r.variants) {
          ++total;
          vacuous += v.vacuous;
        }
      }
    }
  }
  c.add("vacuity on N <= 2^20, eps >= 2^{-2^20}", double(total - vacuous), 0.0,
        std::to_string(vacuous) + "/" + std::to_string(total) + " flagged");

  const auto g = GroupSpec::make({64});
  double worst = -1e300;
  int cases = 0, bad_shape = 0;
  for (std::size_t P = 1; P <= 64; ++P) {
    for (std::size_t t = 1; t <= P; ++t) {
      const auto s = ap_smooth(g, P, t);
      worst = std::max(worst, s.spectral_l1 / s.spectral_bound - 1.0);
      const bool range = std::all_of(s.W.begin(), s.W.end(), [](double w) { return w >= -1e-12 && w <= 1 + 1e-12; });
      bad_shape += !(range && std::abs(s.sum_W - double(P)) < 1e-9 && s.deviation_points <= 2 * t);
      ++cases;
    }
  }
  c.add("AP smoothing spectral bound on Z_64", std::max(0.0, worst), 1e-12,
        std::to_string(cases) + " (P_len, t_len) pairs, max ratio - 1 = " + std::to_string(worst));
  c.flag("AP smoothing W in [0,1], sum W = |P|, <= 2t deviations", bad_shape == 0);
}

void counterexamples(Ctx& c) {
  for (Index n : {3u, 5u, 8u, 12u}) {
    const auto g = GroupSpec::make({n});
    const double nn = n;
    const auto k = build_map(g, "const:" + std::to_string(n / 2));
    c.add("const rectangular U2 = 1 " + tag(n), std::abs(gowers_norm(phase_function(k), c.budget).value - 1.0), 1e-12);
    c.add("const skew calU2 = N^4 " + tag(n),
          rel(calU_norm(compose_skew(k, 1, SkewKind::kF), c.budget), nn * nn * nn * nn), 1e-12);
    const auto id = build_map(g, "identity");
    c.add("identity rectangular U2 = N^{-1/4} " + tag(n),
          std::abs(gowers_norm(phase_function(id), c.budget).value - std::pow(nn, -0.25)), 1e-12);
    c.add("identity t=2 cube count = N^4 " + tag(n),
          std::abs(double(cube_count(id, 2, NormMethod::kNaive, c.budget).count) - nn * nn * nn * nn), 0.0);
  }
  const int shapes[3][3] = {{2, 1, 1}, {2, 0, 1}, {2, 1, 0}};
  for (Index n = 2; n <= 6; ++n) {
    const auto g = GroupSpec::make({n});
    const auto a = random_map(g, c, 500 + n);
    for (const auto& s : shapes) {
      const double u = rst_probe(a, s[0], s[1], s[2], c.budget).value;
      c.add("r=2 probe (r,s,t)=(" + std::to_string(s[0]) + "," + std::to_string(s[1]) + "," +
                std::to_string(s[2]) + ") " + tag(n),
            std::abs(u - 1.0), 1e-12);
    }
  }
}

using SuiteFn = void (*)(Ctx&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r{
      {"fiber-identity", fiber_identity},
      {"cube-count", cube_count_identity},
      {"sigma-representation", sigma_representation},
      {"norm-methods", norm_methods},
      {"norm-axioms", norm_axioms},
      {"families", families},
      {"selection", selection},
      {"increment", increment},
      {"bounds", bounds},
      {"counterexamples", counterexamples},
  };
  return r;
}

}  // namespace

std::size_t SuiteReport::failures() const {
  return std::size_t(std::count_if(checks.begin(), checks.end(), [](const auto& c) { return !c.pass; }));
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

SuiteReport run_verify(std::string_view suite, std::uint64_t seed, double budget) {
  const auto& r = registry();
  const auto it = std::find_if(r.begin(), r.end(), [&](const auto& e) { return e.first == suite; });
  if (it == r.end()) fail(ErrorKind::kUsage, "unknown suite '" + std::string(suite) + "'");
  SuiteReport report;
  report.suite = it->first;
  report.seed = seed;
  Ctx ctx{seed, budget, &report};
  const auto t0 = std::chrono::steady_clock::now();
  it->second(ctx);
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report.pass = report.failures() == 0 && !report.checks.empty();
  return report;
}

std::string report_json(const SuiteReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"residual", c.residual},
                      {"tolerance", c.tolerance},
                      {"pass", c.pass},
                      {"detail", c.detail}});
  }
  nlohmann::json j = {{"schema", kVerifySchema}, {"suite", r.suite},     {"seed", r.seed},
                      {"pass", r.pass},          {"seconds", r.seconds}, {"checks", checks}};
  return j.dump(2);
}

}  // namespace gowlab::lab
