#include "gowlab/selection.hpp"

#include <cmath>
#include <ostream>

#include "gowlab/error.hpp"
#include "gowlab/reduce.hpp"
#include "json.hpp"

namespace gowlab {

namespace {

constexpr std::uint64_t kRoundTag = 1;
constexpr std::uint64_t kMemberTag = 2;
constexpr std::uint64_t kStepTag = 3;

std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double cs(const GroupSpec& g, std::uint64_t numerator) { return g.root(numerator).real(); }

// All samples for the digit vector (r_1, s_1, w_1.., r_2, ...).
void fill_samples(std::span<const Index> digits, std::size_t m, std::size_t k,
                  SelectionSamples& s) {
  for (std::size_t i = 0; i < k; ++i) {
    s.r[i] = digits[i * (m + 1)];
    s.s[i] = digits[i * (m + 1) + 1];
    for (std::size_t q = 0; q + 1 < m; ++q) s.w[q][i] = digits[i * (m + 1) + 2 + q];
  }
}

template <typename Fn>
double average_over_samples(const GroupSpec& g, std::size_t m, std::size_t k, double budget,
                            Fn&& value) {
  const std::size_t slots = (m + 1) * k;
  charge(std::pow(double(g.order()), double(slots)), budget, "exhaustive sample average");
  SelectionSamples s;
  s.r.assign(k, 0);
  s.s.assign(k, 0);
  s.w.assign(m > 0 ? m - 1 : 0, std::vector<Index>(k, 0));
  std::vector<Index> digits(slots, 0);
  PairwiseSum<double> acc;
  while (true) {
    fill_samples(digits, m, k, s);
    acc.add(value(s));
    std::size_t d = 0;
    while (d < slots && ++digits[d] == g.order()) digits[d++] = 0;
    if (d == slots) break;
  }
  return acc.total() / double(acc.count());
}

}  // namespace

std::uint64_t stream_hash(std::uint64_t seed, std::uint64_t tag, std::uint64_t a, std::uint64_t b) {
  return splitmix(splitmix(splitmix(splitmix(seed) ^ tag) + a) ^ (b * 0xd6e8feb86659fd93ULL));
}

Index bounded_draw(std::uint64_t h, Index n) {
  return static_cast<Index>((static_cast<unsigned __int128>(h) * n) >> 64);
}

double unit_draw(std::uint64_t h) { return double(h >> 11) * 0x1.0p-53; }

SelectionSamples sample_rounds(const GroupSpec& g, std::size_t m, std::size_t k,
                               std::uint64_t seed) {
  if (m == 0) fail(ErrorKind::kDomain, "need m >= 1");
  SelectionSamples s;
  s.w.assign(m - 1, std::vector<Index>(k));
  for (std::size_t i = 0; i < k; ++i) {
    s.r.push_back(bounded_draw(stream_hash(seed, kRoundTag, i, 0), g.order()));
    s.s.push_back(bounded_draw(stream_hash(seed, kRoundTag, i, 1), g.order()));
    for (std::size_t q = 0; q + 1 < m; ++q) {
      s.w[q][i] = bounded_draw(stream_hash(seed, kRoundTag, i, 2 + q), g.order());
    }
  }
  return s;
}

double inclusion_probability(const GroupSpec& g, Index x, Index phi_x,
                             const SelectionSamples& samples) {
  const std::size_t k = samples.rounds();
  const std::size_t m = samples.w.size() + 1;
  double p = 1.0;
  for (std::size_t i = 0; i < k; ++i) {
    const std::uint64_t u = g.pairing(samples.r[i], x) + g.pairing(samples.s[i], phi_x);
    p *= 1.0 + cs(g, u);
    for (const auto& wq : samples.w) p *= 1.0 + cs(g, g.pairing(wq[i], x));
  }
  return std::ldexp(p, -int(m * k));
}

PredictedProbs predicted_probs(double l, double m, double k, double theta1) {
  if (theta1 < 0) fail(ErrorKind::kDomain, "theta1 must be >= 0");
  PredictedProbs p;
  const double base = 1.0 + theta1 * std::exp2(-l * (m - 1));
  p.bad_log2 = -l * m * k + k * std::log2(base);
  p.good_log2 = -l * m * k + k * std::log2(base + std::exp2(-(l - 1)));
  p.bad_exact = std::exp2(p.bad_log2);
  p.good_lower = std::exp2(p.good_log2);
  return p;
}

double exact_tuple_probability(const GroupSpec& g, std::span<const Index> x, const MapList& phi,
                               std::size_t m, std::size_t k, double budget) {
  if (phi.size() != x.size()) fail(ErrorKind::kDomain, "need one map per coordinate");
  return average_over_samples(g, m, k, budget, [&](const SelectionSamples& s) {
    double p = 1.0;
    for (std::size_t j = 0; j < x.size(); ++j) p *= inclusion_probability(g, x[j], phi[j](x[j]), s);
    return p;
  });
}

double expected_inclusion(const GroupSpec& g, Index x, Index phi_x, std::size_t m, std::size_t k,
                          double budget) {
  return average_over_samples(g, m, k, budget, [&](const SelectionSamples& s) {
    return inclusion_probability(g, x, phi_x, s);
  });
}

Windows draw_selection(const Windows& windows, const MapList& phi, std::size_t m,
                       const SelectionParams& params) {
  if (phi.size() != windows.size()) fail(ErrorKind::kDomain, "need one map per window");
  const GroupSpec& g = phi.at(0).group;
  const auto samples = sample_rounds(g, m, params.k, params.seed);
  Windows out(windows.size(), Subset::empty(g.order()));
  parallel_for(windows.size(), [&](std::size_t j) {
    for (Index x : windows[j].elements()) {
      const double p = inclusion_probability(g, x, phi[j](x), samples);
      if (unit_draw(stream_hash(params.seed, kMemberTag, j, x)) < p) out[j].insert(x);
    }
  });
  return out;
}

SelectionOutcome run_selection(const Windows& windows, const MapList& phi, const Families& fam,
                               const SelectionParams& params, const ConstraintSet& c,
                               double budget) {
  SelectionOutcome out;
  const std::size_t m = fam.base.m();
  out.samples = sample_rounds(phi.at(0).group, m, params.k, params.seed);
  out.selected = draw_selection(windows, phi, m, params);
  out.before = enumerate_solutions(fam, phi, windows, c, {}, budget).counts;
  out.after = enumerate_solutions(fam, phi, out.selected, c, {}, budget).counts;
  out.predicted = predicted_probs(double(fam.base.l), double(m), double(params.k), fam.stats.theta1);
  return out;
}

IncrementTrace increment_loop(const TupleKernel& f, const MapList& phi, const Families& fam,
                              const Windows& windows, const ConstraintSet& c0,
                              const LoopParams& params, double budget) {
  IncrementTrace trace;
  const GroupSpec& g = phi.at(0).group;
  const double full =
      fam.S.ordered_count * std::pow(double(g.order()), double(fam.solver.free.size()));

  auto measure = [&](const ConstraintSet& c, IncrementRecord& rec) {
    const auto st = sigma_tau(f, phi, fam, windows, c, budget);
    rec.level = c.level();
    rec.sigma_re = st.sigma_signed.real();
    rec.sigma_abs_total = st.sigma_total;
    rec.tau = st.tau_total;
    rec.alpha = st.tau_total > 0 ? st.sigma_total / st.tau_total : 0.0;
    rec.omega_observed = full > 0 ? st.tau_total / full : 0.0;
  };

  ConstraintSet c = c0;
  IncrementRecord first;
  first.seed = params.seed;
  measure(c, first);
  const auto counts0 = enumerate_solutions(fam, phi, windows, c, {}, budget).counts;
  first.good = counts0.good;
  first.bad = counts0.bad;
  trace.records.push_back(first);

  for (std::size_t step = 1;; ++step) {
    const IncrementRecord& prev = trace.records.back();
    if (step > params.max_steps) {
      trace.stop_reason = "max_steps";
      break;
    }
    if (prev.tau == 0) {
      trace.stop_reason = "tau_zero";
      break;
    }
    if (prev.sigma_abs_total < params.alpha_threshold * prev.tau) {
      trace.stop_reason = "alpha_threshold";
      break;
    }
    IncrementRecord rec;
    rec.step = step;
    rec.seed = stream_hash(params.seed, kStepTag, step, 0);
    const Windows chosen = draw_selection(windows, phi, fam.base.m(), {params.k, rec.seed});
    const auto removed = sigma_tau(f, phi, fam, chosen, c, budget);
    const auto counts = enumerate_solutions(fam, phi, chosen, c, {}, budget).counts;
    const double tau_prev = prev.tau;
    c = c.refine(windows, chosen);
    measure(c, rec);
    rec.good = counts.good;
    rec.bad = counts.bad;
    rec.removed_tau = removed.tau_total;
    rec.zeta_observed = rec.removed_tau / tau_prev;
    rec.conserved = rec.tau + rec.removed_tau == tau_prev;
    trace.records.push_back(rec);
  }
  return trace;
}

void write_trace_jsonl(std::ostream& out, const IncrementTrace& trace) {
  for (const auto& r : trace.records) {
    nlohmann::json j = {{"schema", kTraceSchema},
                        {"step", r.step},
                        {"level", r.level},
                        {"sigma_re", r.sigma_re},
                        {"sigma_abs_total", r.sigma_abs_total},
                        {"tau", r.tau},
                        {"good", r.good},
                        {"bad", r.bad},
                        {"alpha", r.alpha},
                        {"seed", r.seed},
                        {"removed_tau", r.removed_tau},
                        {"zeta_observed", r.zeta_observed},
                        {"omega_observed", r.omega_observed},
                        {"conserved", r.conserved}};
    out << j.dump() << '\n';
  }
}

}  // namespace gowlab
