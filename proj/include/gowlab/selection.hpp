#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gowlab/linsys.hpp"

namespace gowlab {

/// Counter-based stream: a splitmix64 hash of (seed, tag, a, b).
std::uint64_t stream_hash(std::uint64_t seed, std::uint64_t tag, std::uint64_t a, std::uint64_t b);
/// Uniform in [0, n) from a hash, by multiply-shift.
Index bounded_draw(std::uint64_t h, Index n);
/// Uniform in [0, 1) with 53 random bits.
double unit_draw(std::uint64_t h);

/// Frequencies for k rounds: r_i, s_i and m - 1 streams w^{(q)}_i.
struct SelectionSamples {
  std::vector<Index> r, s;
  std::vector<std::vector<Index>> w;  ///< w[q][i]

  std::size_t rounds() const noexcept { return r.size(); }
};

/// Round i, slot q (0 = r, 1 = s, 2 + q' = w^{(q')}) comes from (seed, i, q).
SelectionSamples sample_rounds(const GroupSpec& g, std::size_t m, std::size_t k,
                               std::uint64_t seed);

/// 2^{-mk} prod_i (1 + cs(r_i x + s_i phi_x)) prod_q (1 + cs(w^{(q)}_i x)),
/// cs being the real part of the character.
double inclusion_probability(const GroupSpec& g, Index x, Index phi_x,
                             const SelectionSamples& samples);

struct PredictedProbs {
  double bad_exact = 1.0;
  double good_lower = 1.0;
  double bad_log2 = 0.0;
  double good_log2 = 0.0;
};

/// 2^{-lmk} (1 + theta1 2^{-l(m-1)})^k and
/// 2^{-lmk} (1 + theta1 2^{-l(m-1)} + 2^{-(l-1)})^k.
PredictedProbs predicted_probs(double l, double m, double k, double theta1);

/// Exact probability that every x_j of the tuple is kept, averaging over all
/// (r, s, w) in G^{(m+1)k}. Throws CostError above the budget.
double exact_tuple_probability(const GroupSpec& g, std::span<const Index> x, const MapList& phi,
                               std::size_t m, std::size_t k, double budget = 1e8);

/// E p(x) over all samples, exactly.
double expected_inclusion(const GroupSpec& g, Index x, Index phi_x, std::size_t m, std::size_t k,
                          double budget = 1e8);

struct SelectionParams {
  std::size_t k = 1;
  std::uint64_t seed = 0;
};

/// B'_j: each x in B_j kept when unit_draw(seed, j, x) < p_j(x). Bit-identical
/// for every worker count.
Windows draw_selection(const Windows& windows, const MapList& phi, std::size_t m,
                       const SelectionParams& params);

struct SelectionOutcome {
  Windows selected;
  ClassCounts before;  ///< classes in (prod B_j) intersected with C
  ClassCounts after;   ///< classes in (prod B'_j) intersected with C; X = good, Y = bad
  PredictedProbs predicted;
  SelectionSamples samples;
};

SelectionOutcome run_selection(const Windows& windows, const MapList& phi, const Families& fam,
                               const SelectionParams& params, const ConstraintSet& c = {},
                               double budget = kDefaultTermBudget);

struct LoopParams {
  std::size_t k = 1;
  std::size_t max_steps = 10;
  double alpha_threshold = 0.0;  ///< stop once sigma < threshold * tau
  std::uint64_t seed = 0;
};

struct IncrementRecord {
  std::size_t step = 0;
  std::size_t level = 0;
  double sigma_re = 0.0;        ///< real part of the signed sum over systems
  double sigma_abs_total = 0.0; ///< sigma_f
  double tau = 0.0;             ///< tau_f(B; C) at this level
  std::uint64_t good = 0;       ///< good tuples in B' (B for step 0) within C
  std::uint64_t bad = 0;
  double alpha = 0.0;           ///< sigma_f / tau_f
  std::uint64_t seed = 0;
  double removed_tau = 0.0;     ///< tau_f(B'; C_prev)
  double zeta_observed = 0.0;   ///< removed_tau / tau_prev
  double omega_observed = 0.0;  ///< tau / (|S| N^{l-m})
  bool conserved = true;        ///< tau + removed_tau == tau_prev
};

struct IncrementTrace {
  std::vector<IncrementRecord> records;
  std::string stop_reason;
};

/// Repeated selection with C <- ((prod B) \ (prod B')) intersected with C;
/// a measurement, no guarantee is implied for desk-scale k.
IncrementTrace increment_loop(const TupleKernel& f, const MapList& phi, const Families& fam,
                              const Windows& windows, const ConstraintSet& c0,
                              const LoopParams& params, double budget = kDefaultTermBudget);

inline constexpr const char* kTraceSchema = "gowlab.trace/1";

/// One JSON object per record.
void write_trace_jsonl(std::ostream& out, const IncrementTrace& trace);

}  // namespace gowlab
