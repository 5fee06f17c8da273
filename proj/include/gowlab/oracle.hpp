#pragma once

// Literal brute-force versions of the counting machinery. They share no code
// with the fast paths beyond group arithmetic and the exact rank routine.

#include <cmath>
#include <vector>

#include "gowlab/linsys.hpp"

namespace gowlab::oracle {

/// All {0,+-1}^l vectors in the row space, by one rank test each.
inline std::vector<IntRow> equation_family(const LinSystem& sys) {
  const std::size_t l = sys.l;
  std::vector<IntRow> out;
  IntRow v(l, -1);
  while (true) {
    if (in_row_space(sys, v)) out.push_back(v);
    std::size_t k = 0;
    while (k < l && ++v[k] == 2) v[k++] = -1;
    if (k == l) break;
  }
  return out;
}

inline Index oracle_dot(const GroupSpec& g, const IntRow& v, const std::vector<Index>& x) {
  std::int64_t acc = 0;
  for (std::size_t j = 0; j < v.size(); ++j) acc += v[j] * std::int64_t(x[j]);
  // only valid for cyclic groups, which is all the oracle is used with
  const std::int64_t n = g.order();
  return static_cast<Index>(((acc % n) + n) % n);
}

/// Per-class counts over every tuple of G^l in the windows and C.
/// Cyclic groups only.
inline ClassCounts class_counts(const LinSystem& sys, const GroupSpec& g, const MapList& phi,
                                const Windows& windows, const ConstraintSet& c) {
  const std::size_t l = sys.l;
  const Index n = g.order();
  const auto family = equation_family(sys);
  ClassCounts counts;
  std::vector<Index> x(l, 0), px(l);
  while (true) {
    bool additive = in_product(windows, x) && c.contains(x);
    for (const auto& row : sys.rows) additive = additive && oracle_dot(g, row, x) == 0;
    if (additive) {
      ++counts.additive;
      bool degenerate = false;
      IntRow eta(l, -1);
      while (!degenerate) {
        bool zero = true;
        for (int e : eta) zero = zero && e == 0;
        if (!zero && oracle_dot(g, eta, x) == 0 && !in_row_space(sys, eta)) degenerate = true;
        std::size_t k = 0;
        while (k < l && ++eta[k] == 2) eta[k++] = -1;
        if (k == l) break;
      }
      if (degenerate) {
        ++counts.degenerate;
      } else {
        for (std::size_t j = 0; j < l; ++j) px[j] = phi[j](x[j]);
        bool good = false;
        for (const auto& e : family) {
          bool zero = true;
          for (int v : e) zero = zero && v == 0;
          if (!zero && oracle_dot(g, e, x) == 0 && oracle_dot(g, e, px) == 0) good = true;
        }
        if (good) {
          ++counts.good;
        } else {
          ++counts.bad;
        }
      }
    }
    std::size_t k = 0;
    while (k < l && ++x[k] == n) x[k++] = 0;
    if (k == l) break;
  }
  return counts;
}

/// 2^{#zeros} summed over the family.
inline double theta_sum(const std::vector<IntRow>& family) {
  double s = 0;
  for (const auto& e : family) {
    int zeros = 0;
    for (int v : e) zeros += v == 0;
    s += std::ldexp(1.0, zeros);
  }
  return s;
}

}  // namespace gowlab::oracle
