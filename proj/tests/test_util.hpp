#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "gowlab/group.hpp"
#include "gowlab/multifunction.hpp"

namespace gowlab::testing {

inline std::vector<Complex> random_complex(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  std::vector<Complex> out(n);
  for (auto& v : out) v = {dist(rng), dist(rng)};
  return out;
}

/// Unit-modulus values e(u), u uniform in [0,1).
inline std::vector<Complex> random_phases(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  std::vector<Complex> out(n);
  for (auto& v : out) v = std::polar(1.0, 2.0 * std::numbers::pi * dist(rng));
  return out;
}

inline std::vector<Complex> random_signs(std::size_t n, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  std::vector<Complex> out(n);
  for (auto& v : out) v = coin(rng) ? 1.0 : -1.0;
  return out;
}

/// Values in the closed unit disk.
inline std::vector<Complex> random_disk(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> radius(0.0, 1.0);
  auto out = random_phases(n, rng);
  for (auto& v : out) v *= radius(rng);
  return out;
}

inline MultiFunction random_function(const GroupSpec& g, std::size_t d, std::mt19937_64& rng) {
  return MultiFunction::from_table(g, d, random_disk(domain_size(g, d), rng));
}

inline ArithMap random_map(const GroupSpec& g, std::mt19937_64& rng) {
  std::uniform_int_distribution<Index> pick(0, g.order() - 1);
  std::vector<Index> table(g.order());
  for (auto& v : table) v = pick(rng);
  return make_map(g, std::move(table));
}

inline ArithMap identity_map(const GroupSpec& g) {
  std::vector<Index> table(g.order());
  for (Index x = 0; x < g.order(); ++x) table[x] = x;
  return make_map(g, std::move(table));
}

inline double rel_err(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

}  // namespace gowlab::testing

namespace gowlab::testing {

/// Literal cube sum: a 2d-digit counter over (x, x') and a fresh evaluation
/// of all 2^d vertices per term.
inline Complex brute_cube_sum(const MultiFunction& f) {
  const std::size_t d = f.arity();
  const Index n = f.group().order();
  std::vector<Index> digits(2 * d, 0);
  std::vector<Index> vertex(d);
  Complex total{0, 0};
  while (true) {
    Complex term{1, 0};
    for (std::size_t w = 0; w < (std::size_t{1} << d); ++w) {
      int parity = 0;
      for (std::size_t i = 0; i < d; ++i) {
        const bool bit = (w >> i) & 1;
        vertex[i] = bit ? digits[d + i] : digits[i];
        parity += bit;
      }
      const Complex v = f(vertex);
      term *= (parity % 2) ? std::conj(v) : v;
    }
    total += term;
    std::size_t k = 0;
    while (k < 2 * d && ++digits[k] == n) digits[k++] = 0;
    if (k == 2 * d) break;
  }
  return total;
}

inline double brute_norm(const MultiFunction& f) {
  const double terms = std::pow(double(f.group().order()), 2.0 * f.arity());
  return std::pow(std::max(0.0, brute_cube_sum(f).real()) / terms,
                  1.0 / std::ldexp(1.0, int(f.arity())));
}

}  // namespace gowlab::testing
