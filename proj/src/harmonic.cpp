#include "gowlab/harmonic.hpp"

#include <string>

#include "gowlab/error.hpp"
#include "gowlab/reduce.hpp"

namespace gowlab {
namespace {

void check_length(const GroupSpec& g, std::size_t n, const char* what) {
  if (n != g.order()) {
    fail(ErrorKind::kDomain, std::string(what) + ": table length " + std::to_string(n) +
                                 " does not match group order " + std::to_string(g.order()));
  }
}

std::size_t smallest_factor(std::size_t n) {
  for (std::size_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) return p;
  }
  return n;
}

// Roots of unity of a fixed order n0; entry k is e(sign * k / n0).
struct RootTable {
  std::vector<Complex> roots;
  Complex at(std::size_t k) const { return roots[k % roots.size()]; }
};

RootTable make_roots(std::size_t n, bool inverse) {
  RootTable t;
  t.roots.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Complex w = unit_root(k, n);
    t.roots[k] = inverse ? w : std::conj(w);
  }
  return t;
}

// out[k] = sum_x in[x * stride] * w^{k x step}, w the root of order n0.
void transform_rec(const Complex* in, std::size_t stride, Complex* out, std::size_t n,
                   std::size_t step, const RootTable& roots, std::vector<Complex>& scratch) {
  if (n == 1) {
    out[0] = in[0];
    return;
  }
  const std::size_t p = smallest_factor(n);
  const std::size_t q = n / p;
  if (q > 1) {
    for (std::size_t r = 0; r < p; ++r) {
      transform_rec(in + r * stride, stride * p, out + r * q, q, step * p, roots, scratch);
    }
  } else {
    for (std::size_t r = 0; r < p; ++r) out[r] = in[r * stride];
  }
  // out[r*q + j] now holds the length-q transform of the r-th coset.
  scratch.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    PairwiseSum<Complex> acc;
    const std::size_t j = k % q;
    for (std::size_t r = 0; r < p; ++r) {
      acc.add(roots.at((k * r % n) * step) * out[r * q + j]);
    }
    scratch[k] = acc.total();
  }
  std::copy(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(n), out);
}

// Applies the one-dimensional transform along every factor axis.
std::vector<Complex> separable_transform(const GroupSpec& g, std::span<const Complex> f,
                                         bool inverse) {
  std::vector<Complex> data(f.begin(), f.end());
  std::size_t stride = g.order();
  std::vector<Complex> line, line_out, scratch;
  for (const std::uint32_t n : g.orders()) {
    stride /= n;
    if (n == 1) continue;
    const RootTable roots = make_roots(n, inverse);
    line.resize(n);
    line_out.resize(n);
    const std::size_t block = stride * n;
    for (std::size_t base = 0; base < data.size(); base += block) {
      for (std::size_t off = 0; off < stride; ++off) {
        for (std::size_t i = 0; i < n; ++i) line[i] = data[base + off + i * stride];
        transform_rec(line.data(), 1, line_out.data(), n, 1, roots, scratch);
        for (std::size_t i = 0; i < n; ++i) data[base + off + i * stride] = line_out[i];
      }
    }
  }
  return data;
}

}  // namespace

Spectrum dft(const GroupSpec& g, std::span<const Complex> f) {
  check_length(g, f.size(), "dft");
  return Spectrum{g, separable_transform(g, f, false)};
}

std::vector<Complex> inverse_dft(const GroupSpec& g, const Spectrum& spectrum) {
  check_length(g, spectrum.values.size(), "inverse_dft");
  if (!(spectrum.group == g)) fail(ErrorKind::kDomain, "inverse_dft: spectrum of another group");
  auto out = separable_transform(g, spectrum.values, true);
  const double scale = 1.0 / static_cast<double>(g.order());
  for (auto& v : out) v *= scale;
  return out;
}

Spectrum dft_direct(const GroupSpec& g, std::span<const Complex> f) {
  check_length(g, f.size(), "dft_direct");
  const Index n = g.order();
  std::vector<Complex> out(n);
  for (Index xi = 0; xi < n; ++xi) {
    PairwiseSum<Complex> acc;
    for (Index x = 0; x < n; ++x) acc.add(f[x] * std::conj(g.character(xi, x)));
    out[xi] = acc.total();
  }
  return Spectrum{g, std::move(out)};
}

std::vector<Complex> convolve(const GroupSpec& g, std::span<const Complex> f,
                              std::span<const Complex> h) {
  check_length(g, f.size(), "convolve");
  check_length(g, h.size(), "convolve");
  const Index n = g.order();
  std::vector<Complex> out(n);
  for (Index x = 0; x < n; ++x) {
    PairwiseSum<Complex> acc;
    for (Index y = 0; y < n; ++y) acc.add(f[y] * h[g.sub(x, y)]);
    out[x] = acc.total();
  }
  return out;
}

}  // namespace gowlab
