#pragma once

#include <span>
#include <vector>

#include "gowlab/group.hpp"

namespace gowlab {

/// Fourier coefficients indexed by characters, which share the flat index
/// space of the group.
struct Spectrum {
  GroupSpec group;
  std::vector<Complex> values;
};

/// hat f(xi) = sum_x f(x) e(-xi . x). Separable over cyclic factors; each
/// factor uses a mixed-radix transform, which degrades to O(n^2) for a
/// prime factor.
Spectrum dft(const GroupSpec& g, std::span<const Complex> f);

/// f(x) = (1/N) sum_xi F(xi) e(xi . x).
std::vector<Complex> inverse_dft(const GroupSpec& g, const Spectrum& spectrum);

/// Direct O(N^2) evaluation of the forward transform.
Spectrum dft_direct(const GroupSpec& g, std::span<const Complex> f);

/// (f * h)(x) = sum_y f(y) h(x - y), by the definition.
std::vector<Complex> convolve(const GroupSpec& g, std::span<const Complex> f,
                              std::span<const Complex> h);

}  // namespace gowlab
