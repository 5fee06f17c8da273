#include "gowlab/lab/catalog.hpp"

#include <charconv>
#include <cmath>
#include <random>

#include "gowlab/error.hpp"
#include "gowlab/harmonic.hpp"
#include "gowlab/selection.hpp"

namespace gowlab::lab {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t p = s.find(sep, start);
    out.push_back(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

std::uint64_t parse_u64(std::string_view text, std::string_view spec) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    if (!text.empty() && text[0] == '-') {
      fail(ErrorKind::kDomain, "map spec '" + std::string(spec) + "': parameter must be >= 0");
    }
    fail(ErrorKind::kParse, "map spec '" + std::string(spec) + "': bad integer '" +
                                std::string(text) + "'");
  }
  return v;
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t n) {
  std::uint64_t r = 1 % n;
  b %= n;
  while (e) {
    if (e & 1) r = r * b % n;
    b = b * b % n;
    e >>= 1;
  }
  return r;
}

std::vector<Index> shuffled(Index n, std::mt19937_64& rng) {
  std::vector<Index> v(n);
  for (Index i = 0; i < n; ++i) v[i] = i;
  for (Index i = n; i-- > 1;) std::swap(v[i], v[bounded_draw(rng(), i + 1)]);
  return v;
}

void need_cyclic(const GroupSpec& g, const char* what) {
  if (!g.is_cyclic()) fail(ErrorKind::kDomain, std::string(what) + " needs a cyclic group");
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) return false;
  }
  return true;
}

MapSpec MapSpec::parse(std::string_view text) {
  const auto parts = split(text, ':');
  const std::string_view head = parts[0];
  auto arity = [&](std::size_t n) {
    if (parts.size() != n + 1) {
      fail(ErrorKind::kParse, "map spec '" + std::string(text) + "' expects " + std::to_string(n) +
                                  " parameter(s)");
    }
  };
  MapSpec s;
  if (head == "const") {
    arity(1);
    s.kind = Kind::kConst;
    s.value = parse_u64(parts[1], text);
  } else if (head == "identity") {
    arity(0);
    s.kind = Kind::kIdentity;
  } else if (head == "pow") {
    arity(1);
    s.kind = Kind::kPow;
    s.value = parse_u64(parts[1], text);
  } else if (head == "inv") {
    arity(0);
    s.kind = Kind::kInv;
  } else if (head == "inv-nonzero") {
    arity(0);
    s.kind = Kind::kInvNonzero;
  } else if (head == "randmap" || head == "randbij") {
    arity(1);
    s.kind = head == "randmap" ? Kind::kRandMap : Kind::kRandBij;
    s.seed = parse_u64(parts[1], text);
  } else if (head == "ktoone") {
    arity(2);
    s.kind = Kind::kKToOne;
    s.value = parse_u64(parts[1], text);
    s.seed = parse_u64(parts[2], text);
    if (s.value == 0) fail(ErrorKind::kDomain, "ktoone needs K >= 1");
  } else {
    fail(ErrorKind::kParse, "unknown map '" + std::string(text) + "'");
  }
  return s;
}

std::string MapSpec::to_string() const {
  switch (kind) {
    case Kind::kConst: return "const:" + std::to_string(value);
    case Kind::kIdentity: return "identity";
    case Kind::kPow: return "pow:" + std::to_string(value);
    case Kind::kInv: return "inv";
    case Kind::kInvNonzero: return "inv-nonzero";
    case Kind::kRandMap: return "randmap:" + std::to_string(seed);
    case Kind::kRandBij: return "randbij:" + std::to_string(seed);
    case Kind::kKToOne: return "ktoone:" + std::to_string(value) + ":" + std::to_string(seed);
  }
  return "?";
}

ArithMap build_map(const GroupSpec& g, const MapSpec& spec) {
  const Index n = g.order();
  std::vector<Index> t(n);
  std::mt19937_64 rng(spec.seed);
  switch (spec.kind) {
    case MapSpec::Kind::kConst:
      if (spec.value >= n) fail(ErrorKind::kDomain, "const value outside the group");
      for (auto& v : t) v = static_cast<Index>(spec.value);
      break;
    case MapSpec::Kind::kIdentity:
      for (Index x = 0; x < n; ++x) t[x] = x;
      break;
    case MapSpec::Kind::kPow:
      need_cyclic(g, "pow");
      for (Index x = 0; x < n; ++x) t[x] = static_cast<Index>(powmod(x, spec.value, n));
      break;
    case MapSpec::Kind::kInv:
    case MapSpec::Kind::kInvNonzero:
      need_cyclic(g, "inv");
      if (!is_prime(n)) fail(ErrorKind::kDomain, "inv needs prime N, got " + std::to_string(n));
      for (Index x = 1; x < n; ++x) t[x] = static_cast<Index>(powmod(x, n - 2, n));
      t[0] = spec.kind == MapSpec::Kind::kInv ? 0 : 1;
      break;
    case MapSpec::Kind::kRandMap:
      for (auto& v : t) v = bounded_draw(rng(), n);
      break;
    case MapSpec::Kind::kRandBij:
      t = shuffled(n, rng);
      break;
    case MapSpec::Kind::kKToOne: {
      if (spec.value > n) fail(ErrorKind::kDomain, "ktoone needs K <= N");
      const auto points = shuffled(n, rng);
      const auto targets = shuffled(n, rng);
      for (Index i = 0; i < n; ++i) t[points[i]] = targets[i / spec.value];
      break;
    }
  }
  return make_map(g, std::move(t));
}

ApSmooth ap_smooth(const GroupSpec& g, std::size_t P_len, std::size_t t_len) {
  need_cyclic(g, "ap_smooth");
  const Index n = g.order();
  if (P_len < 1 || t_len < 1) fail(ErrorKind::kDomain, "lengths must be >= 1");
  if (P_len > n || t_len > n) fail(ErrorKind::kDomain, "lengths exceed N");
  std::vector<Complex> p(n, 0.0), p1(n, 0.0);
  for (std::size_t x = 0; x < P_len; ++x) p[x] = 1.0;
  for (std::size_t x = 0; x < t_len; ++x) p1[x] = 1.0;
  const auto conv = convolve(g, p, p1);
  ApSmooth out;
  out.P.resize(n);
  out.W.resize(n);
  std::vector<Complex> w(n);
  for (Index x = 0; x < n; ++x) {
    out.P[x] = p[x].real();
    out.W[x] = conv[x].real() / double(t_len);
    w[x] = out.W[x];
    out.sum_W += out.W[x];
    if (std::abs(out.W[x] - out.P[x]) > 1e-12) ++out.deviation_points;
  }
  for (const auto& c : dft(g, w).values) out.spectral_l1 += std::abs(c);
  out.spectral_bound = double(n) * std::sqrt(double(P_len)) / std::sqrt(double(t_len));
  return out;
}

ConvexityReport convexity_probe(double kappa, const std::vector<double>& xs, double log_base) {
  if (!(kappa > 0)) fail(ErrorKind::kDomain, "kappa must be > 0");
  if (!(log_base > 1)) fail(ErrorKind::kDomain, "log base must be > 1");
  if (xs.empty()) fail(ErrorKind::kDomain, "need at least one point");
  ConvexityReport r;
  r.kappa = kappa;
  r.log_base = log_base;
  auto h = [&](double x) { return std::pow(std::log(x) / std::log(log_base), -kappa); };
  double mean_x = 0;
  for (double x : xs) {
    if (!(x > 1)) fail(ErrorKind::kDomain, "every x must be > 1, got " + std::to_string(x));
    r.near_one = r.near_one || x - 1 < 1e-6;
    r.mean_h += h(x);
    mean_x += x;
  }
  r.mean_h /= double(xs.size());
  mean_x /= double(xs.size());
  r.h_mean = h(mean_x);
  const double tol = 1e-12 * std::max(r.mean_h, r.h_mean);
  if (std::abs(r.mean_h - r.h_mean) <= tol) {
    r.direction = "equal";
  } else {
    r.direction = r.mean_h > r.h_mean ? "mean_h_greater" : "mean_h_less";
  }
  r.stated_holds = r.mean_h <= r.h_mean + tol;
  return r;
}

MultiFunction rst_function(const ArithMap& a, int r, int s, int t) {
  if (r < 0 || s < 0 || t < 0 || r + s + t < 1) fail(ErrorKind::kDomain, "need r, s, t >= 0, r + s + t >= 1");
  const GroupSpec g = a.group;
  const auto table = a.table;
  return MultiFunction::tabulate(g, std::size_t(r + s + t), [=](std::span<const Index> x) {
    Index u = 0, v = 0;
    for (int i = 0; i < r; ++i) u = g.add(u, x[i]);
    for (int i = r; i < r + s; ++i) {
      u = g.add(u, x[i]);
      v = g.add(v, x[i]);
    }
    for (int i = r + s; i < r + s + t; ++i) v = g.add(v, x[i]);
    return g.character(u, table[v]);
  });
}

NormResult rst_probe(const ArithMap& a, int r, int s, int t, double budget) {
  return gowers_norm(rst_function(a, r, s, t), budget);
}

}  // namespace gowlab::lab
