#include "gowlab/lab/scan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include "gowlab/bounds.hpp"
#include "gowlab/error.hpp"
#include "gowlab/lab/catalog.hpp"
#include "gowlab/reduce.hpp"
#include "gowlab/selection.hpp"
#include "json.hpp"

namespace gowlab::lab {

namespace {

constexpr std::uint64_t kScanTag = 50;

std::string padded(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%010llu", static_cast<unsigned long long>(v));
  return buf;
}

struct Point {
  std::string key;
  GroupSpec group;
  std::string map;
};

std::vector<Point> expand(const ScanConfig& c) {
  std::vector<Point> out;
  if (c.sweep == "K") {
    const auto g = GroupSpec::parse(c.group);
    if (c.values.empty()) fail(ErrorKind::kUsage, "K sweep needs values");
    for (auto k : c.values) {
      if (k < 1 || k > g.order()) fail(ErrorKind::kUsage, "K must lie in [1, N]");
      out.push_back({"K=" + padded(k), g,
                     "ktoone:" + std::to_string(k) + ":" + std::to_string(stream_hash(c.seed, kScanTag, k, 0))});
    }
  } else if (c.sweep == "N") {
    if (c.values.empty()) fail(ErrorKind::kUsage, "N sweep needs values");
    const std::string map = c.maps.empty() ? "randmap:" + std::to_string(c.seed) : c.maps.front();
    for (auto n : c.values) {
      if (n < 1 || n > std::numeric_limits<std::uint32_t>::max()) fail(ErrorKind::kUsage, "bad N");
      out.push_back({"N=" + padded(n), GroupSpec::make({std::uint32_t(n)}), map});
    }
  } else if (c.sweep == "map") {
    const auto g = GroupSpec::parse(c.group);
    if (c.maps.empty()) fail(ErrorKind::kUsage, "map sweep needs maps");
    for (std::size_t i = 0; i < c.maps.size(); ++i) out.push_back({"map=" + padded(i), g, c.maps[i]});
  } else {
    fail(ErrorKind::kUsage, "sweep must be K, N or map, got '" + c.sweep + "'");
  }
  // Parse every map up front so a bad spec fails before any work.
  for (const auto& p : out) MapSpec::parse(p.map);
  if (c.t < 1) fail(ErrorKind::kUsage, "t must be >= 1");
  return out;
}

ScanRow evaluate(const Point& p, int t, double budget) {
  const auto a = build_map(p.group, p.map);
  const double n = p.group.order();
  ScanRow r;
  r.key = p.key;
  r.N = p.group.order();
  r.map = p.map;
  r.max_fiber = a.max_fiber();
  const auto rect = gowers_norm(phase_function(a), budget);
  r.rect_u2 = rect.value;
  r.rect_u2_fiber = rect_norm_phase_fiber(a);
  r.skew_calU2 = calU_norm(compose_skew(a, 1, SkewKind::kF), budget);
  r.skew_u2 = std::pow(r.skew_calU2 / (n * n * n * n), 0.25);
  const auto c1 = cube_count(a, 1, NormMethod::kNaive, budget);
  const auto ct = cube_count(a, t, NormMethod::kNaive, budget);
  r.cube_count_1 = c1.count;
  r.cube_count_t = ct.count;

  BoundParams bp;
  bp.N = n;
  if (r.rect_u2 < 1.0 && r.rect_u2 > 0.0) {
    bp.eps = r.rect_u2;
    const auto b = bound_eval(bp, BoundKind::kCorRectT1);
    r.rect_bound_log2 = b.bound.log2();
    r.rect_bound_vacuous = b.vacuous;
  } else {
    r.rect_bound_log2 = std::numeric_limits<double>::infinity();
    r.rect_bound_vacuous = true;
  }
  bp.K = double(r.max_fiber);
  const auto inj = bound_eval(bp, BoundKind::kCorInjection);
  r.injection_bound_log2 = inj.bound.log2();
  r.injection_bound_vacuous = inj.vacuous;

  r.estimated_terms = point_cost(r.N, t);
  r.terms = double(rect.term_count) + n + n * n * n * n + double(c1.term_count) + double(ct.term_count);
  return r;
}

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string canonical(const ScanConfig& c) {
  std::ostringstream s;
  s << "budget=" << num(c.budget) << '\n' << "group=" << c.group << '\n' << "maps=";
  for (std::size_t i = 0; i < c.maps.size(); ++i) s << (i ? "," : "") << c.maps[i];
  s << '\n' << "seed=" << c.seed << '\n' << "sweep=" << c.sweep << '\n' << "t=" << c.t << '\n' << "values=";
  for (std::size_t i = 0; i < c.values.size(); ++i) s << (i ? "," : "") << c.values[i];
  s << '\n';
  return s.str();
}

std::string config_hash(const ScanConfig& c) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical(c)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

double point_cost(std::uint64_t N, int t) {
  const double n = double(N);
  // rectangular norm, fiber census, skew sum, two cube counts
  return 2 * std::pow(n, 4) + n + n * n + std::pow(n, 2.0 * t);
}

double estimate_cost(const ScanConfig& c) {
  double total = 0;
  for (const auto& p : expand(c)) total += point_cost(p.group.order(), c.t);
  return total;
}

std::vector<ScanRow> run_scan(const ScanConfig& c) {
  const auto points = expand(c);
  double total = 0;
  for (const auto& p : points) total += point_cost(p.group.order(), c.t);
  charge(total, c.budget, "scan");
  std::vector<ScanRow> rows(points.size());
  parallel_for(points.size(), [&](std::size_t i) { rows[i] = evaluate(points[i], c.t, c.budget); });
  std::sort(rows.begin(), rows.end(), [](const ScanRow& a, const ScanRow& b) { return a.key < b.key; });
  return rows;
}

void write_scan_csv(std::ostream& out, const ScanConfig& c, const std::vector<ScanRow>& rows) {
  const std::string hash = config_hash(c);
  out << "schema,config_hash,key,N,map,max_fiber,rect_u2,rect_u2_fiber,skew_calU2,skew_u2,"
         "cube_count_1,cube_count_t,rect_bound_log2,rect_bound_vacuous,injection_bound_log2,"
         "injection_bound_vacuous,estimated_terms,terms\n";
  for (const auto& r : rows) {
    out << kScanSchema << ',' << hash << ',' << r.key << ',' << r.N << ',' << r.map << ','
        << r.max_fiber << ',' << num(r.rect_u2) << ',' << num(r.rect_u2_fiber) << ','
        << num(r.skew_calU2) << ',' << num(r.skew_u2) << ',' << r.cube_count_1 << ','
        << r.cube_count_t << ',' << num(r.rect_bound_log2) << ',' << r.rect_bound_vacuous << ','
        << num(r.injection_bound_log2) << ',' << r.injection_bound_vacuous << ','
        << num(r.estimated_terms) << ',' << num(r.terms) << '\n';
  }
}

void write_scan_json(std::ostream& out, const ScanConfig& c, const std::vector<ScanRow>& rows) {
  auto jnum = [](double v) -> nlohmann::ordered_json {
    if (std::isfinite(v)) return v;
    return num(v);
  };
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    arr.push_back({{"key", r.key},
                   {"N", r.N},
                   {"map", r.map},
                   {"max_fiber", r.max_fiber},
                   {"rect_u2", r.rect_u2},
                   {"rect_u2_fiber", r.rect_u2_fiber},
                   {"skew_calU2", r.skew_calU2},
                   {"skew_u2", r.skew_u2},
                   {"cube_count_1", r.cube_count_1},
                   {"cube_count_t", r.cube_count_t},
                   {"rect_bound_log2", jnum(r.rect_bound_log2)},
                   {"rect_bound_vacuous", r.rect_bound_vacuous},
                   {"injection_bound_log2", jnum(r.injection_bound_log2)},
                   {"injection_bound_vacuous", r.injection_bound_vacuous},
                   {"estimated_terms", r.estimated_terms},
                   {"terms", r.terms}});
  }
  nlohmann::ordered_json j = {{"schema", kScanSchema},
                      {"config_hash", config_hash(c)},
                      {"config",
                       {{"sweep", c.sweep},
                        {"group", c.group},
                        {"values", c.values},
                        {"maps", c.maps},
                        {"t", c.t},
                        {"seed", c.seed},
                        {"budget", c.budget}}},
                      {"rows", arr}};
  out << j.dump(2) << '\n';
}

}  // namespace gowlab::lab
