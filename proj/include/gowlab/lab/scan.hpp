#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gowlab/norms.hpp"

namespace gowlab::lab {

struct ScanConfig {
  std::string sweep = "K";  ///< "K", "N" or "map"
  std::string group = "Z:64";            ///< fixed group for K and map sweeps
  std::vector<std::uint64_t> values;     ///< K values, or N values
  std::vector<std::string> maps;         ///< map sweep list; maps[0] is the N-sweep map
  int t = 2;                             ///< order of the second cube count
  std::uint64_t seed = 0;
  double budget = kDefaultTermBudget;    ///< total over all points
};

/// One line per key, sorted; the text the config hash is taken over.
std::string canonical(const ScanConfig& c);
/// FNV-1a 64 of canonical(c), as 16 hex digits.
std::string config_hash(const ScanConfig& c);

struct ScanRow {
  std::string key;  ///< sort key, zero padded
  std::uint64_t N = 0;
  std::string map;
  std::uint64_t max_fiber = 0;
  double rect_u2 = 0.0;        ///< naive ||e(x.a(y))||_{U^2}
  double rect_u2_fiber = 0.0;  ///< (sum |M_j|^2 / N^2)^{1/4}
  double skew_calU2 = 0.0;     ///< raw sum for e(x.a(x+y))
  double skew_u2 = 0.0;        ///< (skew_calU2 / N^4)^{1/4}
  std::uint64_t cube_count_1 = 0;
  std::uint64_t cube_count_t = 0;
  double rect_bound_log2 = 0.0;  ///< cor_rect_t1 at eps = rect_u2; inf when eps >= 1
  bool rect_bound_vacuous = true;
  double injection_bound_log2 = 0.0;  ///< cor_injection at K = max_fiber
  bool injection_bound_vacuous = true;
  double estimated_terms = 0.0;
  double terms = 0.0;  ///< summands actually visited
};

/// Terms one point of the given order will visit.
double point_cost(std::uint64_t N, int t);
double estimate_cost(const ScanConfig& c);

/// Throws CostError before any work when estimate_cost exceeds c.budget,
/// Error(kUsage) on a malformed config. Rows are sorted by key.
std::vector<ScanRow> run_scan(const ScanConfig& c);

inline constexpr const char* kScanSchema = "gowlab.scan/1";

void write_scan_csv(std::ostream& out, const ScanConfig& c, const std::vector<ScanRow>& rows);
void write_scan_json(std::ostream& out, const ScanConfig& c, const std::vector<ScanRow>& rows);

}  // namespace gowlab::lab
