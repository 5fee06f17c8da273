// gowlab: command line front end for the norm, counting and selection code.
// Exit codes: 0 pass, 1 check failure, 2 usage, 3 budget.

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gowlab/bounds.hpp"
#include "gowlab/error.hpp"
#include "gowlab/lab/catalog.hpp"
#include "gowlab/lab/scan.hpp"
#include "gowlab/lab/verify.hpp"
#include "gowlab/linsys.hpp"
#include "gowlab/norms.hpp"
#include "gowlab/reduce.hpp"
#include "gowlab/selection.hpp"
#include "json.hpp"

using namespace gowlab;
using ojson = nlohmann::ordered_json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheck = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

struct Common {
  std::string group = "Z:8";
  std::string map = "identity";
  int t = 1;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "json";
  double budget = kDefaultTermBudget;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--group", c.group, "group, Z:N or Z:2xZ:3")->capture_default_str();
  app->add_option("--map", c.map, "map spec, e.g. randmap:7 or ktoone:2:1")->capture_default_str();
  app->add_option("--t", c.t, "order t")->capture_default_str();
  app->add_option("--seed", c.seed, "seed")->capture_default_str();
  app->add_option("--out", c.out, "output path (default stdout)");
  app->add_option("--format", c.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app->add_option("--budget", c.budget, "term budget")->capture_default_str();
}

class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) fail(ErrorKind::kUsage, "cannot open '" + path + "' for writing");
    }
  }
  std::ostream& os() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::string cell(const ojson& v) {
  if (!v.is_string()) return v.dump();
  const auto s = v.get<std::string>();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

// Rows share the keys of the first row.
void emit(const Common& c, const std::vector<ojson>& rows) {
  Sink sink(c.out);
  auto& os = sink.os();
  if (c.format == "json") {
    os << (rows.size() == 1 ? rows[0] : ojson(rows)).dump(2) << '\n';
    return;
  }
  if (rows.empty()) return;
  bool first = true;
  for (const auto& [k, v] : rows[0].items()) {
    os << (first ? "" : ",") << k;
    first = false;
  }
  os << '\n';
  for (const auto& r : rows) {
    first = true;
    for (const auto& [k, v] : r.items()) {
      os << (first ? "" : ",") << cell(v);
      first = false;
    }
    os << '\n';
  }
}

ojson jnum(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

ArithMap load_map(const Common& c) { return lab::build_map(GroupSpec::parse(c.group), c.map); }

TupleKernel pick_kernel(const std::string& name, const GroupSpec& g) {
  if (name == "skew") return skew_sigma1_kernel(g);
  if (name == "unit") {
    return [](std::span<const Index>, std::span<const Index>) { return Complex{1, 0}; };
  }
  fail(ErrorKind::kUsage, "kernel must be skew or unit");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gowlab: Gowers norms, skew sums, tuple selection and bound evaluation"};
  app.set_config("--config", "", "key = value file; flags override it");
  app.require_subcommand(1);
  int workers = 0;
  app.add_option("--workers", workers, "worker threads (0 = hardware)");

  Common c;
  std::function<int()> action;

  // norm
  auto* norm = app.add_subcommand("norm", "U^d norm of e(x.a(y)), F_t or H_t");
  add_common(norm, c);
  std::string function = "phase", method = "naive";
  Index lambda = 0;
  norm->add_option("--function", function, "phase, F or H")
      ->check(CLI::IsMember({"phase", "F", "H"}))
      ->capture_default_str();
  norm->add_option("--method", method, "naive or fiber (phase only)")->capture_default_str();
  norm->add_option("--lambda", lambda, "shift in (x - lambda)")->capture_default_str();
  norm->callback([&] {
    action = [&] {
      const auto a = load_map(c);
      ojson r{{"schema", "gowlab.norm/1"}, {"group", c.group}, {"map", c.map}, {"function", function}};
      if (function == "phase" && method == "fiber") {
        r["t"] = 1;
        r["method"] = "fiber";
        r["value"] = rect_norm_phase_fiber(a);
        r["terms"] = a.group.order();
      } else {
        if (method != "naive") fail(ErrorKind::kUsage, "method must be naive, or fiber with phase");
        const auto f = function == "phase" ? phase_function(a)
                                           : compose_skew(a, c.t, function == "F" ? SkewKind::kF : SkewKind::kH, lambda);
        const auto n = gowers_norm(f, c.budget);
        r["t"] = function == "phase" ? 1 : c.t;
        r["method"] = "naive";
        r["value"] = n.value;
        r["power"] = n.power;
        r["calU"] = n.power * std::pow(double(a.group.order()), 2.0 * double(f.arity()));
        r["terms"] = n.term_count;
      }
      emit(c, {r});
      return kExitPass;
    };
  });

  // skew
  auto* skew = app.add_subcommand("skew", "skew sum of F_t two ways; fails if they disagree");
  add_common(skew, c);
  skew->callback([&] {
    action = [&] {
      const auto a = load_map(c);
      const double direct = calU_norm(compose_skew(a, c.t, SkewKind::kF), c.budget);
      const Complex sum = skew_sigma_sum(a, c.t, c.budget);
      const double scale = std::max({std::abs(direct), std::abs(sum), 1.0});
      double residual = std::abs(sum - Complex{direct, 0}) / scale;
      ojson r{{"schema", "gowlab.skew/1"}, {"group", c.group}, {"map", c.map}, {"t", c.t},
              {"calU", direct}, {"sigma_sum_re", sum.real()}, {"sigma_sum_im", sum.imag()}};
      if (c.t == 1) {
        const Complex cf = sigma1_closed_form(a);
        residual = std::max(residual, std::abs(cf - Complex{direct, 0}) / scale);
        r["closed_form"] = cf.real();
      }
      r["residual"] = residual;
      r["pass"] = residual <= 1e-9;
      emit(c, {r});
      return residual <= 1e-9 ? kExitPass : kExitCheck;
    };
  });

  // sigma
  auto* sigma = app.add_subcommand("sigma", "sigma_f and tau_f per first row over the cube system");
  add_common(sigma, c);
  int d = 2;
  std::string kernel = "skew";
  sigma->add_option("--d", d, "cube system dimension (2 or 3)")->capture_default_str();
  sigma->add_option("--kernel", kernel, "skew (d = 2 only) or unit")->capture_default_str();
  sigma->callback([&] {
    action = [&] {
      const auto a = load_map(c);
      const auto fam = derive_families(cube_system(d));
      if (kernel == "skew" && d != 2) fail(ErrorKind::kUsage, "skew kernel needs d = 2");
      const auto phi = uniform_maps(a, fam.base.l);
      const auto w = full_windows(a.group, fam.base.l);
      const auto st = sigma_tau(pick_kernel(kernel, a.group), phi, fam, w, ConstraintSet{}, c.budget);
      const auto counts = enumerate_solutions(fam, phi, w, ConstraintSet{}, {}, c.budget).counts;
      std::vector<ojson> rows;
      for (const auto& e : st.per_row) {
        std::string id;
        for (int v : fam.E.vectors[e.e]) id += v > 0 ? '+' : (v < 0 ? '-' : '0');
        rows.push_back({{"schema", "gowlab.sigma/1"},
                        {"system_id", id},
                        {"weight", e.weight},
                        {"additive", counts.additive},
                        {"degenerate", counts.degenerate},
                        {"good", counts.good},
                        {"bad", counts.bad},
                        {"sigma_re", e.sigma.real()},
                        {"sigma_im", e.sigma.imag()},
                        {"tau", e.tau}});
      }
      emit(c, rows);
      return kExitPass;
    };
  });

  // select
  auto* select = app.add_subcommand("select", "one round of random product selection");
  add_common(select, c);
  std::size_t k = 1;
  select->add_option("--k", k, "rounds")->capture_default_str();
  select->callback([&] {
    action = [&] {
      const auto a = load_map(c);
      const auto fam = derive_families(cube_system(2));
      const auto phi = uniform_maps(a, 4);
      const auto out = run_selection(full_windows(a.group, 4), phi, fam, {k, c.seed}, {}, c.budget);
      ojson sizes = ojson::array();
      for (const auto& s : out.selected) sizes.push_back(s.count());
      ojson r{{"schema", "gowlab.select/1"}, {"group", c.group}, {"map", c.map}, {"k", k}, {"seed", c.seed},
              {"window_sizes", c.format == "csv" ? ojson(sizes.dump()) : sizes},
              {"good_before", out.before.good}, {"bad_before", out.before.bad},
              {"good_after", out.after.good}, {"bad_after", out.after.bad},
              {"bad_probability", out.predicted.bad_exact}, {"good_lower", out.predicted.good_lower}};
      emit(c, {r});
      return kExitPass;
    };
  });

  // increment
  auto* inc = app.add_subcommand("increment", "density increment loop; trace as JSON lines");
  add_common(inc, c);
  std::size_t steps = 10;
  double alpha = 0.0;
  std::string inc_kernel = "skew";
  inc->add_option("--k", k, "rounds per step")->capture_default_str();
  inc->add_option("--steps", steps, "maximum steps")->capture_default_str();
  inc->add_option("--alpha", alpha, "stop once sigma < alpha tau")->capture_default_str();
  inc->add_option("--kernel", inc_kernel, "skew or unit")->capture_default_str();
  inc->callback([&] {
    action = [&] {
      const auto a = load_map(c);
      const auto fam = derive_families(cube_system(2));
      const auto tr = increment_loop(pick_kernel(inc_kernel, a.group), uniform_maps(a, 4), fam,
                                     full_windows(a.group, 4), ConstraintSet{}, {k, steps, alpha, c.seed},
                                     c.budget);
      bool ok = true;
      for (const auto& r : tr.records) ok = ok && r.conserved;
      if (c.format == "json") {
        Sink sink(c.out);
        write_trace_jsonl(sink.os(), tr);
      } else {
        std::vector<ojson> rows;
        for (const auto& r : tr.records) {
          rows.push_back({{"schema", kTraceSchema}, {"step", r.step}, {"level", r.level},
                          {"sigma_re", r.sigma_re}, {"sigma_abs_total", r.sigma_abs_total}, {"tau", r.tau},
                          {"good", r.good}, {"bad", r.bad}, {"alpha", r.alpha}, {"seed", r.seed},
                          {"removed_tau", r.removed_tau}, {"zeta_observed", r.zeta_observed},
                          {"omega_observed", r.omega_observed}, {"conserved", r.conserved}});
        }
        emit(c, rows);
      }
      std::cerr << "stop: " << tr.stop_reason << '\n';
      return ok ? kExitPass : kExitCheck;
    };
  });

  // scan
  auto* scan = app.add_subcommand("scan", "parameter sweep over K, N or maps");
  add_common(scan, c);
  lab::ScanConfig sc;
  scan->add_option("--sweep", sc.sweep, "K, N or map")->check(CLI::IsMember({"K", "N", "map"}))->capture_default_str();
  scan->add_option("--values", sc.values, "K or N values")->delimiter(',');
  scan->add_option("--maps", sc.maps, "map specs (map sweep; first one for N sweep)")->delimiter(',');
  scan->callback([&] {
    action = [&] {
      sc.group = scan->count("--group") ? c.group : "Z:64";
      sc.t = scan->count("--t") ? c.t : 2;
      sc.seed = c.seed;
      sc.budget = c.budget;
      const auto rows = lab::run_scan(sc);
      Sink sink(c.out);
      if (c.format == "json") {
        lab::write_scan_json(sink.os(), sc, rows);
      } else {
        lab::write_scan_csv(sink.os(), sc, rows);
      }
      return kExitPass;
    };
  });

  // verify
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  add_common(verify, c);
  std::string suite = "all";
  verify->add_option("--suite", suite, "suite name or all")->capture_default_str();
  verify->callback([&] {
    action = [&] {
      std::vector<std::string> names;
      if (suite == "all") {
        names = lab::suite_names();
      } else {
        names = {suite};
      }
      bool pass = true;
      std::string body = "[";
      for (std::size_t i = 0; i < names.size(); ++i) {
        const auto r = lab::run_verify(names[i], c.seed, c.budget);
        pass = pass && r.pass;
        body += (i ? "," : "") + lab::report_json(r);
        std::cerr << (r.pass ? "PASS " : "FAIL ") << r.suite << " (" << r.checks.size() << " checks, "
                  << r.failures() << " failed)\n";
      }
      body += "]";
      Sink sink(c.out);
      sink.os() << (names.size() == 1 ? ojson::parse(body)[0] : ojson::parse(body)).dump(2) << '\n';
      return pass ? kExitPass : kExitCheck;
    };
  });

  // bounds
  auto* bnd = app.add_subcommand("bounds", "evaluate the printed bounds with vacuity flags");
  add_common(bnd, c);
  BoundParams bp;
  std::string kind = "all";
  double log2_inv_eps = 0, s_size = 0;
  bnd->add_option("--kind", kind, "bound name or all")->capture_default_str();
  bnd->add_option("--l", bp.l)->capture_default_str();
  bnd->add_option("--m", bp.m)->capture_default_str();
  bnd->add_option("--N", bp.N)->capture_default_str();
  bnd->add_option("--eps", bp.eps)->capture_default_str();
  bnd->add_option("--log2-inv-eps", log2_inv_eps, "log2(1/eps), for eps below double range");
  bnd->add_option("--eps1", bp.eps1)->capture_default_str();
  bnd->add_option("--alpha", bp.alpha)->capture_default_str();
  bnd->add_option("--omega", bp.omega)->capture_default_str();
  bnd->add_option("--c-t", bp.c_t, "the constant c(t)")->capture_default_str();
  bnd->add_option("--implied", bp.implied, "implied constant")->capture_default_str();
  bnd->add_option("--K", bp.K)->capture_default_str();
  bnd->add_option("--P-len", bp.P_len, "|P|")->capture_default_str();
  bnd->add_option("--S-size", s_size, "|S| (default 3^{lm})");
  bnd->callback([&] {
    action = [&] {
      bp.t = c.t;
      if (bnd->count("--log2-inv-eps")) bp.log2_inv_eps = log2_inv_eps;
      if (bnd->count("--S-size")) bp.S_size = s_size;
      const auto kinds = kind == "all" ? all_bound_kinds() : std::vector<BoundKind>{parse_bound_kind(kind)};
      std::vector<ojson> rows;
      for (const auto bk : kinds) {
        const auto r = bound_eval(bp, bk);
        ojson row{{"schema", "gowlab.bounds/1"}, {"kind", to_string(bk)}, {"N", bp.N},
                  {"bound_log2", jnum(r.bound.log2())}, {"trivial_log2", jnum(r.trivial.log2())},
                  {"vacuous", r.vacuous}};
        ojson shape = ojson::object(), variants = ojson::array(), hyp = ojson::object();
        for (const auto& [key, v] : r.shape) shape[key] = jnum(v);
        for (const auto& v : r.variants) {
          variants.push_back({{"name", v.name}, {"bound_log2", jnum(v.bound.log2())}, {"vacuous", v.vacuous}});
        }
        for (const auto& [key, v] : r.hypotheses) hyp[key] = v;
        if (c.format == "json") {
          row["shape"] = shape;
          row["variants"] = variants;
          row["hypotheses"] = hyp;
        } else {
          row["shape"] = shape.dump();
          row["variants"] = variants.dump();
          row["hypotheses"] = hyp.dump();
        }
        rows.push_back(row);
      }
      emit(c, rows);
      return kExitPass;
    };
  });

  // probe-convexity
  auto* conv = app.add_subcommand("probe-convexity", "which way mean h vs h(mean) goes, h = 1/(log x)^kappa");
  add_common(conv, c);
  double kappa = 1.0, base = 2.0;
  std::vector<double> xs;
  conv->add_option("--kappa", kappa)->capture_default_str();
  conv->add_option("--xs", xs, "points > 1")->delimiter(',')->required();
  conv->add_option("--log-base", base, "base of the logarithm")->capture_default_str();
  conv->callback([&] {
    action = [&] {
      const auto r = lab::convexity_probe(kappa, xs, base);
      emit(c, {ojson{{"schema", "gowlab.convexity/1"}, {"kappa", r.kappa}, {"log_base", r.log_base},
                     {"mean_h", r.mean_h}, {"h_mean", r.h_mean}, {"direction", r.direction},
                     {"stated_direction_holds", r.stated_holds}, {"near_one", r.near_one}}});
      return kExitPass;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }
  if (workers > 0) set_worker_count(std::size_t(workers));
  try {
    return action();
  } catch (const CostError& e) {
    std::cerr << "budget: " << e.what() << '\n';
    return kExitBudget;
  } catch (const Error& e) {
    std::cerr << to_string(e.kind()) << ": " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::kPrecision:
      case ErrorKind::kContract:
        return kExitCheck;
      default:
        return kExitUsage;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCheck;
  }
}
