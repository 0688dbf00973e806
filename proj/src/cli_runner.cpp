#include "widthslab/cli_runner.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "widthslab/classes.hpp"
#include "widthslab/classio.hpp"
#include "widthslab/crosscheck.hpp"
#include "widthslab/entropy.hpp"
#include "widthslab/recovery.hpp"
#include "widthslab/results.hpp"
#include "widthslab/theorem.hpp"
#include "widthslab/widths.hpp"

namespace widthslab {
namespace {

struct CliOptions {
  std::string class_path;
  std::vector<std::string> quantities;
  std::string n_spec = "0";
  std::uint64_t seed = 1;
  std::uint64_t budget = 100000;
  double mesh = 0.0;
  double delta = 1e-9;
  int refine_iters = 200;
  int width_iters = 64;
  int threads = 0;
  bool heuristic = false;
  bool exact_rational = false;
  bool timings = false;
  std::string out_path;
  std::string report_path;
  std::string plot_path;
  std::string grid_spec;
};

double parse_double_token(std::string tok) {
  const auto a = tok.find_first_not_of(" \t");
  const auto b = tok.find_last_not_of(" \t");
  if (a == std::string::npos) throw ParameterError("empty numeric token");
  tok = tok.substr(a, b - a + 1);
  try {
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size())
      throw ParameterError("unparsable number '" + tok + "'");
    return v;
  } catch (const std::invalid_argument&) {
    throw ParameterError("unparsable number '" + tok + "'");
  } catch (const std::out_of_range&) {
    throw ParameterError("number out of range '" + tok + "'");
  }
}

int parse_int_token(const std::string& tok) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(tok, &pos);
    if (pos != tok.size()) throw ParameterError("unparsable n '" + tok + "'");
    return v;
  } catch (const std::invalid_argument&) {
    throw ParameterError("unparsable n '" + tok + "'");
  } catch (const std::out_of_range&) {
    throw ParameterError("n out of range '" + tok + "'");
  }
}

// "3", "0..4", "0,2,5" and comma-joined mixtures of these.
std::vector<int> parse_n_spec(const std::string& spec) {
  std::vector<int> out;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) throw ParameterError("empty n token in '" + spec + "'");
    const auto dots = tok.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_int_token(tok));
      continue;
    }
    const int a = parse_int_token(tok.substr(0, dots));
    const int b = parse_int_token(tok.substr(dots + 2));
    if (b < a) throw ParameterError("descending n range '" + tok + "'");
    for (int v = a; v <= b; ++v) out.push_back(v);
  }
  if (out.empty()) throw ParameterError("no n values in '" + spec + "'");
  return out;
}

// Points split by ';', coordinates inside a point by ','.
std::vector<Vec> parse_grid(const std::string& spec, std::size_t m) {
  std::vector<Vec> out;
  std::stringstream points(spec);
  std::string tok;
  while (std::getline(points, tok, ';')) {
    if (tok.find_first_not_of(" \t") == std::string::npos) continue;
    Vec v;
    std::stringstream coords(tok);
    std::string c;
    while (std::getline(coords, c, ',')) v.push_back(parse_double_token(c));
    if (v.size() != m)
      throw DimensionError("grid point '" + tok + "' has " +
                           std::to_string(v.size()) +
                           " coordinates, the class lives in dimension " +
                           std::to_string(m));
    out.push_back(std::move(v));
  }
  if (out.empty()) throw ParameterError("candidate grid is empty");
  return out;
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const char* s = std::getenv("WIDTHSLAB_THREADS");
  if (s && *s) {
    try {
      const int v = std::stoi(s);
      if (v >= 1) return v;
    } catch (...) {
    }
  }
  return 1;
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  const auto dt = std::chrono::steady_clock::now() - t0;
  return std::chrono::duration<double, std::milli>(dt).count();
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot open output file " + path);
  out << text;
}

void check_quantities(const std::vector<std::string>& qs) {
  static const std::set<std::string> known = {"g", "g0", "eps", "phi", "d_ub"};
  for (const auto& q : qs)
    if (!known.count(q))
      throw ParameterError("unknown quantity '" + q +
                           "' (expected g, g0, eps, phi or d_ub)");
}

QuantityResult compute_quantity(const FunctionClass& F, const std::string& q,
                                int n, const CliOptions& o) {
  QuantityResult r;
  r.class_id = F.id();
  r.quantity = q;
  r.n = n;
  r.seed = o.seed;
  const auto t0 = std::chrono::steady_clock::now();

  if (q == "g" || q == "g0") {
    const DiameterResult d = diameter_of_information(F, n, o.budget,
                                                     o.heuristic);
    const PBall* pb = std::get_if<PBall>(&F.body());
    const bool diagonal = pb && effectively_diagonal(pb->map);
    std::string method = diagonal ? "diagonal"
                                  : (d.heuristic ? "greedy" : "exhaustive");
    if (o.exact_rational) {
      const double check = pair_diameter_rational(F, d.design);
      if (std::abs(check - d.value) > 1e-9 * std::max(1.0, std::abs(d.value)))
        throw SolverError("rational cross-check disagrees with the double "
                          "solve: " + format_value(check) + " vs " +
                          format_value(d.value));
      method += "+xrational";
    }
    r.interval = exact_interval(q == "g" ? 0.5 * d.value : d.value, method);
    r.design = d.design.indices;
  } else if (q == "eps") {
    EntropyOptions eo;
    eo.seed = o.seed;
    eo.refine_iters = o.refine_iters;
    eo.mesh = o.mesh;
    r.interval = entropy_interval(F, n, eo);
  } else if (q == "phi") {
    if (n > 16)
      throw BudgetError("inner entropy needs 2^n + 1 packing points; n > 16 "
                        "is out of reach");
    const SeparatedFamily pack =
        greedy_packing(F, (std::size_t{1} << n) + 1, o.seed, o.refine_iters);
    EntropyOptions eo;
    eo.seed = o.seed;
    eo.refine_iters = o.refine_iters;
    eo.mesh = o.mesh;
    const CertifiedInterval e = entropy_interval(F, n, eo);
    const double lo = 0.5 * pack.separation;
    r.interval = certified_interval(std::min(lo, e.hi), e.hi, "greedy-packing",
                                    e.hi_method + "+sandwich");
  } else if (q == "d_ub") {
    const SubspaceCandidate c =
        kolmogorov_upper(F, n, o.width_iters, o.seed);
    r.interval = certified_interval(0.0, c.worst_error, "none", c.origin);
  } else {
    throw ParameterError("unknown quantity '" + q + "'");
  }

  if (o.timings) r.runtime_ms = elapsed_ms(t0);
  return r;
}

// Value the log-log fit runs on, plus a label for the method column. Upper
// bounds that come from the constant bounding-box fallback cannot decay, so
// enclosure quantities fall back to fitting the certified lower bound.
std::pair<double, std::string> fit_series_value(const QuantityResult& r) {
  if (r.quantity == "eps" || r.quantity == "phi") {
    if (r.interval.hi_method.rfind("net-kcenter", 0) == 0)
      return {0.5 * (r.interval.lo + r.interval.hi), "mid"};
    return {r.interval.lo, "lo"};
  }
  if (r.quantity == "d_ub") return {r.interval.hi, "hi"};
  return {r.interval.lo, "value"};
}

int cmd_compute(const CliOptions& o) {
  const FunctionClass F = load_class(o.class_path);
  validate_class(F);
  const std::vector<int> ns = parse_n_spec(o.n_spec);
  std::vector<std::string> qs = o.quantities;
  if (qs.empty()) qs.push_back("g");
  check_quantities(qs);

  std::string csv = csv_header() + "\n";
  for (int n : ns)
    for (const auto& q : qs) csv += csv_row(compute_quantity(F, q, n, o)) + "\n";
  write_text(o.out_path, csv);
  return 0;
}

int cmd_sweep(const CliOptions& o) {
  const FunctionClass F = load_class(o.class_path);
  validate_class(F);
  const std::vector<int> ns = parse_n_spec(o.n_spec);
  std::vector<std::string> qs = o.quantities;
  if (qs.empty()) qs = {"g", "eps"};
  check_quantities(qs);

  std::string csv = csv_header() + "\n";
  std::string plot;
  std::vector<std::vector<QuantityResult>> per_q(qs.size());
  for (int n : ns)
    for (std::size_t qi = 0; qi < qs.size(); ++qi) {
      QuantityResult r = compute_quantity(F, qs[qi], n, o);
      csv += csv_row(r) + "\n";
      per_q[qi].push_back(std::move(r));
    }

  for (std::size_t qi = 0; qi < qs.size(); ++qi) {
    std::vector<int> fit_ns;
    std::vector<double> fit_vals;
    std::string series;
    for (const auto& r : per_q[qi]) {
      const auto [v, label] = fit_series_value(r);
      series = label;
      if (r.n >= 1 && v > 0.0) {
        fit_ns.push_back(r.n);
        fit_vals.push_back(v);
      }
    }
    RateFit fit;
    try {
      fit = fit_rate(fit_ns, fit_vals);
    } catch (const ParameterError& e) {
      std::cerr << "rate fit skipped for " << qs[qi] << ": " << e.what()
                << "\n";
      continue;
    }
    QuantityResult row;
    row.class_id = F.id();
    row.quantity = "rate:" + qs[qi];
    row.n = fit.points;
    row.interval.lo = fit.exponent;
    row.interval.hi = fit.exponent;
    row.interval.lo_method = "loglog-" + series +
                             " intercept=" + format_value(fit.intercept) +
                             " residual=" + format_value(fit.residual);
    row.interval.hi_method = row.interval.lo_method;
    row.seed = o.seed;
    csv += csv_row(row) + "\n";

    if (!o.plot_path.empty()) {
      plot += "# quantity " + qs[qi] + " series " + series + "\n";
      for (std::size_t i = 0; i < fit_ns.size(); ++i)
        plot += format_value(std::log(double(fit_ns[i]))) + " " +
                format_value(std::log(fit_vals[i])) + "\n";
      plot += "# fit exponent=" + format_value(fit.exponent) +
              " intercept=" + format_value(fit.intercept) + "\n";
    }
  }

  write_text(o.out_path, csv);
  if (!o.plot_path.empty()) {
    std::ofstream pf(o.plot_path);
    if (!pf) throw ParameterError("cannot open plot file " + o.plot_path);
    pf << plot;
  }
  return 0;
}

nlohmann::json report_json(const TheoremReport& rep) {
  nlohmann::json j;
  j["n"] = rep.n;
  j["p"] = rep.p;
  j["heuristic"] = rep.heuristic;
  j["vacuous"] = rep.transcript.vacuous;

  nlohmann::json tr;
  tr["rho"] = rep.transcript.rho;
  tr["delta"] = rep.transcript.delta;
  tr["nodes"] = rep.transcript.nodes;
  std::vector<double> gaps;
  for (const auto& s : rep.transcript.steps) gaps.push_back(s.gap);
  tr["gaps"] = gaps;
  tr["design"] = rep.transcript.final_design.indices;
  j["transcript"] = tr;

  nlohmann::json sep;
  sep["min_separation"] = rep.separation.min_separation;
  sep["required"] = rep.separation.required;
  sep["telescope_error"] = rep.separation.telescope_error;
  sep["agreement_error"] = rep.separation.agreement_error;
  sep["pass"] = rep.separation.pass;
  j["separation"] = sep;

  nlohmann::json mem;
  mem["violation"] = rep.membership_violation;
  mem["tol"] = rep.membership_tol;
  mem["pass"] = rep.membership_ok;
  j["membership"] = mem;

  nlohmann::json samp;
  samp["g"] = rep.sampling;
  samp["g0"] = rep.info_diameter.value;
  samp["design"] = rep.info_diameter.design.indices;
  samp["designs_tried"] = rep.info_diameter.designs_tried;
  samp["heuristic"] = rep.info_diameter.heuristic;
  j["sampling"] = samp;

  nlohmann::json eps;
  eps["lo"] = rep.eps.lo;
  eps["hi"] = rep.eps.hi;
  eps["lo_method"] = rep.eps.lo_method;
  eps["hi_method"] = rep.eps.hi_method;
  j["entropy"] = eps;

  nlohmann::json up;
  up["lhs_g"] = rep.sampling;
  up["rhs"] = rep.upper_rhs;
  up["pass"] = rep.upper_ok;
  j["upper"] = up;

  nlohmann::json lo;
  lo["eps_lo"] = rep.eps.lo;
  lo["required"] = rep.lower_required;
  lo["pass"] = rep.lower_ok;
  j["lower"] = lo;

  j["family_size"] = rep.family.points.size();
  j["family_separation"] = rep.family.separation;
  j["pass"] = rep.pass;
  return j;
}

int cmd_verify(const CliOptions& o) {
  const FunctionClass F = load_class(o.class_path);
  validate_class(F);
  const std::vector<int> ns = parse_n_spec(o.n_spec);

  VerifyOptions vo;
  vo.budget = o.budget;
  vo.heuristic = o.heuristic;
  vo.seed = o.seed;
  vo.mesh = o.mesh;
  vo.refine_iters = o.refine_iters;
  vo.delta = o.delta;

  nlohmann::json report;
  report["class_id"] = F.id();
  report["heuristic"] = o.heuristic;
  report["results"] = nlohmann::json::array();

  bool all_pass = true;
  int passed = 0;
  for (int n : ns) {
    const TheoremReport rep = verify_main_inequality(F, n, vo);
    report["results"].push_back(report_json(rep));
    all_pass = all_pass && rep.pass;
    passed += rep.pass ? 1 : 0;

    std::cout << "n=" << n << ": g=" << format_value(rep.sampling)
              << " eps=[" << format_value(rep.eps.lo) << ","
              << format_value(rep.eps.hi) << "]"
              << " rho=" << format_value(rep.transcript.rho)
              << " upper=" << (rep.upper_ok ? "ok" : "FAIL")
              << " lower=" << (rep.lower_ok ? "ok" : "FAIL")
              << " membership=" << (rep.membership_ok ? "ok" : "FAIL")
              << " separation=" << (rep.separation.pass ? "ok" : "FAIL");
    if (rep.transcript.vacuous)
      std::cout << " (vacuous transcript: the gap ran out, bounds hold "
                   "trivially)";
    std::cout << " -> " << (rep.pass ? "pass" : "FAIL") << "\n";
  }
  report["pass"] = all_pass;

  if (!o.report_path.empty()) {
    std::ofstream rf(o.report_path);
    if (!rf) throw ParameterError("cannot open report file " + o.report_path);
    rf << report.dump(2) << "\n";
  }
  std::cout << "verify " << F.id() << ": "
            << (all_pass ? "PASS" : "FAIL") << " (" << passed << "/"
            << ns.size() << ")\n";
  return all_pass ? 0 : 1;
}

int cmd_oracle(const CliOptions& o) {
  const FunctionClass F = load_class(o.class_path);
  validate_class(F);
  const std::vector<int> ns = parse_n_spec(o.n_spec);
  std::string q = o.quantities.empty() ? "eps" : o.quantities.front();
  if (o.quantities.size() > 1)
    throw ParameterError("the oracle checks one quantity at a time");

  std::string text;
  if (q == "eps") {
    if (o.grid_spec.empty())
      throw ParameterError("the entropy oracle needs --grid");
    const std::vector<Vec> grid = parse_grid(o.grid_spec, F.dim());
    for (int n : ns) {
      const double v = exact_small_entropy(F, n, grid, o.mesh);
      text += "oracle,eps," + std::to_string(n) + "," + format_value(v) + "\n";
    }
  } else if (q == "g0") {
    for (int n : ns) {
      const DiameterResult d = diameter_of_information(F, n, o.budget, false);
      const double check = pair_diameter_rational(F, d.design);
      if (std::abs(check - d.value) > 1e-9 * std::max(1.0, std::abs(d.value)))
        throw SolverError("rational cross-check disagrees with the double "
                          "solve: " + format_value(check) + " vs " +
                          format_value(d.value));
      text += "oracle,g0," + std::to_string(n) + "," + format_value(d.value) +
              "," + format_value(check) + ",ok\n";
    }
  } else {
    throw ParameterError("oracle supports quantities eps and g0, not '" + q +
                         "'");
  }
  write_text(o.out_path, text);
  return 0;
}

void add_shared(CLI::App* sub, CliOptions& o) {
  sub->add_option("--class", o.class_path, "JSON class description")
      ->required();
  sub->add_option("--n", o.n_spec,
                  "sample counts: '3', '0..4' or '0,2,5' (default 0)");
  sub->add_option("--seed", o.seed, "random seed (default 1)");
  sub->add_option("--budget", o.budget,
                  "cap on exhaustively enumerated designs (default 100000)");
  sub->add_option("--mesh", o.mesh,
                  "covering grid resolution, <= 0 picks one (default auto)");
  sub->add_option("--threads", o.threads,
                  "worker threads (or WIDTHSLAB_THREADS; reserved, the "
                  "kernels currently run on one)");
  sub->add_flag("--heuristic", o.heuristic,
                "greedy design growth instead of exhaustive search");
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"sampling numbers, entropy enclosures and width bounds for "
               "finitely discretized convex classes"};
  app.require_subcommand(1);
  CliOptions o;

  CLI::App* compute = app.add_subcommand(
      "compute", "tabulate quantities over a range of sample counts");
  add_shared(compute, o);
  compute->add_option("--quantity", o.quantities,
                      "g, g0, eps, phi, d_ub (repeatable; default g)")
      ->delimiter(',');
  compute->add_option("--out", o.out_path, "CSV output path (default stdout)");
  compute->add_option("--refine", o.refine_iters,
                      "packing exchange iterations (default 200)");
  compute->add_option("--iters", o.width_iters,
                      "random subspace candidates for d_ub (default 64)");
  compute->add_flag("--exact-rational", o.exact_rational,
                    "recheck g and g0 with the rational pivoting solver");
  compute->add_flag("--timings", o.timings,
                    "fill the runtime_ms column (off keeps reruns "
                    "byte-identical)");

  CLI::App* verify = app.add_subcommand(
      "verify", "run the sampling-versus-entropy check end to end");
  add_shared(verify, o);
  verify->add_option("--delta", o.delta,
                     "numerical slack in the guaranteed separation "
                     "(default 1e-9)");
  verify->add_option("--refine", o.refine_iters,
                     "packing exchange iterations (default 200)");
  verify->add_option("--report", o.report_path, "JSON report path");

  CLI::App* sweep = app.add_subcommand(
      "sweep", "compute a series and fit log-log decay rates");
  add_shared(sweep, o);
  sweep->add_option("--quantity", o.quantities,
                    "quantities to sweep (default g,eps)")
      ->delimiter(',');
  sweep->add_option("--out", o.out_path, "CSV output path (default stdout)");
  sweep->add_option("--refine", o.refine_iters,
                    "packing exchange iterations (default 200)");
  sweep->add_option("--iters", o.width_iters,
                    "random subspace candidates for d_ub (default 64)");
  sweep->add_option("--plot", o.plot_path,
                    "write log n versus log value pairs for plotting");
  sweep->add_flag("--timings", o.timings, "fill the runtime_ms column");

  CLI::App* oracle = app.add_subcommand(
      "oracle", "independent slow checks: grid entropy, rational diameters");
  add_shared(oracle, o);
  oracle->add_option("--quantity", o.quantities, "eps (default) or g0")
      ->delimiter(',');
  oracle->add_option("--grid", o.grid_spec,
                     "candidate centers 'x1,x2;y1,y2;...' for the entropy "
                     "search");
  oracle->add_option("--out", o.out_path, "output path (default stdout)");
  oracle->add_flag("--exact-rational", o.exact_rational,
                   "implied for g0; accepted for symmetry");

  std::vector<const char*> argv;
  argv.push_back("widthslab");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  o.threads = resolve_threads(o.threads);

  try {
    if (app.got_subcommand(compute)) return cmd_compute(o);
    if (app.got_subcommand(verify)) return cmd_verify(o);
    if (app.got_subcommand(sweep)) return cmd_sweep(o);
    return cmd_oracle(o);
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const UnsupportedClassError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace widthslab
