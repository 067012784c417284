// mahler: Mahler measures m(P(x,y)), m(P(x,x^n)), Delta_n(P) and the
// coefficients c_r(n) of its expansion in powers of 1/n.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mahler/bivar.hpp"
#include "mahler/error.hpp"
#include "mahler/expansion.hpp"
#include "mahler/mahler.hpp"
#include "mahler/polyparse.hpp"
#include "mahler/rootengine.hpp"
#include "mahler/tables.hpp"

using namespace mahler;
using nlohmann::ordered_json;

namespace {

constexpr int kTableMismatch = 5;

struct RunConfig {
  std::string expr;
  int prec = kDefaultPrecision;
  double target_err = 0;  // 0: library default
  int jobs = 1;
  std::string format;
  long n = 0;
  int curve_n = 0;
  int rmax = 10;
  int k = 2;
  int kmax = 0;
  long n_class = 0;
  int modulus = 0;
  std::vector<long> ns;
  long nmax = 400;
  int which = 0;
  std::string out_dir = ".";
  std::string golden_dir = default_golden_dir();
};

int default_precision() {
  if (const char* env = std::getenv("MAHLER_PREC")) {
    try {
      std::size_t used = 0;
      const int p = std::stoi(env, &used);
      if (used == std::string(env).size()) return p;
    } catch (const std::exception&) {
    }
    fail(ErrorCode::kInvalidArgument, std::string("MAHLER_PREC is not an integer: ") + env);
  }
  return kDefaultPrecision;
}

int digits(const RunConfig& cfg) { return std::max(10, cfg.prec / 8); }

std::string num(const Real& v, const RunConfig& cfg) { return v.to_string(digits(cfg)); }

ParsedPoly read_poly(const std::string& expr) {
  const auto first = expr.find_first_not_of(" \t\n");
  if (first != std::string::npos && expr[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(expr);
    } catch (const nlohmann::json::parse_error& e) {
      fail(ErrorCode::kInvalidArgument, std::string("malformed JSON polynomial: ") + e.what());
    }
    return parse_poly_json(j);
  }
  return parse_poly(expr);
}

MeasureOptions measure_options(const RunConfig& cfg) {
  MeasureOptions o;
  o.jobs = cfg.jobs;
  if (cfg.target_err > 0) o.target_err = Real(cfg.target_err, cfg.prec);
  return o;
}

void validate(const RunConfig& cfg) {
  if (cfg.prec < 64) fail(ErrorCode::kInvalidArgument, "--prec must be at least 64");
  if (cfg.target_err < 0) fail(ErrorCode::kInvalidArgument, "--target-err must be positive");
  if (cfg.jobs < 1) fail(ErrorCode::kInvalidArgument, "--jobs must be at least 1");
}

ordered_json poly_header(const ParsedPoly& pp) {
  ordered_json j;
  j["poly"] = pp.poly.to_string();
  j["normalization"] = {{"x", pp.x_shift}, {"y", pp.y_shift}};
  return j;
}

void emit_measure(const ParsedPoly& pp, const MeasureResult& r, const RunConfig& cfg,
                  const ordered_json& extra = {}) {
  if (cfg.format == "csv") {
    std::cout << "value,error_bound,method\n"
              << num(r.value, cfg) << ',' << r.error_bound.to_string(3) << ',' << to_string(r.method) << '\n';
    return;
  }
  ordered_json j = poly_header(pp);
  for (const auto& [k, v] : extra.items()) j[k] = v;
  j["value"] = num(r.value, cfg);
  j["error_bound"] = r.error_bound.to_string(3);
  j["method"] = to_string(r.method);
  std::cout << j.dump(2) << '\n';
}

int cmd_analyze(const RunConfig& cfg) {
  if (cfg.format == "csv") fail(ErrorCode::kInvalidArgument, "analyze only supports --format json");
  const ParsedPoly pp = read_poly(cfg.expr);
  const BiPoly& p = pp.poly;
  ordered_json j = poly_header(pp);
  const auto c = is_asr(p);
  j["asr"] = c ? ordered_json(c->to_string()) : ordered_json(nullptr);
  if (p.deg_y() < 1) {
    j["hypothesis"] = "pass";
    j["exceptional"] = ordered_json::array();
    j["toric_arcs"] = 0;
    std::cout << j.dump(2) << '\n';
    return 0;
  }
  const HypothesisReport h = hypothesis_check(p, cfg.prec);
  j["hypothesis"] = h.pass ? "pass" : "fail";
  ordered_json pts = ordered_json::array();
  for (const auto& e : exceptional_set(p, cfg.prec)) {
    pts.push_back({{"alpha_angle", e.alpha.angle.to_string(digits(cfg))},
                   {"beta_angle", e.beta.angle.to_string(digits(cfg))},
                   {"sign", e.sign},
                   {"order", e.order}});
  }
  j["exceptional"] = pts;
  try {
    int arcs = 0;
    for (const auto& tr : track_roots(p, 512, cfg.prec)) {
      for (const auto& a : tr.arcs) arcs += a.cls == Modulus::kOnCircle;
    }
    j["toric_arcs"] = arcs;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kHypothesis) throw;
    j["toric_arcs"] = nullptr;
  }
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_mm(const RunConfig& cfg) {
  const ParsedPoly pp = read_poly(cfg.expr);
  const MeasureOptions opts = measure_options(cfg);
  if (cfg.curve_n != 0) {
    emit_measure(pp, mahler_curve(pp.poly, cfg.curve_n, cfg.prec, opts), cfg, {{"curve_n", cfg.curve_n}});
  } else {
    emit_measure(pp, mahler_bivariate(pp.poly, cfg.prec, opts), cfg);
  }
  return 0;
}

int cmd_delta(const RunConfig& cfg) {
  if (cfg.n < 1 || cfg.n > 1000000000L) fail(ErrorCode::kInvalidArgument, "--n must be a positive integer");
  const ParsedPoly pp = read_poly(cfg.expr);
  const MeasureResult d = delta_n(pp.poly, static_cast<int>(cfg.n), cfg.prec, measure_options(cfg));
  if (cfg.kmax < 2) {
    emit_measure(pp, d, cfg, {{"n", cfg.n}});
    return 0;
  }
  // Partial sums p_k(n); the series diverges, so only the explicit range is tried.
  const ExpansionContext ctx(pp.poly, cfg.prec);
  CoefficientTable t;
  t.poly = ctx.poly();
  t.precision = cfg.prec;
  for (int r = 2; r <= cfg.kmax; ++r) t.entries.emplace(std::make_pair(r, cfg.n), ctx.coefficient(r, cfg.n));
  int best_k = 0;
  Real best(cfg.prec);
  ordered_json rows = ordered_json::array();
  for (int k = 2; k <= cfg.kmax; ++k) {
    const Real rel = abs(d.value - partial_sum(t, k, cfg.n)) / abs(d.value);
    rows.push_back({{"k", k}, {"rel_err", rel.to_string(3)}});
    if (best_k == 0 || rel < best) {
      best_k = k;
      best = rel;
    }
  }
  if (cfg.format == "csv") {
    std::cout << "k,rel_err\n";
    for (const auto& r : rows) std::cout << r["k"].get<int>() << ',' << r["rel_err"].get<std::string>() << '\n';
    return 0;
  }
  emit_measure(pp, d, cfg,
               {{"n", cfg.n}, {"partial_sums", rows}, {"best_k", best_k}, {"best_rel_err", best.to_string(3)}});
  return 0;
}

int cmd_coeffs(const RunConfig& cfg) {
  if (cfg.rmax < 2) fail(ErrorCode::kInvalidArgument, "--rmax must be at least 2");
  const ParsedPoly pp = read_poly(cfg.expr);
  const ExpansionContext ctx(pp.poly, cfg.prec);
  std::vector<long> cols = cfg.ns;
  if (cols.empty()) {
    if (!ctx.modulus()) fail(ErrorCode::kInvalidArgument, "no modulus <= 1000; pass --ns explicitly");
    for (long n = 1; n <= *ctx.modulus(); ++n) cols.push_back(n);
  }
  for (long n : cols) {
    if (n < 1) fail(ErrorCode::kInvalidArgument, "--ns entries must be positive");
  }
  const CoefficientTable t = build_coefficient_table(ctx, cfg.rmax, cols, cfg.jobs);
  if (cfg.format == "json") {
    ordered_json j = poly_header(pp);
    j["modulus"] = t.modulus ? ordered_json(*t.modulus) : ordered_json(nullptr);
    j["precision"] = cfg.prec;
    ordered_json entries = ordered_json::array();
    for (int r = 2; r <= cfg.rmax; ++r) {
      for (long n : cols) entries.push_back({{"r", r}, {"n", n}, {"value", num(t.at(r, n), cfg)}});
    }
    j["coefficients"] = entries;
    std::cout << j.dump(2) << '\n';
    return 0;
  }
  std::cout << 'r';
  for (long n : cols) std::cout << ",c_r(" << n << ')';
  std::cout << '\n';
  for (int r = 2; r <= cfg.rmax; ++r) {
    std::cout << r;
    for (long n : cols) std::cout << ',' << num(t.at(r, n), cfg);
    std::cout << '\n';
  }
  return 0;
}

int cmd_verify(const RunConfig& cfg) {
  if (cfg.k < 2) fail(ErrorCode::kInvalidArgument, "--k must be at least 2");
  if (cfg.modulus < 1) fail(ErrorCode::kInvalidArgument, "--modulus must be positive");
  if (cfg.ns.size() < 2) fail(ErrorCode::kInvalidArgument, "--ns needs at least two values");
  for (std::size_t i = 0; i < cfg.ns.size(); ++i) {
    const long n = cfg.ns[i];
    if (n < 1 || (n - cfg.n_class) % cfg.modulus != 0) {
      fail(ErrorCode::kInvalidArgument, "--ns entry " + std::to_string(n) + " is not in the residue class");
    }
    if (i > 0 && n <= cfg.ns[i - 1]) fail(ErrorCode::kInvalidArgument, "--ns must be increasing");
  }
  const ParsedPoly pp = read_poly(cfg.expr);
  const ExpansionContext ctx(pp.poly, cfg.prec);
  const MeasureOptions opts = measure_options(cfg);
  const MeasureResult base = mahler_bivariate(ctx.poly(), cfg.prec, opts);
  const std::vector<MeasureResult> d = delta_sweep(ctx.poly(), cfg.ns, base, cfg.prec, opts);
  const long rep = cfg.ns.front();
  const int order = std::min<int>(4, static_cast<int>(cfg.ns.size()) - 1);

  // columns[j - 2][i] = n_i^j (Delta - p_{j-1}(n_i))
  std::vector<std::vector<Real>> columns;
  std::vector<Real> remainder;
  for (const auto& m : d) remainder.push_back(m.value);
  for (int j = 2; j <= cfg.k; ++j) {
    std::vector<Real> col;
    for (std::size_t i = 0; i < cfg.ns.size(); ++i) col.push_back(remainder[i] * pow(Real(cfg.ns[i], cfg.prec), j));
    columns.push_back(col);
    const Real cj = ctx.coefficient(j, rep);
    for (std::size_t i = 0; i < cfg.ns.size(); ++i) remainder[i] -= cj / pow(Real(cfg.ns[i], cfg.prec), j);
  }
  std::vector<Real> limits, predicted;
  for (int j = 2; j <= cfg.k; ++j) {
    limits.push_back(richardson_limit(cfg.ns, columns[j - 2], order));
    predicted.push_back(ctx.coefficient(j, rep));
  }

  if (cfg.format == "json") {
    ordered_json j = poly_header(pp);
    j["class"] = cfg.n_class;
    j["modulus"] = cfg.modulus;
    j["ns"] = cfg.ns;
    j["richardson_order"] = order;
    ordered_json cols = ordered_json::array();
    for (int jj = 2; jj <= cfg.k; ++jj) {
      ordered_json seq = ordered_json::array();
      for (const auto& v : columns[jj - 2]) seq.push_back(num(v, cfg));
      cols.push_back({{"k", jj},
                      {"sequence", seq},
                      {"limit", num(limits[jj - 2], cfg)},
                      {"predicted", num(predicted[jj - 2], cfg)}});
    }
    j["columns"] = cols;
    std::cout << j.dump(2) << '\n';
    return 0;
  }
  std::cout << 'n';
  for (int j = 2; j <= cfg.k; ++j) {
    if (j == 2) {
      std::cout << ",n^2*D";
    } else {
      std::cout << ",n^" << j << "*(D-p" << j - 1 << ')';
    }
  }
  std::cout << '\n';
  for (std::size_t i = 0; i < cfg.ns.size(); ++i) {
    std::cout << cfg.ns[i];
    for (const auto& col : columns) std::cout << ',' << num(col[i], cfg);
    std::cout << '\n';
  }
  std::cout << "limit";
  for (const auto& v : limits) std::cout << ',' << num(v, cfg);
  std::cout << "\nc_k";
  for (const auto& v : predicted) std::cout << ',' << num(v, cfg);
  std::cout << '\n';
  return 0;
}

std::vector<long> probe_ns(long nmax, int modulus) {
  std::set<long> out;
  for (int c = 0; c < modulus; ++c) {
    for (double f : {0.6, 0.78, 1.0}) {
      long n = static_cast<long>(f * static_cast<double>(nmax));
      n -= ((n - c) % modulus + modulus) % modulus;
      if (n >= 1) out.insert(n);
    }
  }
  return {out.begin(), out.end()};
}

int cmd_probe(const RunConfig& cfg) {
  if (cfg.modulus < 1) fail(ErrorCode::kInvalidArgument, "--modulus must be positive");
  if (cfg.nmax < 3) fail(ErrorCode::kInvalidArgument, "--nmax must be at least 3");
  const ParsedPoly pp = read_poly(cfg.expr);
  const std::vector<long> ns = cfg.ns.empty() ? probe_ns(cfg.nmax, cfg.modulus) : cfg.ns;
  const SingularFit fit = fit_singular_exponent(pp.poly, ns, cfg.modulus, cfg.prec, measure_options(cfg));
  if (cfg.format == "csv") {
    std::cout << "n,delta,used\n";
    for (std::size_t i = 0; i < fit.ns.size(); ++i) {
      std::ostringstream v;
      v.precision(10);
      v << fit.deltas[i];
      std::cout << fit.ns[i] << ',' << v.str() << ',' << (fit.used[i] ? 1 : 0) << '\n';
    }
    return 0;
  }
  ordered_json j = poly_header(pp);
  j["experimental"] = true;
  j["modulus"] = fit.modulus;
  j["slope"] = fit.slope;
  ordered_json amp = ordered_json::object();
  for (const auto& [c, a] : fit.amplitude) amp[std::to_string(c)] = a;
  j["amplitude"] = amp;
  ordered_json pts = ordered_json::array();
  for (std::size_t i = 0; i < fit.ns.size(); ++i) {
    pts.push_back({{"n", fit.ns[i]}, {"delta", fit.deltas[i]}, {"used", static_cast<bool>(fit.used[i])}});
  }
  j["points"] = pts;
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_tables(const RunConfig& cfg) {
  int status = 0;
  for (const auto& diff : run_tables(cfg.which, cfg.out_dir, cfg.golden_dir, cfg.prec, cfg.jobs)) {
    if (diff.mismatches.empty()) {
      std::cout << diff.file << ": match\n";
      continue;
    }
    status = kTableMismatch;
    std::cout << diff.file << ": " << diff.mismatches.size() << " mismatched cell(s)\n";
    for (const auto& m : diff.mismatches) std::cerr << "  " << m << '\n';
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  try {
    cfg.prec = default_precision();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.code());
  }

  CLI::App app{"Mahler measures of P(x,y) and P(x,x^n), Delta_n(P) and its expansion coefficients.\n"
               "Exit codes: 0 ok, 1 invalid input, 2 hypothesis failure, 3 degenerate input,\n"
               "4 numerical non-convergence, 5 table mismatch."};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every command");

  auto add_common = [&](CLI::App* sub, bool needs_expr) {
    auto* e = sub->add_option("--expr", cfg.expr,
                              "Polynomial in x, y, e.g. \"1+x+y\" or \"3*x^2*y - (1/2+2i)*y^3 + x^-1\", "
                              "or JSON {\"terms\":[{\"i\":..,\"j\":..,\"re\":\"p/q\",\"im\":\"p/q\"}]}");
    if (needs_expr) e->required();
    sub->add_option("--prec", cfg.prec, "Working precision in bits (default 256, or $MAHLER_PREC)")
        ->check(CLI::Range(64, 1 << 20));
    sub->add_option("--target-err", cfg.target_err, "Absolute error target for quadrature")
        ->check(CLI::PositiveNumber);
    sub->add_option("--jobs", cfg.jobs, "Worker threads")->check(CLI::Range(1, 1024));
  };
  auto add_format = [&](CLI::App* sub, const std::string& def) {
    cfg.format = "";
    sub->add_option("--format", cfg.format, "Output format (default " + def + ")")
        ->check(CLI::IsMember({"json", "csv"}));
  };

  auto* analyze = app.add_subcommand("analyze", "Reciprocity, hypothesis check and exceptional set with signs");
  add_common(analyze, true);
  add_format(analyze, "json");

  auto* mm = app.add_subcommand("mm", "Mahler measure m(P(x,y)), or m(P(x,x^n)) with --curve-n");
  add_common(mm, true);
  add_format(mm, "json");
  mm->add_option("--curve-n", cfg.curve_n, "Measure P(x, x^n) for this n")->check(CLI::PositiveNumber);

  auto* delta = app.add_subcommand("delta", "Delta_n(P) = m(P(x,x^n)) - m(P(x,y))");
  add_common(delta, true);
  add_format(delta, "json");
  delta->add_option("--n", cfg.n, "Curve exponent n")->required();
  delta->add_option("--kmax", cfg.kmax, "Also compare partial sums p_k(n), 2 <= k <= kmax, and report the best k")
      ->check(CLI::Range(2, 200));

  auto* coeffs = app.add_subcommand("coeffs", "Coefficients c_r(n) for 2 <= r <= rmax");
  add_common(coeffs, true);
  add_format(coeffs, "csv");
  coeffs->add_option("--rmax", cfg.rmax, "Largest r (default 10)")->check(CLI::Range(2, 400));
  coeffs->add_option("--ns", cfg.ns, "Comma-separated n (default: one per residue class)")->delimiter(',');

  auto* verify = app.add_subcommand("verify", "Compare n^k (Delta_n - p_{k-1}(n)) with c_k along a residue class");
  add_common(verify, true);
  add_format(verify, "csv");
  verify->add_option("--k", cfg.k, "Largest k")->required()->check(CLI::Range(2, 60));
  verify->add_option("--class", cfg.n_class, "Residue class of n")->required();
  verify->add_option("--modulus", cfg.modulus, "Modulus of the residue class")->required();
  verify->add_option("--ns", cfg.ns, "Comma-separated increasing n in the class")->required()->delimiter(',');

  auto* probe = app.add_subcommand("probe", "Fit Delta_n ~ A n^s per residue class (experimental)");
  add_common(probe, true);
  add_format(probe, "json");
  probe->add_option("--nmax", cfg.nmax, "Largest n (default 400)");
  probe->add_option("--modulus", cfg.modulus, "Residue-class modulus")->required();
  probe->add_option("--ns", cfg.ns, "Comma-separated n instead of the default spread")->delimiter(',');

  auto* tables = app.add_subcommand("tables", "Regenerate a reference table and diff it against the golden copy");
  add_common(tables, false);
  tables->add_option("--which", cfg.which, "Table 1-4")->required()->check(CLI::Range(1, 4));
  tables->add_option("--out-dir", cfg.out_dir, "Directory for the generated file (default .)");
  tables->add_option("--golden-dir", cfg.golden_dir, "Directory with the golden copies");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ErrorCode::kInvalidArgument);
  }

  try {
    validate(cfg);
    if (cfg.format.empty()) {
      cfg.format = (coeffs->parsed() || verify->parsed()) ? "csv" : "json";
    }
    if (analyze->parsed()) return cmd_analyze(cfg);
    if (mm->parsed()) return cmd_mm(cfg);
    if (delta->parsed()) return cmd_delta(cfg);
    if (coeffs->parsed()) return cmd_coeffs(cfg);
    if (verify->parsed()) return cmd_verify(cfg);
    if (probe->parsed()) return cmd_probe(cfg);
    if (tables->parsed()) return cmd_tables(cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(ErrorCode::kNonConvergence);
  }
  return 0;
}
