// qkcomp: command-line front end for the verification suites.
//
// Exit status: 0 when every check passes, 1 when a check fails (failures are
// listed on stderr), 2 for usage errors.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qkcomp/acceptance.hpp"

using namespace qkcomp;
using Json = nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string out;
};

Json number(double x) { return round12(x); }

Json checks_json(const CheckReport& r) {
  Json a = Json::array();
  for (const auto& c : r.checks()) a.push_back({{"name", c.name}, {"expected", c.expected}, {"actual", c.actual}, {"pass", c.pass}});
  return a;
}

std::string csv_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream s;
  for (std::size_t i = 0; i < header.size(); ++i) s << (i ? "," : "") << header[i];
  s << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) s << (i ? "," : "") << row[i];
    s << "\n";
  }
  return s.str();
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw UsageError("cannot write " + c.out);
  f << text;
}

/// Writes the report and returns the exit status.
int finish(const Common& c, const std::string& command, const Json& params, const Json& results, const CheckReport& checks,
           const std::string& csv = {}) {
  if (c.format == "csv") {
    emit(c, csv);
  } else {
    Json doc{{"command", command}, {"params", params}, {"results", results}, {"checks", checks_json(checks)}};
    emit(c, doc.dump(2) + "\n");
  }
  for (const auto* f : checks.failures()) std::cerr << "failed: " << f->name << ": expected " << f->expected << ", got " << f->actual << "\n";
  return checks.passed() ? 0 : 1;
}

exterior::ExteriorOps ops_for(bool flip_star) {
  exterior::ExteriorOps ops;
  if (flip_star)
    ops.star = [](const exterior::Form& f) {
      exterior::Form s = exterior::hodge_star(f);
      return f.degree() == 1 ? -s : s;
    };
  return ops;
}

// ---------------------------------------------------------------------------

int check_identities(const Common& c, int dim, int degree, int samples, bool flip_star) {
  if (c.format != "json") throw UsageError("check-identities emits json only");
  CheckReport checks;
  Json results = Json::array();
  const int lo = degree ? degree : 1, hi = degree ? degree : dim;
  if (dim < 1 || dim > 12 || lo < 1 || hi > dim) throw UsageError("need 1 <= degree <= dim <= 12");
  for (int p = lo; p <= hi; ++p) {
    const auto rep = exterior::check_star_identities(dim, p, samples, c.seed + static_cast<std::uint64_t>(p), ops_for(flip_star));
    for (const auto& id : rep.identities) {
      Json row{{"dim", dim}, {"degree", p}, {"identity", id.id}, {"law", id.law}, {"samples", id.samples}, {"pass", id.pass}};
      if (!id.pass) row["counterexample"] = id.counterexample;
      results.push_back(row);
      checks.add("identity (" + std::to_string(id.id) + ") degree " + std::to_string(p), std::to_string(id.samples) + " exact",
                 id.pass ? std::to_string(id.samples) + " exact" : "counterexample: " + id.counterexample, id.pass);
    }
  }
  return finish(c, "check-identities", {{"dim", dim}, {"degree", degree}, {"samples", samples}, {"seed", c.seed}}, results, checks);
}

int harmonicity(const Common& c, int n, int samples) {
  using namespace quaternionic;
  if (c.format != "json") throw UsageError("harmonicity emits json only");
  const auto f = build_frame(n, Layout::Grouped);
  const auto ff = build_fundamental_forms(f);
  const StarCommutationKernel k(ff);
  Rng rng(c.seed);
  CheckReport checks;
  Json results = Json::array();
  int six = 0, star = 0, printed = 0;
  for (int t = 0; t < samples; ++t) {
    const auto h = random_trace_free(rng, f);
    const Form d = siu_corlette_defect(h, ff);
    Json lines = Json::array();
    bool ok = true;
    for (int line = 0; line < n; ++line) {
      const Rational coeff = line_coefficient(d, f, line), sum = h.line_sum(line);
      ok = ok && coeff == 6 * sum;
      lines.push_back({{"line", line + 1}, {"line_sum", to_fraction_string(sum)}, {"coefficient", to_fraction_string(coeff)}});
    }
    const auto r = verify_star_commutation(h, k);
    six += ok;
    star += r.pass();
    printed += r.printed_chain_sign;
    results.push_back({{"sample", t}, {"lines", lines}, {"star_commutation", r.pass()}, {"printed_chain_sign", r.printed_chain_sign}});
  }
  const std::string all = std::to_string(samples) + " of " + std::to_string(samples);
  checks.add("defect line coefficient = 6 x line sum", all, std::to_string(six) + " of " + std::to_string(samples), six == samples);
  checks.add("*d*(df^Omega) = (-1)^{4n-1} d*(df^*Omega)", all, std::to_string(star) + " of " + std::to_string(samples), star == samples);
  return finish(c, "harmonicity", {{"n", n}, {"samples", samples}, {"seed", c.seed}}, results, checks);
}

int compare(const Common& c, int n, int delta, double r_min, double r_max, int steps) {
  using namespace comparison;
  const ModelGeometry g(n, delta);
  if (steps < 1) throw UsageError("steps must be positive");
  if (!(r_max > 0) || r_max >= domain_end(g)) throw UsageError("r-max must lie in (0, " + format_float(domain_end(g)) + ")");
  if (r_min < 0 || r_min >= r_max) throw UsageError("need 0 <= r-min < r-max");
  CheckReport checks;
  checks.add_flag("block-sum identity", block_sum_identity(g));
  Json results = Json::array();
  std::vector<std::vector<std::string>> rows;
  double worst_sum = 0, worst_log = 0, worst_flat = 0;
  for (int k = 1; k <= steps; ++k) {
    const double r = r_min + (r_max - r_min) * k / steps;
    const auto t = laplacian_terms(g, r);
    const double density = area_density(g, r), closed = laplacian_distance(g, r);
    worst_sum = std::max(worst_sum, std::abs(t.line_block + (n - 1) * t.transversal_block - closed) / std::max(1.0, std::abs(closed)));
    worst_log = std::max(worst_log, std::abs(log_derivative_error(g, r)));
    if (delta == 0) worst_flat = std::max(worst_flat, std::abs(r * closed - (4 * n - 1)));
    rows.push_back({format_float(r), format_float(t.total), format_float(t.line_block), format_float(t.transversal_block), format_float(density)});
    results.push_back({{"r", number(r)}, {"laplacian", number(t.total)}, {"line_block", number(t.line_block)},
                       {"transversal_block", number(t.transversal_block)}, {"density", number(density)}});
  }
  checks.add("line + (n-1) transversal = laplacian (relative)", "<= 1e-12", format_float(worst_sum), worst_sum <= 1e-12);
  checks.add("(d/dr) log J - laplacian", "<= 1e-08", format_float(worst_log), worst_log <= 1e-8);
  if (delta == 0)
    checks.add("r * laplacian = 4n-1 (printed 4n-3 = " + std::to_string(4 * n - 3) + " is an erratum)", "<= 1e-12",
               format_float(worst_flat), worst_flat <= 1e-12);
  return finish(c, "compare", {{"n", n}, {"delta", delta}, {"r_min", number(r_min)}, {"r_max", number(r_max)}, {"steps", steps}}, results,
                checks, csv_table({"r", "laplacian", "line_block", "transversal_block", "density"}, rows));
}

int riccati(const Common& c, const Rational& m, const Rational& K, double t0, double t1, int steps, std::optional<double> u0) {
  using namespace comparison;
  const RiccatiProblem p{m, K};
  const auto b = riccati_barrier(p);
  if (!(t1 < b.domain_end())) throw UsageError("t1 must lie before the barrier pole at " + format_float(b.domain_end()));
  const double start = u0 ? *u0 : b(t0) - 1;
  const auto tr = integrate_riccati(p, start, t0, t1, steps);
  CheckReport checks;
  checks.add_flag("symbolic residual of " + b.describe(), symbolic_residual(b, p).is_zero());
  const double excess = max_excess_over_barrier(tr, b);
  checks.add("max excess over barrier", "<= 1e-06", format_float(excess), excess <= 1e-6);
  Json results = Json::array();
  std::vector<std::vector<std::string>> rows;
  const std::size_t stride = std::max<std::size_t>(1, tr.t.size() / 100);
  for (std::size_t i = 0; i < tr.t.size(); i += stride) {
    rows.push_back({format_float(tr.t[i]), format_float(tr.u[i]), format_float(b(tr.t[i]))});
    results.push_back({{"t", number(tr.t[i])}, {"u", number(tr.u[i])}, {"barrier", number(b(tr.t[i]))}});
  }
  return finish(c, "riccati",
                {{"m", to_fraction_string(m)}, {"K", to_fraction_string(K)}, {"barrier", b.describe()}, {"t0", number(t0)},
                 {"t1", number(t1)}, {"u0", number(start)}, {"steps", steps}, {"blew_up", tr.blew_up}},
                results, checks, csv_table({"t", "u", "barrier"}, rows));
}

int volume(const Common& c, int n, int delta, double r_max, int steps) {
  using namespace comparison;
  const ModelGeometry g(n, delta);
  if (steps < 1) throw UsageError("steps must be positive");
  if (!(r_max > 0) || r_max > domain_end(g)) throw UsageError("r-max must lie in (0, " + format_float(domain_end(g)) + "]");
  CheckReport checks;
  Json results = Json::array();
  std::vector<std::vector<std::string>> rows;
  double prev = 0, worst_flat = 0;
  bool increasing = true;
  for (int k = 1; k <= steps; ++k) {
    const double r = r_max * k / steps;
    const double bound = r < domain_end(g) ? laplacian_distance(g, r) : -std::numeric_limits<double>::infinity();
    const double density = area_density(g, r), v = volume(g, r);
    increasing = increasing && v > prev;
    prev = v;
    if (delta == 0) {
      const double exact = unit_sphere_area(n) * std::pow(r, 4 * n) / (4 * n);
      worst_flat = std::max(worst_flat, std::abs(v / exact - 1));
    }
    rows.push_back({format_float(r), format_float(bound), format_float(density), format_float(v)});
    results.push_back({{"r", number(r)}, {"bound", number(bound)}, {"density", number(density)}, {"volume", number(v)}});
  }
  checks.add_flag("volume increasing", increasing);
  if (delta == 0) checks.add("flat volume against closed form (relative)", "<= 1e-10", format_float(worst_flat), worst_flat <= 1e-10);
  return finish(c, "volume", {{"n", n}, {"delta", delta}, {"r_max", number(r_max)}, {"steps", steps}}, results, checks,
                csv_table({"r", "bound", "density", "volume"}, rows));
}

std::string components_csv(const model::CurvatureTensor& R) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& [idx, v] : R.R.nonzeros())
    rows.push_back({std::to_string(idx[0] + 1), std::to_string(idx[1] + 1), std::to_string(idx[2] + 1), std::to_string(idx[3] + 1), to_fraction_string(v)});
  return csv_table({"A", "B", "C", "D", "value"}, rows);
}

int model_cmd(const Common& c, int n, const Rational& scale, const std::string& components) {
  if (n < 2) throw UsageError("n must be at least 2");
  if (sgn(scale) <= 0 || !exact_sqrt(scale)) throw UsageError("scale must be a positive rational square");
  std::vector<Rational> scales{Rational(1)};
  if (scale != 1) scales.push_back(scale);
  const auto rep = model::model_report(n, scales, c.seed);
  const auto ric = model::ricci(rep.R);
  Rational scalar = 0;
  for (int a = 0; a < rep.R.dim(); ++a) scalar += ric(a, a);
  const Rational einstein = ric(0, 0);
  if (!components.empty()) {
    std::ofstream f(components);
    if (!f) throw UsageError("cannot write " + components);
    f << components_csv(rep.R);
  }
  Json result{{"n", n}, {"c", to_fraction_string(rep.sc.z_coefficient)}, {"einstein_constant", to_fraction_string(einstein)},
              {"scalar", to_fraction_string(scalar)}, {"tables", checks_json(rep.checks)}};
  return finish(c, "model", {{"n", n}, {"scale", to_fraction_string(scale)}, {"seed", c.seed}}, Json::array({result}), rep.checks,
                components_csv(rep.R));
}

int lambda1(const Common& c, int n, double r_min, double r_max, int mesh, bool study, std::vector<double> list) {
  using namespace spectral;
  const double target = (2.0 * n + 1) * (2.0 * n + 1);
  CheckReport checks;
  if (study) {
    if (list.empty()) list = {r_max / 2, 3 * r_max / 4, r_max};
    const auto rows = convergence_study(n, list, mesh, r_min);
    Json results = Json::array();
    std::vector<std::vector<std::string>> table;
    bool decreasing = true, above = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      decreasing = decreasing && (i == 0 || r.lambda1 < rows[i - 1].lambda1);
      above = above && r.lambda1 > target;
      table.push_back({format_float(r.r_max), std::to_string(r.mesh_points), format_float(r.lambda1), format_float(r.gap), format_float(r.residual)});
      results.push_back({{"r_max", number(r.r_max)}, {"mesh", r.mesh_points}, {"lambda1", number(r.lambda1)}, {"gap", number(r.gap)},
                         {"residual", number(r.residual)}});
    }
    checks.add_flag("lambda1 strictly decreasing in r_max", decreasing);
    checks.add_flag("every lambda1 above (2n+1)^2", above);
    Json rm = Json::array();
    for (double x : list) rm.push_back(number(x));
    return finish(c, "lambda1", {{"n", n}, {"r_min", number(r_min)}, {"r_max", rm}, {"mesh", mesh}, {"study", true}}, results, checks,
                  csv_table({"r_max", "mesh", "lambda1", "gap", "residual"}, table));
  }
  const auto e = lambda1_dirichlet({n, r_min, r_max, mesh, {}});
  checks.add("residual", "<= 1e-08", format_float(e.residual), e.residual <= 1e-8);
  checks.add("lambda1 above (2n+1)^2", "> " + format_float(target), format_float(e.lambda1), e.lambda1 > target);
  Json result{{"n", n}, {"r_max", number(r_max)}, {"mesh", mesh}, {"lambda1", number(e.lambda1)}, {"target", number(target)},
              {"gap", number(e.lambda1 - target)}, {"residual", number(e.residual)}, {"iterations", e.iterations}};
  return finish(c, "lambda1", {{"n", n}, {"r_min", number(r_min)}, {"r_max", number(r_max)}, {"mesh", mesh}, {"study", false}},
                Json::array({result}), checks,
                csv_table({"n", "r_max", "mesh", "lambda1", "target", "gap"},
                          {{std::to_string(n), format_float(r_max), std::to_string(mesh), format_float(e.lambda1), format_float(target),
                            format_float(e.lambda1 - target)}}));
}

int suite(const Common& c, bool flip_star) {
  acceptance::Options o;
  o.seed = c.seed;
  o.ops = ops_for(flip_star);
  std::string text;
  int passed = 0, total = 0;
  for (const auto& run : acceptance::criteria()) {
    const auto crit = run(o);
    text += acceptance::render(crit);
    passed += crit.passed();
    ++total;
  }
  text += std::to_string(passed) + " of " + std::to_string(total) + " criteria pass\n";
  emit(c, text);
  return passed == total ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and numerical checks for quaternionic comparison geometry"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--seed", common.seed, "random seed (QKCOMP_SEED overrides)");
  app.add_option("--format", common.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", common.out, "output file instead of stdout");
  app.fallthrough();

  int n = 2, delta = -1, dim = 8, degree = 0, samples = 100, harm_samples = 20, ric_steps = 2000, steps = 50, mesh = 20000;
  double r_min = 0, r_max = 5, t0 = 0.1, t1 = 3, lam_rmin = 1e-3, lam_rmax = 12;
  std::string scale_text = "1", m_text = "3", k_text = "-4", components;
  std::optional<double> u0;
  bool study = false, flip_star = false;
  std::vector<double> rmax_list;

  auto* ids = app.add_subcommand("check-identities", "exterior-algebra operator identities on random forms");
  ids->add_option("--dim", dim, "dimension (1..12)");
  ids->add_option("--degree", degree, "form degree, 0 for all");
  ids->add_option("--samples", samples, "samples per identity")->check(CLI::PositiveNumber);
  ids->add_flag("--inject-star-sign-flip", flip_star)->group("");

  auto* harm = app.add_subcommand("harmonicity", "Siu-Corlette defect and star commutation on random Hessians");
  harm->add_option("--n", n)->check(CLI::Range(2, 4));
  harm->add_option("--samples", harm_samples)->check(CLI::PositiveNumber);

  auto* cmp = app.add_subcommand("compare", "Laplacian comparison table for a model space");
  cmp->add_option("--n", n)->check(CLI::Range(2, 1000));
  cmp->add_option("--delta", delta)->check(CLI::Range(-1, 1));
  cmp->add_option("--r-min", r_min);
  cmp->add_option("--r-max", r_max);
  cmp->add_option("--steps", steps);

  auto* ric = app.add_subcommand("riccati", "integrate u' = -u^2/m - mK below its barrier");
  ric->add_option("--m", m_text, "rational m > 0");
  ric->add_option("--K", k_text, "rational K");
  ric->add_option("--t0", t0);
  ric->add_option("--t1", t1);
  ric->add_option("--u0", u0, "initial value, default barrier(t0) - 1");
  ric->add_option("--steps", ric_steps);

  auto* vol = app.add_subcommand("volume", "area density and ball volume of a model space");
  vol->add_option("--n", n)->check(CLI::Range(2, 1000));
  vol->add_option("--delta", delta)->check(CLI::Range(-1, 1));
  vol->add_option("--r-max", r_max);
  vol->add_option("--steps", steps);

  auto* mdl = app.add_subcommand("model", "curvature report for the solvable model of quaternionic hyperbolic space");
  mdl->add_option("--n", n)->check(CLI::Range(2, 6));
  mdl->add_option("--scale", scale_text, "level-set scale, a rational square");
  mdl->add_option("--components", components, "also write the nonzero curvature components as CSV");

  auto* lam = app.add_subcommand("lambda1", "bottom of the radial Dirichlet spectrum");
  lam->add_option("--n", n)->check(CLI::Range(2, 1000));
  lam->add_option("--rmin", lam_rmin);
  lam->add_option("--rmax", lam_rmax);
  lam->add_option("--mesh", mesh);
  lam->add_flag("--study", study, "convergence table over several r_max");
  lam->add_option("--rmax-list", rmax_list, "r_max values for --study")->delimiter(',');

  auto* st = app.add_subcommand("suite", "run the acceptance battery");
  st->add_flag("--inject-star-sign-flip", flip_star)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (const char* env = std::getenv("QKCOMP_SEED")) {
      try {
        std::size_t used = 0;
        common.seed = std::stoull(env, &used);
        if (used != std::string(env).size()) throw std::invalid_argument(env);
      } catch (const std::exception&) {
        throw UsageError(std::string("QKCOMP_SEED is not an unsigned integer: ") + env);
      }
    }
    auto sub = app.get_subcommands().front();
    if (sub == ids) return check_identities(common, dim, degree, samples, flip_star);
    if (sub == harm) return harmonicity(common, n, harm_samples);
    if (sub == cmp) return compare(common, n, delta, r_min, r_max, steps);
    if (sub == ric) {
      const Rational m = parse_rational(m_text), K = parse_rational(k_text);
      if (sgn(m) <= 0) throw UsageError("m must be positive");
      return riccati(common, m, K, t0, t1, ric_steps, u0);
    }
    if (sub == vol) return volume(common, n, delta, r_max, steps);
    if (sub == mdl) return model_cmd(common, n, parse_rational(scale_text), components);
    if (sub == lam) return lambda1(common, n, lam_rmin, lam_rmax, mesh, study, rmax_list);
    if (sub == st) {
      if (common.format == "csv") throw UsageError("suite prints text");
      return suite(common, flip_star);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const spectral::EstimationFailure& e) {
    std::cerr << "estimation failed: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
