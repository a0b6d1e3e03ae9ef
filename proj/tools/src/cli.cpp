#include "cli.hpp"

#include <CLI11.hpp>
#include <gmp.h>

#include <charconv>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "specs.hpp"
#include "stabpair/energy.hpp"
#include "stabpair/igusa.hpp"
#include "stabpair/pairstab.hpp"
#include "stabpair/varieties.hpp"

namespace stabpair::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Csv {
  std::string comment;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct Artifact {
  nlohmann::json json;
  std::optional<Csv> csv;
  int exit_code = 0;
};

struct Common {
  std::uint64_t seed = 0;
  std::size_t samples = 1'000'000;
  std::string out;
  std::string manifest;
  std::string format;
  std::string convention = "standard";
  int threads = 0;
};

std::string num(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return ec == std::errc() ? std::string(buf, ptr) : "nan";
}

std::string render_csv(const Csv& csv) {
  std::ostringstream os;
  os << "# " << csv.comment << '\n';
  for (std::size_t i = 0; i < csv.header.size(); ++i) os << (i ? "," : "") << csv.header[i];
  os << '\n';
  for (const auto& r : csv.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << '\n';
  }
  return os.str();
}

void flatten(const nlohmann::json& j, const std::string& prefix, Csv& csv, std::vector<std::string>& row) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, csv, row);
  } else if (j.is_array()) {
    csv.header.push_back(prefix);
    row.push_back('"' + j.dump() + '"');
  } else {
    csv.header.push_back(prefix);
    row.push_back(j.is_number_float() ? num(j.get<double>()) : j.is_string() ? j.get<std::string>() : j.dump());
  }
}

Csv flatten_to_csv(const nlohmann::json& j) {
  Csv csv;
  csv.comment = "single-row flattening of the JSON report; nested keys joined with '.'";
  std::vector<std::string> row;
  flatten(j, "", csv, row);
  csv.rows.push_back(std::move(row));
  return csv;
}

std::string fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

nlohmann::json header(const std::string& command) { return {{"schema", 1}, {"command", command}}; }

DetConvention convention_of(const Common& c) {
  try {
    return parse_convention(c.convention);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

MonteCarloOptions mc_of(const Common& c) {
  MonteCarloOptions mc;
  mc.samples = c.samples;
  mc.seed = c.seed;
  mc.threads = c.threads;
  return mc;
}

// ---------------------------------------------------------------- commands

struct PolytopeArgs {
  std::string poly;
};

Artifact run_polytope(const PolytopeArgs& a, const Common&) {
  const Polynomial p = parse_poly(a.poly);
  const auto* sp = std::get_if<SparsePolynomial>(&p);
  if (!sp) throw UsageError("polytope needs an expanded polynomial; '" + a.poly + "' is evaluation-only");
  const auto poly = weight_polytope(*sp);
  nlohmann::json facets = nlohmann::json::array();
  for (const auto& h : poly.halfspaces()) {
    nlohmann::json n = nlohmann::json::array();
    for (const auto& x : h.normal) n.push_back(to_string(x));
    facets.push_back({{"normal", n}, {"offset", to_string(h.offset)}, {"equality", h.equality}});
  }
  auto j = header("polytope");
  j["poly"] = a.poly;
  j["polytope"] = poly.to_json();
  j["affine_dim"] = poly.affine_dim();
  j["halfspaces"] = facets;
  j["support_size"] = support(*sp).size();
  return {j, std::nullopt};
}

struct SemistableArgs {
  std::string pair;
  std::size_t trials = 50;
  std::string expect;
};

Artifact run_semistable(const SemistableArgs& a, const Common& c) {
  const auto pair = parse_pair(a.pair);
  const auto verdict = semistable_probe(pair, {a.trials, c.seed, c.threads});
  auto j = header("semistable");
  j["pair"] = a.pair;
  j["seed"] = c.seed;
  j["diagonal_torus_contained"] = semistable_diagonal(pair);
  j["verdict"] = verdict.to_json();
  Artifact art{j, std::nullopt};
  if (!a.expect.empty()) {
    const bool ok = (a.expect == "semistable") == (verdict.status != StabilityStatus::destabilized);
    art.exit_code = ok ? 0 : 1;
  }
  return art;
}

struct StableSearchArgs {
  std::string pair;
  std::optional<int> q;
  int m_max = 50;
  std::string variant = "pair";
  std::size_t trials = 20;
  std::string expect;
};

Artifact run_stable_search(const StableSearchArgs& a, const Common& c) {
  const auto pair = parse_pair(a.pair);
  const StableVariant variant = a.variant == "variety" ? StableVariant::variety : StableVariant::pair;
  int q = 1;
  if (a.q) {
    q = *a.q;
  } else if (const auto d = variety_pair_degree(a.pair)) {
    const auto x = rational_normal_curve(*d);
    q = x.deg_R * x.deg_delta;
  }
  const auto r = stable_search(pair, q, a.m_max, variant, {a.trials, c.seed, c.threads});
  auto j = header("stable-search");
  j["pair"] = a.pair;
  j["seed"] = c.seed;
  j["result"] = r.to_json();
  Artifact art{j, std::nullopt};
  if (!a.expect.empty()) art.exit_code = (a.expect == "stable") == r.m.has_value() ? 0 : 1;
  return art;
}

struct EnergyArgs {
  std::string pair;
  std::string sigma = "identity";
  std::optional<double> epsilon;
  double b = 0;
  std::size_t rays = 32;
  int decades = 8;
  bool orbit = false;
  int restarts = 24;
};

Artifact run_energy(const EnergyArgs& a, const Common& c) {
  const auto pair = parse_pair(a.pair);
  const auto sigma = parse_sigma(a.sigma, pair.ambient());
  EnergyOptions eo;
  eo.mc.seed = c.seed;
  eo.mc.threads = c.threads;
  auto j = header("energy");
  j["pair"] = a.pair;
  j["sigma_spec"] = a.sigma;
  j["energy"] = nu_pair(pair, sigma, eo).to_json();
  j["fs_distance_identity"] = fs_distance(pair);
  if (a.epsilon) {
    PropernessOptions po;
    po.rays = a.rays;
    po.decades = a.decades;
    po.seed = c.seed;
    po.threads = c.threads;
    j["properness"] = properness_probe(pair, *a.epsilon, a.b, po).to_json();
  }
  if (a.orbit) {
    OrbitSearchOptions oo;
    oo.restarts = a.restarts;
    oo.seed = c.seed;
    oo.threads = c.threads;
    const auto dist = orbit_distance(pair, oo);
    const auto inf = sample_inf_nu(pair, oo);
    j["orbit"] = {{"distance", dist.to_json()},
                  {"inf_nu", inf.inf_nu},
                  {"inf_nu_evaluations", inf.evaluations},
                  {"difference", inf.inf_nu - dist.log_tan_sq},
                  {"note", "numerical estimates, not certificates"}};
  }
  return {j, std::nullopt};
}

struct EnergyScanArgs {
  std::string pair;
  std::size_t rays = 8;
  int decades = 6;
};

Artifact run_energy_scan(const EnergyScanArgs& a, const Common& c) {
  const auto pair = parse_pair(a.pair);
  const auto scan = energy_scan(pair, a.rays, a.decades, c.seed);
  auto j = header("energy-scan");
  j["pair"] = a.pair;
  j["seed"] = c.seed;
  nlohmann::json rays = nlohmann::json::array();
  for (const auto& r : scan.rays) rays.push_back(r.exponents());
  j["rays"] = rays;
  Csv csv;
  csv.comment = "ray = index of the 1-PS (exponents in the JSON report); t = |t| along lambda(t); nu = pair energy; J = Aubin functional of v";
  csv.header = {"ray", "t", "nu", "J"};
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : scan.rows) {
    csv.rows.push_back({std::to_string(r.ray), num(r.t), num(r.nu), num(r.j)});
    rows.push_back({{"ray", r.ray}, {"t", r.t}, {"nu", r.nu}, {"J", r.j}});
  }
  j["rows"] = rows;
  return {j, csv};
}

struct PolyArgs {
  std::string poly;
  double s = 1;
  bool force_mc = false;
  bool audit = false;
};

Artifact run_zeta(const PolyArgs& a, const Common& c) {
  const Polynomial p = parse_poly(a.poly);
  const auto mc = mc_of(c);
  const auto z = zeta(p, a.s, mc);
  const auto m = mc_moment(p, a.s, mc);
  auto j = header("zeta");
  j["poly"] = a.poly;
  j["zeta"] = z.to_json();
  j["moment"] = {{"mean", m.mean},
                 {"stderr", m.std_error},
                 {"tail_fraction", m.tail_fraction},
                 {"tail_warning", m.tail_warning},
                 {"resampled_zeros", m.resampled_zeros}};
  if (const auto* sp = std::get_if<SparsePolynomial>(&p)) {
    if (const auto coeff = scaled_maximal_minor(*sp)) {
      const int rows = sp->shape().rows;
      const int cols = sp->shape().cols;
      const double log_c = a.s * std::log(std::norm(*coeff));
      nlohmann::json closed;
      for (auto conv : {DetConvention::standard, DetConvention::paper}) {
        closed[to_string(conv)] = {{"moment", std::exp(log_c + log_det_moment(rows, a.s, conv))},
                                   {"zeta", std::exp(log_c + log_zeta_minor(rows, cols, a.s, conv))}};
      }
      closed["selected"] = c.convention;
      j["closed_form"] = closed;
    }
  }
  return {j, std::nullopt};
}

Artifact run_height(const PolyArgs& a, const Common& c) {
  const Polynomial p = parse_poly(a.poly);
  HeightOptions ho;
  ho.mc = mc_of(c);
  ho.force_monte_carlo = a.force_mc;
  auto j = header("height");
  j["poly"] = a.poly;
  j["height"] = height(p, ho).to_json();
  if (a.audit) j["bounds_audit"] = height_bounds_audit(p, ho).to_json();
  return {j, std::nullopt};
}

struct DegenerationArgs {
  int n = 1;
  std::string d_range = "10:200";
  int big_n = 0;  // 0 means N = d
  std::optional<double> mu;
};

Artifact run_degeneration(const DegenerationArgs& a, const Common& c) {
  const auto [lo, hi] = parse_range(a.d_range);
  const auto conv = convention_of(c);
  if (a.n != 1 && !a.mu) throw UsageError("degeneration with n > 1 needs --mu to fix deg(Delta) = n(n+1)d - d*mu");
  auto j = header("degeneration");
  j["convention"] = c.convention;
  Csv csv;
  csv.comment = "d = degree; hF_limit = limiting height of R; hDelta_limit = limiting height of Delta; delta = |deg_Delta*hF - deg_R*hDelta|; delta_over_d2 = delta/d^2; convention = " + c.convention;
  csv.header = {"d", "hF_limit", "hDelta_limit", "delta", "delta_over_d2"};
  nlohmann::json rows = nlohmann::json::array();
  for (int d = lo; d <= hi; ++d) {
    const int deg_r = d * (a.n + 1);
    const int deg_delta = a.mu ? static_cast<int>(std::lround(a.n * (a.n + 1) * d - d * *a.mu)) : 2 * d - 2;
    const int big_n = a.big_n > 0 ? a.big_n : d;
    const auto r = degeneration_limit_heights(a.n, big_n, d, deg_r, deg_delta, conv);
    rows.push_back(r.to_json());
    const double dd = static_cast<double>(d) * d;
    csv.rows.push_back({std::to_string(d), num(r.hF), num(r.hDelta), num(r.delta), num(r.delta / dd)});
  }
  j["rows"] = rows;
  return {j, csv};
}

struct DiscrepancyArgs {
  std::string family = "rnc";
  std::string d_range = "2:6";
  bool force_mc = false;
};

Artifact run_discrepancy(const DiscrepancyArgs& a, const Common& c) {
  if (a.family != "rnc") throw UsageError("unknown family '" + a.family + "' (only rnc is built in)");
  const auto [lo, hi] = parse_range(a.d_range);
  HeightOptions ho;
  ho.mc = mc_of(c);
  ho.force_monte_carlo = a.force_mc;
  const auto table = discrepancy_table(lo, hi, ho);
  auto j = header("discrepancy");
  j["family"] = a.family;
  j["seed"] = c.seed;
  j["samples"] = c.samples;
  j["table"] = table.to_json();
  Csv csv;
  csv.comment = "d = degree; hF, hDelta = heights of R and Delta with 3-stderr half-widths; delta = |deg_Delta*hF - deg_R*hDelta|; fitted exponent of delta vs d = " +
                num(table.fitted_exponent) + " +- " + num(table.exponent_stderr);
  csv.header = {"d", "deg_R", "deg_delta", "hF", "hF_ci", "hDelta", "hDelta_ci", "delta", "delta_ci", "delta_over_d2"};
  for (const auto& r : table.rows) {
    csv.rows.push_back({std::to_string(r.d), std::to_string(r.deg_R), std::to_string(r.deg_delta), num(r.hF.h),
                        num(r.hF.ci_halfwidth), num(r.hDelta.h), num(r.hDelta.ci_halfwidth), num(r.delta), num(r.delta_ci),
                        num(r.delta_over_d2)});
  }
  return {j, csv};
}

struct VarietyArgs {
  std::string family = "rnc";
  int d = 2;
  std::string emit;
};

Artifact run_variety(const VarietyArgs& a, const Common&) {
  if (a.family != "rnc") throw UsageError("unknown family '" + a.family + "' (only rnc is built in)");
  const auto x = rational_normal_curve(a.d);
  auto j = header("variety");
  j["example"] = x.summary();
  auto as_json = [](const Polynomial& p) {
    const auto* sp = std::get_if<SparsePolynomial>(&p);
    return sp ? sp->to_json() : nlohmann::json(nullptr);
  };
  if (!a.emit.empty()) {
    const nlohmann::json polys{{"resultant", as_json(x.R)}, {"hyperdiscriminant", as_json(x.Delta)}};
    std::ofstream f(a.emit);
    if (!f) throw std::runtime_error("cannot write '" + a.emit + "'");
    f << polys.dump(1) << '\n';
    j["emitted"] = a.emit;
    j["emitted_keys"] = {"resultant", "hyperdiscriminant"};
  }
  return {j, std::nullopt};
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << bytes;
}

nlohmann::json flags_of(const CLI::App& sub) {
  nlohmann::json flags = nlohmann::json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_name() == "--help" || opt->count() == 0) continue;
    const auto& res = opt->results();
    flags[opt->get_name()] = res.size() == 1 ? nlohmann::json(res.front()) : nlohmann::json(res);
  }
  return flags;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact weight polytopes, pair energies and Gaussian heights", "stabpair"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Common common;

  auto add_common = [&](CLI::App* sub, bool with_samples, bool with_convention) {
    sub->add_option("--seed", common.seed, "Master seed")->capture_default_str();
    if (with_samples) sub->add_option("--samples", common.samples, "Monte Carlo sample count")->capture_default_str();
    if (with_convention) {
      sub->add_option("--convention", common.convention, "Determinant moment convention")
          ->check(CLI::IsMember({"standard", "paper"}))
          ->capture_default_str();
    }
    sub->add_option("--out", common.out, "Write the artifact here instead of stdout");
    sub->add_option("--manifest", common.manifest, "Run manifest path (default: <out>.manifest.json)");
    sub->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--threads", common.threads, "Worker threads (default: STABPAIR_THREADS or all cores)");
  };

  PolytopeArgs polytope;
  auto* s_poly = app.add_subcommand("polytope", "Weight polytope of a polynomial");
  s_poly->add_option("--poly", polytope.poly, "Polynomial spec")->required();
  add_common(s_poly, false, false);

  SemistableArgs semi;
  auto* s_semi = app.add_subcommand("semistable", "Probe semistability of a pair on conjugate tori");
  s_semi->add_option("--pair", semi.pair, "Pair spec v=...,w=...")->required();
  s_semi->add_option("--trials", semi.trials, "Conjugate tori besides the diagonal one")->capture_default_str();
  s_semi->add_option("--expect", semi.expect, "Exit 1 unless the verdict matches")
      ->check(CLI::IsMember({"semistable", "destabilized"}));
  add_common(s_semi, false, false);

  StableSearchArgs stable;
  auto* s_stable = app.add_subcommand("stable-search", "Least exponent m making the twisted pair semistable");
  s_stable->add_option("--pair", stable.pair, "Pair spec v=...,w=...")->required();
  s_stable->add_option("--q", stable.q, "Identity twist exponent (default deg R * deg Delta for rnc pairs, else 1)");
  s_stable->add_option("--m-max", stable.m_max, "Largest m tried")->capture_default_str();
  s_stable->add_option("--variant", stable.variant, "Twist form")->check(CLI::IsMember({"pair", "variety"}))->capture_default_str();
  s_stable->add_option("--trials", stable.trials, "Conjugate tori for the cross-check")->capture_default_str();
  s_stable->add_option("--expect", stable.expect, "Exit 1 unless the verdict matches")
      ->check(CLI::IsMember({"stable", "not-stable"}));
  add_common(s_stable, false, false);

  EnergyArgs energy;
  auto* s_energy = app.add_subcommand("energy", "Pair energy at a group element, properness and orbit distance");
  s_energy->add_option("--pair", energy.pair, "Pair spec v=...,w=...")->required();
  s_energy->add_option("--sigma", energy.sigma, "identity | diag:.. | ray:e..@t | matrix:.. | file.json")->capture_default_str();
  s_energy->add_option("--epsilon", energy.epsilon, "Run the properness probe nu >= epsilon J + b");
  s_energy->add_option("--b", energy.b, "Properness offset")->capture_default_str();
  s_energy->add_option("--rays", energy.rays, "Rays for the properness probe")->capture_default_str();
  s_energy->add_option("--decades", energy.decades, "Decades of |t| per ray")->capture_default_str();
  s_energy->add_flag("--orbit", energy.orbit, "Estimate the orbit distance and inf nu");
  s_energy->add_option("--restarts", energy.restarts, "Optimizer restarts for --orbit")->capture_default_str();
  add_common(s_energy, false, false);

  EnergyScanArgs scan;
  auto* s_scan = app.add_subcommand("energy-scan", "nu and J along random diagonal rays (CSV)");
  s_scan->add_option("--pair", scan.pair, "Pair spec v=...,w=...")->required();
  s_scan->add_option("--rays", scan.rays, "Number of rays")->capture_default_str();
  s_scan->add_option("--decades", scan.decades, "Decades of |t| per ray")->capture_default_str();
  add_common(s_scan, false, false);

  PolyArgs zeta_args;
  auto* s_zeta = app.add_subcommand("zeta", "Gaussian local zeta function Z(P; s)");
  s_zeta->add_option("--poly", zeta_args.poly, "Polynomial spec")->required();
  s_zeta->add_option("--s", zeta_args.s, "Exponent s >= 0")->capture_default_str();
  add_common(s_zeta, true, true);

  PolyArgs height_args;
  auto* s_height = app.add_subcommand("height", "Height h(P) = -log Z(P;1) + Z'(P;0)");
  s_height->add_option("--poly", height_args.poly, "Polynomial spec")->required();
  s_height->add_flag("--force-mc", height_args.force_mc, "Sample both terms even when closed forms exist");
  s_height->add_flag("--audit", height_args.audit, "Report the height bounds audit (one-row polynomials)");
  add_common(s_height, true, false);

  DegenerationArgs degen;
  auto* s_degen = app.add_subcommand("degeneration", "Closed-form limiting heights along generic degenerations (CSV)");
  s_degen->add_option("--n", degen.n, "Dimension of X")->capture_default_str();
  s_degen->add_option("--d-range", degen.d_range, "Degrees a:b")->capture_default_str();
  s_degen->add_option("--N", degen.big_n, "Ambient dimension (default: N = d)");
  s_degen->add_option("--mu", degen.mu, "mu in deg(Delta) = n(n+1)d - d*mu (required for n > 1)");
  add_common(s_degen, false, true);

  DiscrepancyArgs disc;
  auto* s_disc = app.add_subcommand("discrepancy", "Height discrepancy table for a built-in family (CSV)");
  s_disc->add_option("--family", disc.family, "Family")->capture_default_str();
  s_disc->add_option("--d", disc.d_range, "Degrees a:b")->capture_default_str();
  s_disc->add_flag("--force-mc", disc.force_mc, "Sample both height terms");
  add_common(s_disc, true, false);

  VarietyArgs var;
  auto* s_var = app.add_subcommand("variety", "Construct R_X and Delta_X for a built-in family");
  s_var->add_option("--family", var.family, "Family")->capture_default_str();
  s_var->add_option("--d", var.d, "Degree")->capture_default_str();
  s_var->add_option("--emit", var.emit, "Write the expanded polynomials to this JSON file");
  add_common(s_var, false, false);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  const auto started = std::chrono::steady_clock::now();
  Artifact art;
  try {
    if (name == "polytope") art = run_polytope(polytope, common);
    else if (name == "semistable") art = run_semistable(semi, common);
    else if (name == "stable-search") art = run_stable_search(stable, common);
    else if (name == "energy") art = run_energy(energy, common);
    else if (name == "energy-scan") art = run_energy_scan(scan, common);
    else if (name == "zeta") art = run_zeta(zeta_args, common);
    else if (name == "height") art = run_height(height_args, common);
    else if (name == "degeneration") art = run_degeneration(degen, common);
    else if (name == "discrepancy") art = run_discrepancy(disc, common);
    else if (name == "variety") art = run_variety(var, common);
  } catch (const SpecError& e) {
    err << "stabpair " << name << ": " << e.what() << '\n';
    return 2;
  } catch (const UsageError& e) {
    err << "stabpair " << name << ": " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "stabpair " << name << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "stabpair " << name << ": error: " << e.what() << '\n';
    return 3;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  std::string format = common.format;
  if (format.empty()) format = art.csv ? "csv" : "json";
  std::string bytes;
  if (format == "csv") {
    bytes = render_csv(art.csv ? *art.csv : flatten_to_csv(art.json));
  } else {
    bytes = art.json.dump(2) + "\n";
  }

  try {
    if (common.out.empty()) {
      out << bytes;
    } else {
      write_file(common.out, bytes);
    }
    std::string manifest_path = common.manifest;
    if (manifest_path.empty() && !common.out.empty()) manifest_path = common.out + ".manifest.json";
    if (!manifest_path.empty()) {
      nlohmann::json manifest{{"schema", 1},
                              {"subcommand", name},
                              {"flags", flags_of(*sub)},
                              {"seed", common.seed},
                              {"versions", {{"stabpair", kVersion}, {"gmp", gmp_version}, {"compiler", __VERSION__}}},
                              {"wall_time_seconds", wall},
                              {"outputs", {{{"path", common.out.empty() ? "-" : common.out}, {"format", format}, {"fnv1a64", fnv1a(bytes)}}}}};
      write_file(manifest_path, manifest.dump(2) + "\n");
    }
  } catch (const std::exception& e) {
    err << "stabpair " << name << ": error: " << e.what() << '\n';
    return 3;
  }
  return art.exit_code;
}

}  // namespace stabpair::cli
