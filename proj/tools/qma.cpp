// qma: command-line front end.
//
// Every command writes a JSON document {"header": {...}, "body": {...}}. The body is
// deterministic for fixed flags and inputs; timestamps and timings live in the header.
// Exit codes: 0 all checks pass, 1 numerical check failure, 2 usage or configuration error.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qma/experiments.hpp"
#include "qma/quat_linalg.hpp"
#include "qma/solver.hpp"

using json = nlohmann::ordered_json;
using namespace qma;

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kUsage = 2 };

std::string utc_timestamp() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

// Rejects keys outside `allowed`.
void check_keys(const json& doc, const std::set<std::string>& allowed, const std::string& what) {
  if (!doc.is_object()) throw InputError(what + " must be a JSON object");
  for (const auto& [k, v] : doc.items()) {
    if (!allowed.count(k)) throw InputError(what + ": unknown field '" + k + "'");
  }
}

template <class T>
T field(const json& doc, const std::string& key, const T& fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputError("field '" + key + "' has the wrong type");
  }
}

template <class T>
T required(const json& doc, const std::string& key) {
  if (!doc.contains(key)) throw InputError("missing field '" + key + "'");
  return field<T>(doc, key, T{});
}

std::string sig6(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

std::string csv_number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

// Density of s from a catalog name or an inline table of [s, f] pairs.
struct DensitySpec {
  RealFunction f;
  std::optional<RadialProfile> manufactured;
  json resolved;
};

DensitySpec parse_density(const json& d, std::size_t n) {
  DensitySpec out;
  if (d.is_string()) {
    const ModelFunction m = make_model(d.get<std::string>(), n);
    if (!m.density_of_s) throw InputError("density '" + m.name + "' is not radial");
    out.f = m.density_of_s;
    out.manufactured = m.profile;
    out.resolved = m.name;
    return out;
  }
  if (!d.is_array() || d.size() < 2) throw InputError("density must be a catalog name or a table of at least two [s, f] pairs");
  std::vector<std::pair<double, double>> table;
  for (const auto& row : d) {
    if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number()) {
      throw InputError("density table rows must be [s, f] number pairs");
    }
    table.emplace_back(row[0].get<double>(), row[1].get<double>());
  }
  for (std::size_t i = 1; i < table.size(); ++i) {
    if (!(table[i].first > table[i - 1].first)) throw InputError("density table: s values must increase strictly");
  }
  for (const auto& [s, f] : table) {
    if (f < 0.0) throw InputError("density table: negative value at s = " + csv_number(s));
  }
  // linear interpolation, constant beyond the ends
  out.f = [table](double s) {
    if (s <= table.front().first) return table.front().second;
    if (s >= table.back().first) return table.back().second;
    const auto it = std::upper_bound(table.begin(), table.end(), s,
                                     [](double v, const std::pair<double, double>& p) { return v < p.first; });
    const auto& [s1, f1] = *it;
    const auto& [s0, f0] = *(it - 1);
    return f0 + (f1 - f0) * (s - s0) / (s1 - s0);
  };
  out.resolved = d;
  return out;
}

double parse_boundary(const json& b, const DensitySpec& d, double radius) {
  if (b.is_number()) return b.get<double>();
  if (b.is_string() && b.get<std::string>() == "auto") {
    if (!d.manufactured) throw InputError("boundary 'auto' needs a catalog density with a known solution");
    return d.manufactured->g(radius * radius);
  }
  throw InputError("boundary must be a number or \"auto\"");
}

std::vector<double> parse_output_grid(const json& cfg, double radius) {
  if (!cfg.contains("output_radii")) return uniform_radii(radius, 101);
  const json& g = cfg.at("output_radii");
  if (g.is_number_integer()) return uniform_radii(radius, g.get<std::size_t>());
  if (g.is_array()) {
    std::vector<double> r;
    for (const auto& v : g) {
      if (!v.is_number()) throw InputError("output_radii entries must be numbers");
      r.push_back(v.get<double>());
    }
    return r;
  }
  throw InputError("output_radii must be a count or a list of radii");
}

json samples_json(const std::vector<Sample>& s) {
  json a = json::array();
  for (const auto& x : s) {
    if (std::isfinite(x.value)) {
      a.push_back({x.radius, x.value});
    } else {
      a.push_back({x.radius, x.value < 0 ? "-inf" : "nan"});
    }
  }
  return a;
}

json report_json(const SolveReport& r) {
  json j;
  j["mode"] = r.mode;
  j["residual_sup"] = r.residual_sup;
  j["iterations"] = r.iterations;
  j["solution_sup"] = std::isfinite(r.solution_sup) ? json(r.solution_sup) : json("inf");
  j["residual_history"] = r.residual_history;
  j["samples"] = samples_json(r.samples);
  return j;
}

std::string samples_csv(const std::vector<Sample>& s) {
  std::ostringstream os;
  os << "radius,value\n";
  for (const auto& x : s) os << csv_number(x.radius) << ',' << csv_number(x.value) << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------

struct Output {
  json header;
  json body;
  std::string table;  // human-readable summary
  int code = kOk;
};

Output cmd_moore(const std::string& path) {
  const json doc = read_json_file(path);
  check_keys(doc, {"n", "entries"}, "matrix file");
  const auto n = required<std::size_t>(doc, "n");
  if (!doc.contains("entries")) throw InputError("missing field 'entries'");
  const json& e = doc.at("entries");
  if (!e.is_array()) throw InputError("entries must be a list");
  std::vector<Quaternion> q;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const json& v = e[i];
    if (!v.is_array() || v.size() != 4) throw InputError("entry " + std::to_string(i) + " is not a 4-tuple [w, x, y, z]");
    for (const auto& c : v) {
      if (!c.is_number()) throw InputError("entry " + std::to_string(i) + " has a non-numeric component");
    }
    q.emplace_back(v[0].get<double>(), v[1].get<double>(), v[2].get<double>(), v[3].get<double>());
  }
  const auto m = HyperhermitianMatrix::from_entries(n, std::move(q), 1e-12);
  Output out;
  out.body["command"] = "moore";
  out.body["config"] = {{"in", path}};
  out.body["n"] = n;
  try {
    const MooreDeterminant d = moore_det_cross_checked(m);
    out.body["moore_det"] = d.pfaffian_route;
    out.body["eigen_route"] = d.eigen_route;
    out.body["relative_gap"] = d.relative_gap;
  } catch (const NumericalError& err) {
    out.body["error"] = err.what();
    out.code = kCheckFailed;
  }
  const Eigen::VectorXd ev = psi_spectrum(m);
  out.body["psi_spectrum"] = std::vector<double>(ev.data(), ev.data() + ev.size());
  out.body["positive"] = is_hyperhermitian_positive(m);
  out.body["strictly_positive"] = is_hyperhermitian_strictly_positive(m);
  if (out.code == kOk) out.table = "moore_det = " + sig6(out.body["moore_det"].get<double>()) + "\n";
  return out;
}

Output cmd_verify(const std::string& suite, std::uint64_t seed, bool parallel) {
  const auto rows = run_verify(suite, seed, parallel);
  Output out;
  out.body["command"] = "verify";
  out.body["config"] = {{"suite", suite}, {"seed", seed}};
  json checks = json::array();
  json timings = json::array();
  std::ostringstream table;
  bool all = true;
  for (const auto& r : rows) {
    checks.push_back({{"suite", r.suite}, {"check", r.name}, {"passed", r.passed}, {"measured", r.measured},
                      {"tolerance", r.tolerance}, {"detail", r.detail}});
    timings.push_back({{"suite", r.suite}, {"check", r.name}, {"seconds", r.seconds}});
    table << (r.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(12) << r.suite << r.name << "  ["
          << sig6(r.measured) << "]\n";
    all = all && r.passed;
  }
  out.body["checks"] = checks;
  out.body["all_passed"] = all;
  out.header["timings"] = timings;
  out.table = table.str();
  out.code = all ? kOk : kCheckFailed;
  return out;
}

Output cmd_fundamental(std::size_t n, std::size_t levels, double radius, double tol, const std::string& csv) {
  const FundamentalReport r = run_fundamental(n, levels, radius);
  Output out;
  out.body["command"] = "fundamental";
  out.body["config"] = {{"n", n}, {"delta_levels", levels}, {"radius", radius}, {"tol", tol}};
  out.body["limit"] = r.limit;
  json rows = json::array();
  std::ostringstream c, t;
  c << "delta,mass,error,observed_order\n";
  t << std::left << std::setw(14) << "delta" << std::setw(14) << "mass" << std::setw(14) << "error" << "order\n";
  for (const auto& row : r.rows) {
    rows.push_back({{"delta", row.delta}, {"mass", row.mass}, {"error", row.error},
                    {"observed_order", row.observed_order ? json(*row.observed_order) : json(nullptr)}});
    c << csv_number(row.delta) << ',' << csv_number(row.mass) << ',' << csv_number(row.error) << ','
      << (row.observed_order ? csv_number(*row.observed_order) : "") << '\n';
    t << std::setw(14) << sig6(row.delta) << std::setw(14) << sig6(row.mass) << std::setw(14) << sig6(row.error)
      << (row.observed_order ? sig6(*row.observed_order) : "-") << '\n';
  }
  out.body["rows"] = rows;
  out.body["extrapolated"] = r.extrapolated;
  out.body["relative_error"] = r.relative_error;
  out.body["within_tolerance"] = r.relative_error < tol;
  t << "extrapolated " << sig6(r.extrapolated) << " vs " << sig6(r.limit) << " (relative error "
    << sig6(r.relative_error) << ")\n";
  out.table = t.str();
  if (!csv.empty()) write_text(csv, c.str());
  out.code = r.relative_error < tol ? kOk : kCheckFailed;
  return out;
}

Output cmd_integrability(const std::string& model, std::size_t n, double p, std::size_t levels) {
  const IntegrabilityReport r = run_integrability({model, n, p, levels});
  Output out;
  out.body["command"] = "integrability";
  out.body["config"] = {{"model", model}, {"n", n}, {"p", p}, {"levels", levels}};
  json lv = json::array();
  std::ostringstream t;
  for (const auto& l : r.levels) {
    lv.push_back({{"cutoff", l.cutoff}, {"integral", l.integral}, {"increment", l.increment}, {"ratio", l.ratio}});
    t << "r = " << std::left << std::setw(12) << sig6(l.cutoff) << " integral " << std::setw(12) << sig6(l.integral)
      << " ratio " << sig6(l.ratio) << '\n';
  }
  out.body["levels"] = lv;
  out.body["critical_p"] = r.critical_p ? json(*r.critical_p) : json(nullptr);
  out.body["verdict"] = to_string(r.verdict);
  t << to_string(r.verdict);
  if (r.critical_p) {
    t << " (threshold p = " << sig6(*r.critical_p) << ")";
    const Convergence expect = p < *r.critical_p ? Convergence::Convergent : Convergence::Divergent;
    const bool agrees = r.verdict == Convergence::Inconclusive || r.verdict == expect;
    out.body["agrees_with_threshold"] = agrees;
    if (!agrees) out.code = kCheckFailed;
  }
  t << '\n';
  out.table = t.str();
  return out;
}

Output cmd_solve(const std::string& path, const std::string& csv) {
  const json cfg = read_json_file(path);
  check_keys(cfg, {"mode", "n", "radius", "density", "boundary", "tolerance", "max_iters", "grid_spacing", "output_radii"},
             "solve config");
  const auto mode = field<std::string>(cfg, "mode", "radial");
  const auto n = field<std::size_t>(cfg, "n", 1);
  const auto radius = field<double>(cfg, "radius", 1.0);
  if (!cfg.contains("density")) throw InputError("missing field 'density'");
  const DensitySpec dens = parse_density(cfg.at("density"), n);
  const double boundary = parse_boundary(cfg.contains("boundary") ? cfg.at("boundary") : json(0.0), dens, radius);
  const auto radii = parse_output_grid(cfg, radius);

  Output out;
  out.body["command"] = "solve";
  json resolved = {{"mode", mode}, {"n", n}, {"radius", radius}, {"density", dens.resolved}, {"boundary", boundary}};
  RadialProblem rp{n, radius, dens.f, boundary, field<double>(cfg, "tolerance", 1e-9)};
  std::vector<Sample> samples;
  if (mode == "radial") {
    if (cfg.contains("grid_spacing") || cfg.contains("max_iters")) throw InputError("grid_spacing and max_iters need mode \"grid\"");
    resolved["tolerance"] = rp.tol;
    const auto res = solve_radial(rp, radii);
    out.body["report"] = report_json(res.report);
    out.header["wall_time_solver"] = res.report.wall_time;
    samples = res.report.samples;
    if (dens.manufactured) {
      double err = 0.0;
      for (const auto& s : samples) err = std::max(err, std::abs(s.value - dens.manufactured->g(s.radius * s.radius)));
      out.body["manufactured_sup_error"] = err;
    }
  } else if (mode == "grid") {
    if (n != 1) throw InputError("grid mode solves n = 1 only");
    GridProblem gp;
    gp.radius = radius;
    gp.spacing = field<double>(cfg, "grid_spacing", 0.125);
    gp.tol = field<double>(cfg, "tolerance", 1e-8);
    gp.max_iters = field<std::size_t>(cfg, "max_iters", 20000);
    gp.f = [f = dens.f](const std::array<double, 4>& x) { return f(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]); };
    gp.boundary = [boundary](const std::array<double, 4>&) { return boundary; };
    resolved["tolerance"] = gp.tol;
    resolved["max_iters"] = gp.max_iters;
    resolved["grid_spacing"] = gp.spacing;
    const GridSolution sol = solve_grid_n1(gp);
    out.body["report"] = report_json(sol.report);
    out.header["wall_time_solver"] = sol.report.wall_time;
    samples = sol.report.samples;
    rp.tol = 1e-9;
    const RadialSolution radial(rp);
    out.body["radial_solver_sup_diff"] = grid_vs_radial_sup(sol, radial);
  } else {
    throw InputError("mode must be \"radial\" or \"grid\"");
  }
  out.body["config"] = resolved;
  std::ostringstream t;
  t << mode << " solve: " << out.body["report"]["iterations"] << " iterations, residual "
    << sig6(out.body["report"]["residual_sup"].get<double>()) << '\n';
  for (const auto& s : samples) t << "  u(" << sig6(s.radius) << ") = " << sig6(s.value) << '\n';
  out.table = t.str();
  if (!csv.empty()) write_text(csv, samples_csv(samples));
  return out;
}

// Stability config: {"n", "radius", "density", "q", "boundary_f", "boundary_g", "perturbations": [t...],
// optional "linf": {"q", "widths"}, optional "sublevel": {"p", "levels"}}.
Output cmd_stability(const std::string& path) {
  const json cfg = read_json_file(path);
  check_keys(cfg, {"n", "radius", "density", "q", "boundary_f", "boundary_g", "perturbations", "max_ratio", "linf",
                   "sublevel"},
             "stability config");
  const auto n = field<std::size_t>(cfg, "n", 1);
  const auto radius = field<double>(cfg, "radius", 1.0);
  if (!cfg.contains("density")) throw InputError("missing field 'density'");
  const DensitySpec dens = parse_density(cfg.at("density"), n);
  const auto q = field<double>(cfg, "q", 3.0);
  const auto cf = field<double>(cfg, "boundary_f", 0.0);
  const auto cg = field<double>(cfg, "boundary_g", 0.0);
  const auto ts = field<std::vector<double>>(cfg, "perturbations", {1e-1, 1e-2, 1e-3});
  const auto max_ratio = field<double>(cfg, "max_ratio", 10.0);
  if (ts.empty()) throw InputError("perturbations must not be empty");

  Output out;
  out.body["command"] = "stability";
  out.body["config"] = {{"n", n}, {"radius", radius}, {"density", dens.resolved}, {"q", q}, {"boundary_f", cf},
                        {"boundary_g", cg}, {"perturbations", ts}, {"max_ratio", max_ratio}};
  std::ostringstream t;
  json rows = json::array();
  double cmin = std::numeric_limits<double>::infinity(), cmax = 0.0;
  for (double tt : ts) {
    if (!(tt > 0.0)) throw InputError("perturbations must be positive");
    const RealFunction g = [f = dens.f, tt](double s) { return (1.0 + tt) * f(s); };
    const StabilityReport r = stability_experiment(n, radius, dens.f, g, cf, cg, q);
    rows.push_back({{"t", tt}, {"sup_diff", r.sup_diff}, {"boundary_diff", r.boundary_diff}, {"lq_diff", r.lq_diff},
                    {"c_hat", r.c_hat}});
    cmin = std::min(cmin, r.c_hat);
    cmax = std::max(cmax, r.c_hat);
    t << "t = " << std::left << std::setw(10) << sig6(tt) << " sup|u-v| " << std::setw(12) << sig6(r.sup_diff)
      << " C_hat " << sig6(r.c_hat) << '\n';
  }
  const double ratio = cmin > 0.0 ? cmax / cmin : std::numeric_limits<double>::infinity();
  out.body["rows"] = rows;
  out.body["c_hat_ratio"] = std::isfinite(ratio) ? json(ratio) : json("inf");
  bool ok = ratio < max_ratio;
  t << "C_hat max/min = " << sig6(ratio) << '\n';

  if (cfg.contains("linf")) {
    const json& l = cfg.at("linf");
    check_keys(l, {"q", "widths"}, "linf block");
    const auto lq = field<double>(l, "q", 3.0);
    const auto widths = field<std::vector<double>>(l, "widths", {0.5, 0.25, 0.125, 0.0625});
    const LinfReport r = linf_experiment(n, radius, lq, concentrating_family(widths));
    json members = json::array();
    for (const auto& m : r.members) members.push_back({{"label", m.label}, {"raw_norm", m.raw_norm}, {"sup_u", m.sup_u}});
    out.body["linf"] = {{"q", lq}, {"members", members}, {"max_sup", r.max_sup}, {"growth", r.growth}};
    t << "L^inf: q = " << sig6(lq) << ", max sup|u| " << sig6(r.max_sup) << ", growth " << sig6(r.growth) << '\n';
  }
  if (cfg.contains("sublevel")) {
    const json& s = cfg.at("sublevel");
    check_keys(s, {"p", "levels"}, "sublevel block");
    if (!dens.manufactured) throw InputError("sublevel needs a catalog density with a known solution");
    const auto p = field<double>(s, "p", 1.5);
    const auto levels = field<std::vector<double>>(s, "levels", {0.5, 1.0, 2.0, 4.0});
    const RadialProfile zero{n, [](double) { return 0.0; }, [](double) { return 0.0; }, [](double) { return 0.0; }};
    const SublevelReport r = sublevel_volume_decay(*dens.manufactured, zero, radius, p, levels);
    json rs = json::array();
    for (const auto& row : r.rows) {
      rs.push_back({{"level", row.level}, {"radius", row.radius}, {"volume", row.volume}, {"constant", row.constant}});
    }
    out.body["sublevel"] = {{"p", p}, {"mass", r.mass}, {"rows", rs}, {"max_constant", r.max_constant}};
    t << "sublevel: mass " << sig6(r.mass) << ", smallest admissible constant " << sig6(r.max_constant) << '\n';
    ok = ok && std::isfinite(r.max_constant);
  }
  out.body["bounded"] = ok;
  out.table = t.str();
  out.code = ok ? kOk : kCheckFailed;
  return out;
}

// Renders a saved report as a table.
Output cmd_report(const std::string& path) {
  const json doc = read_json_file(path);
  if (!doc.is_object() || !doc.contains("body")) throw InputError("'" + path + "' is not a qma report");
  const json& body = doc.at("body");
  Output out;
  out.body = body;
  std::ostringstream t;
  t << "command: " << body.value("command", "?") << '\n';
  const std::function<void(const json&, const std::string&)> walk = [&](const json& j, const std::string& prefix) {
    if (j.is_object()) {
      for (const auto& [k, v] : j.items()) walk(v, prefix.empty() ? k : prefix + "." + k);
    } else if (j.is_array()) {
      t << prefix << ": [" << j.size() << " items]\n";
    } else if (j.is_number_float()) {
      t << prefix << ": " << sig6(j.get<double>()) << '\n';
    } else {
      t << prefix << ": " << j.dump() << '\n';
    }
  };
  walk(body, "");
  out.table = t.str();
  if (body.contains("all_passed") && !body["all_passed"].get<bool>()) out.code = kCheckFailed;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quaternionic Monge-Ampere toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string out_path;
  app.add_option("--out", out_path, "write the JSON report here and print a table to stdout");

  auto* moore = app.add_subcommand("moore", "Moore determinant of a hyperhermitian matrix file");
  std::string moore_in;
  moore->add_option("--in", moore_in, "matrix file")->required();

  auto* verify = app.add_subcommand("verify", "run verification suites");
  std::string suite = "all";
  std::uint64_t seed = 1;
  bool parallel = false;
  verify->add_option("--suite", suite, "forms | moore | qc | cpr | fundamental | radial | mprime | all");
  verify->add_option("--seed", seed, "base seed");
  verify->add_flag("--parallel", parallel, "run suites concurrently");

  auto* solve = app.add_subcommand("solve", "Dirichlet problem from a config file");
  std::string solve_cfg, solve_csv;
  solve->add_option("--config", solve_cfg, "problem configuration")->required();
  solve->add_option("--csv", solve_csv, "write sampled solution as CSV");

  auto* fund = app.add_subcommand("fundamental", "Monge-Ampere mass of -1/(||q||^2 + delta)");
  std::size_t fund_n = 1, fund_levels = 10;
  double fund_radius = 1.0, fund_tol = 5e-3;
  std::string fund_csv;
  fund->add_option("--n", fund_n, "quaternionic dimension");
  fund->add_option("--delta-levels", fund_levels, "delta = 2^-k, k = 1..K");
  fund->add_option("--radius", fund_radius, "ball radius");
  fund->add_option("--tol", fund_tol, "relative tolerance for the extrapolated mass");
  fund->add_option("--csv", fund_csv, "write the table as CSV");

  auto* integ = app.add_subcommand("integrability", "L^p integrability sweep near the singularity");
  std::string integ_model;
  std::size_t integ_n = 1, integ_levels = 12;
  double integ_p = 1.0;
  integ->add_option("--model", integ_model, "catalog model name[:params]")->required();
  integ->add_option("--n", integ_n, "quaternionic dimension");
  integ->add_option("--p", integ_p, "exponent")->required();
  integ->add_option("--levels", integ_levels, "number of dyadic cutoffs");

  auto* stab = app.add_subcommand("stability", "stability, L^inf and sublevel experiments");
  std::string stab_cfg;
  stab->add_option("--config", stab_cfg, "experiment configuration")->required();

  auto* report = app.add_subcommand("report", "render a saved JSON report as a table");
  std::string report_in;
  report->add_option("--in", report_in, "report file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  const auto t0 = std::chrono::steady_clock::now();
  Output out;
  try {
    if (*moore) out = cmd_moore(moore_in);
    if (*verify) out = cmd_verify(suite, seed, parallel);
    if (*solve) out = cmd_solve(solve_cfg, solve_csv);
    if (*fund) out = cmd_fundamental(fund_n, fund_levels, fund_radius, fund_tol, fund_csv);
    if (*integ) out = cmd_integrability(integ_model, integ_n, integ_p, integ_levels);
    if (*stab) out = cmd_stability(stab_cfg);
    if (*report) out = cmd_report(report_in);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kCheckFailed;
  }
  json doc;
  doc["header"] = {{"timestamp", utc_timestamp()},
                   {"wall_time", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()}};
  for (const auto& [k, v] : out.header.items()) doc["header"][k] = v;
  doc["body"] = out.body;
  const std::string text = doc.dump(2) + "\n";
  try {
    if (*report) {
      std::cout << out.table;
      if (!out_path.empty()) write_text(out_path, text);
    } else if (out_path.empty()) {
      std::cout << text;
    } else {
      write_text(out_path, text);
      std::cout << out.table;
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return out.code;
}
