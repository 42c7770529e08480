// symconj: catalog, verification, probes, benchmarks and coefficient search
// for compositions with complex step fractions.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "symconj/analysis.hpp"
#include "symconj/coefficients.hpp"
#include "symconj/csv.hpp"
#include "symconj/engine.hpp"
#include "symconj/errors.hpp"
#include "symconj/problems.hpp"
#include "symconj/solver.hpp"

namespace fs = std::filesystem;
using namespace symconj;

namespace {

constexpr int kExitParameter = 2;
constexpr int kExitDomain = 3;
constexpr int kExitVerification = 4;
constexpr double kCatalogResidual = 5e-13;

struct VerificationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// "650", "200pi", "2*pi", "pi", "2/7".
double parse_time(const std::string& text) {
  if (const auto slash = text.find('/'); slash != std::string::npos)
    return parse_time(text.substr(0, slash)) / parse_time(text.substr(slash + 1));
  std::string t = text;
  double factor = 1.0;
  if (t.size() >= 2 && t.compare(t.size() - 2, 2, "pi") == 0) {
    factor = std::numbers::pi;
    t.erase(t.size() - 2);
    if (!t.empty() && t.back() == '*') t.pop_back();
    if (t.empty()) return factor;
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw ParameterError("cannot parse time '" + text + "'");
  }
  if (used != t.size()) throw ParameterError("cannot parse time '" + text + "'");
  return v * factor;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

// Explicit list "a,b,c" or geometric "start:stop:count". With span > 0
// every h is snapped to span / n so the span is a whole number of steps.
std::vector<double> parse_grid(const std::string& text, double span) {
  std::vector<double> grid;
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw ParameterError("grid must be start:stop:count");
    const double a = parse_time(parts[0]), b = parse_time(parts[1]);
    const int n = std::stoi(parts[2]);
    if (!(a > 0.0 && b > 0.0) || n < 1) throw ParameterError("grid needs positive bounds and count");
    for (int i = 0; i < n; ++i)
      grid.push_back(n == 1 ? a : a * std::pow(b / a, static_cast<double>(i) / static_cast<double>(n - 1)));
  } else {
    for (const auto& s : split(text, ',')) grid.push_back(parse_time(s));
  }
  if (grid.empty()) throw ParameterError("empty step-size grid");
  for (double& h : grid) {
    if (!(h > 0.0)) throw ParameterError("step sizes must be positive");
    if (span > 0.0) h = span / std::max(1.0, std::round(span / h));
  }
  return grid;
}

CoefficientSet resolve_method(const std::string& name) {
  try {
    return catalog_lookup(name);
  } catch (const LookupError&) {
    if (fs::exists(name)) return read_coefficient_file(name);
    throw;
  }
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ParameterError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

struct ProblemOptions {
  std::string name;
  double e = 0.6;
  double alpha = 5.0;
  double q0 = 2.5;
  double p0 = 0.0;
  std::uint64_t seed = 1;
  std::size_t dim = 4;
};

struct Setup {
  SplitSystem system;
  State initial;
  std::optional<LinearSplitOracle> oracle;
};

Setup make_problem(const ProblemOptions& o) {
  if (o.name == "ho") return {harmonic_oscillator(), harmonic_oscillator_initial(o.q0, o.p0), std::nullopt};
  if (o.name == "kepler") {
    auto k = kepler(o.e);
    return {std::move(k.system), std::move(k.initial), std::nullopt};
  }
  if (o.name == "pendulum") return {pendulum(), pendulum_initial(o.alpha), std::nullopt};
  if (o.name == "oracle") {
    auto orc = linear_split_oracle(o.seed, o.dim);
    Setup s{orc.system, orc.initial(o.seed), orc};
    return s;
  }
  throw ParameterError("unknown problem '" + o.name + "' (expected ho, kepler, pendulum or oracle)");
}

State reference_endpoint(const Setup& s, const ProblemOptions& o, double h_min, double t_final) {
  if (o.name == "ho") return harmonic_oscillator_exact(s.initial, t_final);
  return self_reference(s.system, s.initial, h_min, t_final).state;
}

void add_problem_options(CLI::App* cmd, ProblemOptions& o) {
  cmd->add_option("--e", o.e, "Kepler eccentricity")->capture_default_str();
  cmd->add_option("--alpha", o.alpha, "pendulum initial momentum")->capture_default_str();
  cmd->add_option("--q0", o.q0, "oscillator initial position")->capture_default_str();
  cmd->add_option("--p0", o.p0, "oscillator initial momentum")->capture_default_str();
  cmd->add_option("--seed", o.seed, "oracle seed")->capture_default_str();
  cmd->add_option("--dim", o.dim, "oracle dimension")->capture_default_str();
}

int cmd_catalog(bool verify, const std::string& export_dir, const std::string& out_path) {
  Output out(out_path);
  std::vector<std::string> header{"name", "stages", "composition_order", "projected_order", "pseudo_symmetry_order",
                                  "symmetry", "provenance"};
  if (verify) header.push_back("max_residual");
  write_csv_row(out.stream(), header);
  bool ok = true;
  for (const auto& set : catalog()) {
    std::vector<std::string> row{set.name,
                                 std::to_string(set.stages()),
                                 std::to_string(set.composition_order),
                                 std::to_string(set.projected_order),
                                 set.pseudo_symmetry_order ? std::to_string(*set.pseudo_symmetry_order) : "",
                                 std::string(to_string(set.symmetry)),
                                 "\"" + set.provenance + "\""};
    if (verify) {
      const double r = max_order_residual(set);
      ok = ok && r <= kCatalogResidual;
      row.push_back(format_number(r));
    }
    write_csv_row(out.stream(), row);
    if (!export_dir.empty()) {
      fs::create_directories(export_dir);
      write_coefficient_file(set, fs::path(export_dir) / (set.name + ".txt"));
    }
  }
  if (!ok) throw VerificationFailure("catalog: order-condition residual above " + format_number(kCatalogResidual));
  return 0;
}

int cmd_verify(const std::string& method, const std::string& out_path) {
  CoefficientSet set;
  try {
    set = resolve_method(method);
  } catch (const ValidationError& e) {
    throw VerificationFailure(e.what());
  }
  Output out(out_path);
  auto& os = out.stream();
  const auto w = eval_order_conditions(set.coeffs);
  const double tol = structural_tolerance(set.stages());
  os << "# verify method=" << set.name << " stages=" << set.stages() << '\n';
  write_csv_row(os, {"quantity", "real", "imag"});
  const std::pair<const char*, Complex> rows[] = {
      {"w1", w.w1}, {"w31", w.w31}, {"w41", w.w41}, {"w51", w.w51}, {"w52", w.w52}};
  for (const auto& [k, v] : rows) write_csv_row(os, {k, format_number(v.real()), format_number(v.imag())});

  const double residual = max_order_residual(set);
  const Symmetry found = classify_symmetry(set.coeffs, tol);
  bool parity = true;
  std::string parity_note;
  if (found == Symmetry::symmetric_conjugate || found == Symmetry::both) {
    parity = std::abs(w.w1.imag()) <= tol && std::abs(w.w31.imag()) <= tol && std::abs(w.w41.real()) <= tol &&
             std::abs(w.w51.imag()) <= tol && std::abs(w.w52.imag()) <= tol;
    parity_note = "Im w1,w31,w51,w52 and Re w41 vanish";
  }
  if (found == Symmetry::palindromic || found == Symmetry::both) {
    parity = parity && std::abs(w.w41) <= tol;
    parity_note += parity_note.empty() ? "w41 = 0" : "; w41 = 0";
  }
  if (parity_note.empty()) parity_note = "no symmetry";
  const bool order_ok = residual <= kCatalogResidual;
  const bool sym_ok = symmetry_satisfies(found, set.symmetry);
  write_csv_row(os, {"check", "result", "detail"});
  write_csv_row(os, {"order_conditions", order_ok ? "pass" : "fail",
                     "max_residual=" + format_number(residual) + " order=" + std::to_string(set.composition_order)});
  write_csv_row(os, {"symmetry", sym_ok ? "pass" : "fail",
                     "found=" + std::string(to_string(found)) + " declared=" + std::string(to_string(set.symmetry))});
  write_csv_row(os, {"parity", parity ? "pass" : "fail", parity_note});
  if (!(order_ok && sym_ok && parity)) throw VerificationFailure("verify: " + set.name + " failed");
  return 0;
}

struct ProbeOptions {
  std::string kind;
  std::string method;
  int degree = 24;
  std::string projection = "per_step";
  std::string grid;
  std::string tf = "100";
  ProblemOptions problem{"ho"};
};

int cmd_probe(const ProbeOptions& o, const std::string& out_path) {
  const MethodSpec spec{resolve_method(o.method), BaseKind::leapfrog_dkd, parse_projection(o.projection)};
  Output out(out_path);
  if (o.kind == "symmetry") {
    write_probe_csv(out.stream(), pseudo_symmetry_degree(spec, o.degree));
  } else if (o.kind == "symplecticity") {
    write_probe_csv(out.stream(), pseudo_symplecticity_degree(spec, o.degree));
  } else if (o.kind == "stability") {
    write_stability_csv(out.stream(), stability_limit(spec));
  } else if (o.kind == "elbow") {
    write_elbow_csv(out.stream(), spec.set, parse_grid(o.grid.empty() ? "0.01:2:50" : o.grid, 0.0));
  } else if (o.kind == "order") {
    const double tf = parse_time(o.tf);
    const Setup s = make_problem(o.problem);
    if (s.oracle) {
      // The oracle has an exact flow for every h, so it is probed one step at a time.
      write_probe_csv(out.stream(), one_step_order(*s.oracle, spec, parse_grid(o.grid.empty() ? "0.2:1:6" : o.grid, 0.0),
                                                   s.initial));
      return 0;
    }
    const auto grid = parse_grid(o.grid.empty() ? "0.05:0.2:6" : o.grid, tf);
    const double h_min = *std::min_element(grid.begin(), grid.end());
    const State ref = reference_endpoint(s, o.problem, h_min, tf);
    write_probe_csv(out.stream(), convergence_order(s.system, spec, grid, tf, s.initial, ref));
  } else {
    throw ParameterError("unknown probe '" + o.kind + "'");
  }
  return 0;
}

struct BenchOptions {
  ProblemOptions problem;
  std::string methods = "SC5,SC9,SC11";
  std::string grid;
  std::string tf = "650";
  std::string metric = "max_rel_energy";
  std::string sample_interval;
  std::string projection = "per_step";
  std::size_t sample_every = 1;
  bool drift = false;
  bool trajectory = false;
};

int cmd_bench(const BenchOptions& o, const std::string& out_path) {
  const double tf = parse_time(o.tf);
  const Setup s = make_problem(o.problem);
  std::vector<MethodSpec> specs;
  for (const auto& m : split(o.methods, ','))
    specs.push_back({resolve_method(m), BaseKind::leapfrog_dkd, parse_projection(o.projection)});
  if (specs.empty()) throw ParameterError("no methods given");
  // Averaged metrics sample at multiples of the interval, so h must divide it.
  const double interval = o.sample_interval.empty() ? 0.0 : parse_time(o.sample_interval);
  const auto grid = parse_grid(o.grid.empty() ? "0.05:0.5:10" : o.grid, interval > 0.0 ? interval : tf);
  Output out(out_path);
  auto& os = out.stream();

  if (o.trajectory) {
    for (const auto& spec : specs)
      for (double h : grid) {
        const Trajectory tr = integrate(s.system, spec, h, tf, s.initial, o.sample_every);
        os << "# trajectory problem=" << o.problem.name << " method=" << spec.set.name << " h=" << format_number(h)
           << (tr.error ? " status=domain_error" : "") << '\n';
        write_trajectory_csv(os, tr.records);
      }
    return 0;
  }
  if (o.drift) {
    for (const auto& spec : specs)
      for (double h : grid) {
        const auto d = energy_drift(s.system, spec, h, tf, s.initial, o.sample_every);
        write_drift_csv(os, spec.set.name + " h=" + format_number(h), d);
      }
    return 0;
  }
  const Metric metric = parse_metric(o.metric);
  write_work_precision_csv(os, o.problem.name, metric, work_precision(s.system, specs, grid, tf, s.initial, metric, interval));
  return 0;
}

int cmd_search(const SearchProblem& p, const std::string& out_dir, const std::string& out_path) {
  const auto solutions = multistart_search(p);
  Output out(out_path);
  auto& os = out.stream();
  os << "# search stages=" << p.stages << " order=" << p.target_order << " seed=" << p.seed
     << " starts=" << p.max_starts << " box=" << format_number(p.box) << " found=" << solutions.size() << '\n';
  std::vector<std::string> header{"rank", "name", "one_norm", "leading_error", "residual"};
  for (int j = 1; j <= p.stages; ++j) {
    header.push_back("alpha" + std::to_string(j) + "_re");
    header.push_back("alpha" + std::to_string(j) + "_im");
  }
  write_csv_row(os, header);
  for (std::size_t i = 0; i < solutions.size(); ++i) {
    const auto& sol = solutions[i];
    std::vector<std::string> row{std::to_string(i + 1), sol.set.name, format_number(sol.one_norm),
                                 format_number(sol.leading_error), format_number(sol.residual)};
    for (const auto& z : sol.set.coeffs) {
      row.push_back(format_number(z.real()));
      row.push_back(format_number(z.imag()));
    }
    write_csv_row(os, row);
    if (!out_dir.empty()) {
      fs::create_directories(out_dir);
      write_coefficient_file(sol.set, fs::path(out_dir) / (sol.set.name + ".txt"));
    }
  }
  if (solutions.empty()) os << "# note=no convergent start\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compositions with complex step fractions: catalog, verification, probes and benchmarks"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string out_path;
  app.add_option("--out", out_path, "write CSV to PATH instead of stdout");

  auto* catalog_cmd = app.add_subcommand("catalog", "list the bundled coefficient sets");
  bool verify_flag = false;
  std::string export_dir;
  catalog_cmd->add_flag("--verify", verify_flag, "append the max order-condition residual");
  catalog_cmd->add_option("--export", export_dir, "write one coefficient file per entry to DIR");

  auto* verify_cmd = app.add_subcommand("verify", "check order conditions and symmetry of a method");
  std::string verify_method;
  verify_cmd->add_option("method", verify_method, "catalog name or coefficient file")->required();

  auto* probe_cmd = app.add_subcommand("probe", "run an analysis probe");
  ProbeOptions probe;
  probe_cmd->add_option("kind", probe.kind, "symmetry|symplecticity|stability|elbow|order")
      ->required()
      ->check(CLI::IsMember({"symmetry", "symplecticity", "stability", "elbow", "order"}));
  probe_cmd->add_option("method", probe.method, "catalog name or coefficient file")->required();
  probe_cmd->add_option("--degree", probe.degree, "truncation degree D")->capture_default_str();
  probe_cmd->add_option("--projection", probe.projection, "per_step|final_only|none")->capture_default_str();
  probe_cmd->add_option("--grid", probe.grid, "step sizes: a,b,c or start:stop:count (geometric)");
  probe_cmd->add_option("--tf", probe.tf, "final time for the order probe (the oracle is probed one step at a time)")->capture_default_str();
  probe_cmd->add_option("--problem", probe.problem.name, "ho|kepler|pendulum|oracle")->capture_default_str();
  add_problem_options(probe_cmd, probe.problem);

  auto* bench_cmd = app.add_subcommand("bench", "work-precision, drift or trajectory tables");
  BenchOptions bench;
  bench_cmd->add_option("problem", bench.problem.name, "ho|kepler|pendulum|oracle")->required();
  add_problem_options(bench_cmd, bench.problem);
  bench_cmd->add_option("--methods", bench.methods, "comma-separated methods")->capture_default_str();
  bench_cmd->add_option("--grid", bench.grid, "step sizes: a,b,c or start:stop:count (geometric)");
  bench_cmd->add_option("--tf", bench.tf, "final time, e.g. 650 or 200pi")->capture_default_str();
  bench_cmd->add_option("--metric", bench.metric, "max_rel_energy|avg_rel_energy|avg_state_error")
      ->capture_default_str();
  bench_cmd->add_option("--sample-interval", bench.sample_interval, "sampling time for averaged metrics, e.g. 2pi");
  bench_cmd->add_option("--sample-every", bench.sample_every, "record stride for --drift/--trajectory")
      ->capture_default_str();
  bench_cmd->add_option("--projection", bench.projection, "per_step|final_only|none")->capture_default_str();
  bench_cmd->add_flag("--drift", bench.drift, "energy-drift statistics per (method, h)");
  bench_cmd->add_flag("--trajectory", bench.trajectory, "full trajectory records per (method, h)");

  auto* search_cmd = app.add_subcommand("search", "multistart search for symmetric-conjugate sets");
  SearchProblem search;
  std::string search_dir;
  search_cmd->add_option("--stages", search.stages, "number of stages s")->capture_default_str();
  search_cmd->add_option("--order", search.target_order, "target order (<= 5)")->capture_default_str();
  search_cmd->add_option("--seed", search.seed, "random seed")->capture_default_str();
  search_cmd->add_option("--starts", search.max_starts, "number of starts")->capture_default_str();
  search_cmd->add_option("--box", search.box, "initial-guess box")->capture_default_str();
  search_cmd->add_option("--out-dir", search_dir, "write ranked solutions as coefficient files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitParameter;
  }

  try {
    if (*catalog_cmd) return cmd_catalog(verify_flag, export_dir, out_path);
    if (*verify_cmd) return cmd_verify(verify_method, out_path);
    if (*probe_cmd) return cmd_probe(probe, out_path);
    if (*bench_cmd) return cmd_bench(bench, out_path);
    if (*search_cmd) return cmd_search(search, search_dir, out_path);
  } catch (const VerificationFailure& e) {
    std::cerr << "verification failed: " << e.what() << '\n';
    return kExitVerification;
  } catch (const ValidationError& e) {
    std::cerr << "invalid coefficient set: " << e.what() << '\n';
    return kExitVerification;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const IntegrationError& e) {
    std::cerr << "integration error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const NonConvergenceError& e) {
    std::cerr << "no convergence: " << e.what() << '\n';
    return kExitDomain;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitParameter;
  } catch (const std::invalid_argument& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return kExitParameter;
  } catch (const std::out_of_range& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return kExitParameter;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
