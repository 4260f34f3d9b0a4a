#include "jacobiflow/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "jacobiflow/connection.hpp"
#include "jacobiflow/csv.hpp"
#include "jacobiflow/model_zoo.hpp"
#include "jacobiflow/spray_flow.hpp"
#include "jacobiflow/verify.hpp"

namespace jacobiflow::cli {
namespace {

/// Thrown for bad flag values detected after CLI11 parsing.
class UsageError : public std::runtime_error {
public:
  UsageError(const std::string &flag, const std::string &why)
      : std::runtime_error(flag + ": " + why) {}
};

struct ModelFlags {
  std::string model = "euclidean";
  int dim = 2;
  double radius = 1.0;
  double beta = 1.0;
  std::string metric_file;
};

struct RunConfig {
  ModelFlags model;
  std::string x0, v0, J0, nablaJ0;
  double t_max = 1.0;
  double h = kDefaultStep;
  std::optional<double> s_eps;
  std::string out;
  std::string format = "csv";
  std::uint64_t seed = 42;
  std::vector<std::string> tol;
  int parallel = 1;
  std::string suite = "all";
};

Vec<double> parse_reals(const std::string &flag, const std::string &text) {
  if (text.empty())
    throw UsageError(flag, "missing value");
  Vec<double> v;
  std::string field;
  std::istringstream ss(text);
  while (std::getline(ss, field, ',')) {
    double x = 0.0;
    const char *first = field.data();
    const char *last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, x);
    if (ec != std::errc() || ptr != last || !std::isfinite(x))
      throw UsageError(flag, "'" + field + "' is not a finite real");
    v.push_back(x);
  }
  if (!text.empty() && text.back() == ',')
    throw UsageError(flag, "trailing comma");
  return v;
}

Vec<double> parse_vector(const std::string &flag, const std::string &text, int dim) {
  Vec<double> v = parse_reals(flag, text);
  if (static_cast<int>(v.size()) != dim)
    throw UsageError(flag, "expected " + std::to_string(dim) + " components, got " +
                               std::to_string(v.size()));
  return v;
}

ModelSpec model_spec(const ModelFlags &f) {
  if (!f.metric_file.empty()) {
    std::ifstream in(f.metric_file);
    if (!in)
      throw UsageError("--metric-file", "cannot open '" + f.metric_file + "'");
    nlohmann::json config;
    try {
      config = nlohmann::json::parse(in);
      return model_spec_from_json(config);
    } catch (const std::exception &e) {
      throw UsageError("--metric-file", e.what());
    }
  }
  ModelSpec spec;
  try {
    spec.kind = parse_model_kind(f.model);
  } catch (const std::exception &e) {
    throw UsageError("--model", e.what());
  }
  if (spec.kind == ModelKind::custom_metric)
    throw UsageError("--model", "custom requires --metric-file");
  spec.dim = f.dim;
  spec.radius = f.radius;
  spec.beta = f.beta;
  return spec;
}

ManifoldModel build_model(const ModelFlags &f) {
  const ModelSpec spec = model_spec(f);
  try {
    return build(spec);
  } catch (const InvalidModel &e) {
    throw UsageError(f.metric_file.empty() ? "--model" : "--metric-file", e.what());
  }
}

std::string show(const Vec<double> &v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i)
    s += (i ? ", " : "") + format_double(v[i]);
  return s + ")";
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", x);
  return buf;
}

void write_output(const RunConfig &cfg, const std::string &command, const ManifoldModel &model,
                  const Table &table, nlohmann::json extra = nlohmann::json::object()) {
  if (cfg.out.empty())
    return;
  std::ofstream file(cfg.out, std::ios::binary);
  if (!file)
    throw std::runtime_error("cannot write '" + cfg.out + "'");
  if (cfg.format == "json") {
    nlohmann::json doc{{"command", command}, {"model", model.name}, {"dim", model.dim}};
    doc.update(extra);
    doc["table"] = table_to_json(table);
    file << doc.dump(2) << '\n';
  } else {
    write_csv(file, table);
  }
  if (!file)
    throw std::runtime_error("write to '" + cfg.out + "' failed");
}

int cmd_geodesic(const RunConfig &cfg, std::ostream &out) {
  const ManifoldModel model = build_model(cfg.model);
  const TangentVector<double> X0{parse_vector("--x0", cfg.x0, model.dim),
                                 parse_vector("--v0", cfg.v0, model.dim)};
  const auto traj = integrate_geodesic(model, X0, cfg.t_max, cfg.h);
  write_output(cfg, "geodesic", model, geodesic_table(traj));
  const auto &last = traj.states.back();
  out << "geodesic " << model.name << ": " << traj.states.size() - 1 << " steps, t="
      << format_double(traj.times.back()) << " x=" << show(last.base) << " v=" << show(last.vec)
      << '\n';
  return kExitOk;
}

int cmd_jacobi(const RunConfig &cfg, std::ostream &out) {
  const ManifoldModel model = build_model(cfg.model);
  const TangentVector<double> X0{parse_vector("--x0", cfg.x0, model.dim),
                                 parse_vector("--v0", cfg.v0, model.dim)};
  const Vec<double> J0 = parse_vector("--J0", cfg.J0, model.dim);
  const Vec<double> nablaJ0 = parse_vector("--nablaJ0", cfg.nablaJ0, model.dim);
  if (cfg.s_eps && !(*cfg.s_eps > 0.0))
    throw UsageError("--s-eps", "must be positive");

  const JacobiState Y0 = jacobi_state_from_covariant(model, X0, J0, nablaJ0);
  const auto traj = integrate_jacobi_flow(model, Y0, cfg.t_max, cfg.h);
  double residual = 0.0;
  for (const auto &s : traj.states)
    residual = std::fmax(residual, norm_inf(jacobi_residual(model, s)));

  nlohmann::json extra{{"max_residual", residual}};
  std::string variation;
  if (cfg.s_eps) {
    auto X_of_s = [&Y0](double s) {
      return TangentVector<double>{add(Y0.x, scale(s, Y0.J)), add(Y0.xi, scale(s, Y0.Jdot))};
    };
    const auto oracle = variation_oracle(model, X_of_s, cfg.t_max, cfg.h, *cfg.s_eps);
    double mismatch = 0.0;
    for (std::size_t k = 0; k < traj.states.size(); ++k)
      mismatch = std::fmax(mismatch, max_abs_diff(traj.states[k].J, oracle.states[k]));
    extra["variation_mismatch"] = mismatch;
    variation = " variation_mismatch=" + sci(mismatch);
  }
  write_output(cfg, "jacobi", model, jacobi_table(model, traj), extra);

  const auto &last = traj.states.back();
  out << "jacobi " << model.name << ": " << traj.states.size() - 1 << " steps, t="
      << format_double(traj.times.back()) << " x=" << show(last.x) << " J=" << show(last.J)
      << " nablaJ=" << show(covariant_velocity(model, last)) << " max_residual=" << sci(residual)
      << variation << '\n';
  return kExitOk;
}

Vec<double> basis(int dim, int i) {
  Vec<double> e(static_cast<std::size_t>(dim), 0.0);
  e[static_cast<std::size_t>(i)] = 1.0;
  return e;
}

int cmd_curvature(const RunConfig &cfg, std::ostream &out) {
  const ManifoldModel model = build_model(cfg.model);
  const Vec<double> x = parse_vector("--x0", cfg.x0, model.dim);
  model.require_domain(x, "curvature");
  const int m = model.dim;
  Table table;
  table.columns = {"i", "j", "k"};
  for (int l = 1; l <= m; ++l)
    table.columns.push_back("R" + std::to_string(l));
  double largest = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        const Vec<double> r = curvature_operator(model, x, basis(m, i), basis(m, j), basis(m, k));
        std::vector<double> row{double(i + 1), double(j + 1), double(k + 1)};
        row.insert(row.end(), r.begin(), r.end());
        table.rows.push_back(std::move(row));
        largest = std::fmax(largest, norm_inf(r));
      }
  nlohmann::json extra{{"x", x}};
  std::string sectional;
  if (model.metric && m >= 2) {
    const double k = sectional_curvature(model, x, basis(m, 0), basis(m, 1));
    extra["sectional_e1_e2"] = k;
    sectional = " sectional(e1,e2)=" + format_double(k);
  }
  write_output(cfg, "curvature", model, table, extra);
  out << "curvature " << model.name << " at x=" << show(x) << ": max|R(ei,ej)ek|="
      << sci(largest) << sectional << '\n';
  return kExitOk;
}

int cmd_torsion(const RunConfig &cfg, std::ostream &out) {
  const ManifoldModel model = build_model(cfg.model);
  const Vec<double> x = parse_vector("--x0", cfg.x0, model.dim);
  model.require_domain(x, "torsion");
  const int m = model.dim;
  Table table;
  table.columns = {"i", "j"};
  for (int l = 1; l <= m; ++l)
    table.columns.push_back("T" + std::to_string(l));
  double largest = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const Vec<double> t = torsion(model, x, basis(m, i), basis(m, j));
      std::vector<double> row{double(i + 1), double(j + 1)};
      row.insert(row.end(), t.begin(), t.end());
      table.rows.push_back(std::move(row));
      largest = std::fmax(largest, norm_inf(t));
    }
  write_output(cfg, "torsion", model, table, {{"x", x}});
  out << "torsion " << model.name << " at x=" << show(x) << ": max|Tor(ei,ej)|=" << sci(largest)
      << '\n';
  return kExitOk;
}

bool known_tolerance_key(const std::string &key) {
  for (const auto &c : check_registry()) {
    if (key == c.name || key == c.id())
      return true;
    const auto bracket = c.name.find('[');
    if (bracket != std::string::npos && key == c.name.substr(0, bracket))
      return true;
  }
  return false;
}

int cmd_verify(const RunConfig &cfg, std::ostream &out) {
  VerifyOptions opts;
  opts.seed = cfg.seed;
  opts.parallel = cfg.parallel;
  for (const auto &entry : cfg.tol) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos || eq == 0)
      throw UsageError("--tol", "expected <name>=<value>, got '" + entry + "'");
    const std::string key = entry.substr(0, eq);
    const std::string text = entry.substr(eq + 1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || !(value >= 0.0))
      throw UsageError("--tol", "bad tolerance '" + text + "' for " + key);
    if (!known_tolerance_key(key))
      throw UsageError("--tol", "unknown invariant '" + key + "'");
    opts.tolerance_overrides[key] = value;
  }
  const auto &names = suite_names();
  if (cfg.suite != "all" && std::find(names.begin(), names.end(), cfg.suite) == names.end())
    throw UsageError("--suite", "unknown suite '" + cfg.suite + "'");

  const VerifyReport report = run_verify(cfg.suite, opts);
  const std::string text = report.text();
  if (!cfg.out.empty()) {
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file)
      throw std::runtime_error("cannot write '" + cfg.out + "'");
    if (cfg.format == "json")
      file << report.to_json().dump(2) << '\n';
    else
      file << text;
  }
  out << text;
  return report.passed() ? kExitOk : kExitVerifyFailed;
}

void add_model_flags(CLI::App *cmd, RunConfig &cfg) {
  cmd->add_option("--model", cfg.model.model,
                  "euclidean | sphere | half-plane | torsion-demo | custom")
      ->capture_default_str();
  cmd->add_option("--dim", cfg.model.dim, "Chart dimension")
      ->capture_default_str()
      ->check(CLI::Range(1, 4));
  cmd->add_option("--radius", cfg.model.radius, "Sphere radius")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--beta", cfg.model.beta, "Torsion strength of torsion-demo")
      ->capture_default_str();
  cmd->add_option("--metric-file", cfg.model.metric_file,
                  "JSON model config {kind, dim, params}; overrides --model");
  cmd->add_option("--out", cfg.out, "Output file");
  cmd->add_option("--format", cfg.format, "Output format")
      ->capture_default_str()
      ->check(CLI::IsMember({"csv", "json"}));
}

void add_integration_flags(CLI::App *cmd, RunConfig &cfg) {
  cmd->add_option("--x0", cfg.x0, "Initial point, comma-separated")->required();
  cmd->add_option("--v0", cfg.v0, "Initial velocity, comma-separated")->required();
  cmd->add_option("--t-max", cfg.t_max, "Final time")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--h", cfg.h, "RK4 step")->capture_default_str()->check(CLI::PositiveNumber);
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Geodesics, Jacobi fields and connection invariants in a single chart",
               "jacobiflow"};
  // "-h" would clash with the step flag "--h".
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.set_version_flag("--version", "jacobiflow 0.1.0");
  RunConfig cfg;

  auto *geodesic = app.add_subcommand("geodesic", "Integrate the geodesic flow");
  add_model_flags(geodesic, cfg);
  add_integration_flags(geodesic, cfg);

  auto *jacobi = app.add_subcommand("jacobi", "Integrate the Jacobi flow on TTM");
  add_model_flags(jacobi, cfg);
  add_integration_flags(jacobi, cfg);
  jacobi->add_option("--J0", cfg.J0, "Initial Jacobi field, comma-separated")->required();
  jacobi->add_option("--nablaJ0", cfg.nablaJ0, "Initial covariant derivative, comma-separated")
      ->required();
  jacobi->add_option("--s-eps", cfg.s_eps, "Also compare with the variation oracle at this s_eps");

  auto *curvature = app.add_subcommand("curvature", "Curvature tensor R(ei,ej)ek at a point");
  add_model_flags(curvature, cfg);
  curvature->add_option("--x0", cfg.x0, "Point, comma-separated")->required();

  auto *torsion_cmd = app.add_subcommand("torsion", "Torsion Tor(ei,ej) at a point");
  add_model_flags(torsion_cmd, cfg);
  torsion_cmd->add_option("--x0", cfg.x0, "Point, comma-separated")->required();

  auto *verify = app.add_subcommand("verify", "Run the invariant suites");
  verify->add_option("--suite", cfg.suite,
                     "all | tangent_numbers | double_tangent | connection | spray_flow | model_zoo")
      ->capture_default_str();
  verify->add_option("--seed", cfg.seed, "PRNG seed")->capture_default_str();
  verify->add_option("--tol", cfg.tol, "Override a tolerance, <name>=<value> (repeatable)")
      ->take_all();
  verify->add_option("--parallel", cfg.parallel, "Worker threads")
      ->capture_default_str()
      ->check(CLI::Range(1, 256));
  verify->add_option("--out", cfg.out, "Write the report to this file");
  verify->add_option("--format", cfg.format, "Report file format (csv writes the text report)")
      ->capture_default_str()
      ->check(CLI::IsMember({"csv", "json"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success &e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError &e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*geodesic)
      return cmd_geodesic(cfg, out);
    if (*jacobi)
      return cmd_jacobi(cfg, out);
    if (*curvature)
      return cmd_curvature(cfg, out);
    if (*torsion_cmd)
      return cmd_torsion(cfg, out);
    return cmd_verify(cfg, out);
  } catch (const UsageError &e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const LeftDomain &e) {
    err << "error: " << e.what() << " at x=" << show(e.point()) << '\n';
    return kExitRuntime;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

int run(int argc, const char *const *argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

} // namespace jacobiflow::cli
