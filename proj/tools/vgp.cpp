#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "volterra/csv.hpp"
#include "volterra/error.hpp"
#include "volterra/kernels.hpp"
#include "volterra/laguerre.hpp"
#include "volterra/specfun.hpp"
#include "volterra/stats.hpp"
#include "volterra/transforms.hpp"
#include "volterra/verify.hpp"

namespace fs = std::filesystem;
using namespace volterra;

namespace {

constexpr const char* kVersion = "1.0.0";

enum Exit { ok = 0, verify_failed = 1, config_error = 2, numerical_error = 3 };

struct Options {
  std::uint64_t seed = 1;
  std::size_t grid = 256;
  double horizon = 1.0;
  std::size_t paths = 100;
  std::string out = "vgp-out";
  unsigned threads = 1;
  std::size_t origin_levels = 0;

  std::string process = "bm";
  double hurst = 0.75;
  std::string kernel_csv;
  std::string method = "kernel";

  std::string input;
  std::string op = "t1";
  std::string mode = "operator";
  bool check_roundtrip = false;

  double split = 1.0;
  double t_max = 64.0;
  int n_plus = 3;
  int n_minus = 3;
  std::size_t octave_steps = 70;
  std::string laguerre_mode = "analytic";

  std::string suite = "all";
};

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot write " + path.string());
  return f;
}

void write_manifest(const CLI::App& app, const std::string& command, const Options& o) {
  fs::create_directories(o.out);
  auto f = open_out(fs::path(o.out) / "manifest.txt");
  // Rerun with: vgp <command> --config manifest.txt
  f << "# tool_version=" << kVersion << "\n";
  f << "# command=" << command << "\n";
  f << app.config_to_str(true, false);
}

PathEnsemble read_input(const Options& o) {
  if (o.input.empty()) throw InvalidArgument("--input is required");
  std::ifstream f(o.input, std::ios::binary);
  if (!f) throw InvalidArgument("cannot read " + o.input);
  return csv::read_paths(f);
}

TimeGrid make_sim_grid(const Options& o) {
  if (o.grid == 0) throw InvalidArgument("--grid must be positive");
  if (!(o.horizon > 0.0)) throw InvalidArgument("--horizon must be positive");
  return make_grid(o.horizon, o.grid).refine_origin(o.origin_levels);
}

DiscreteKernel kernel_on(const Options& o, const TimeGrid& grid) {
  if (o.process == "fbm") {
    if (!(o.hurst > 0.0 && o.hurst < 1.0)) throw InvalidArgument("--hurst must lie in (0, 1)");
    return discretize_kernel(fbm_volterra_kernel(o.hurst), grid, EvalPoint::weighted_midpoint);
  }
  if (o.process == "bm") return discretize_kernel(brownian_kernel(), grid, EvalPoint::left);
  if (o.kernel_csv.empty()) throw InvalidArgument("custom-kernel needs --kernel");
  std::ifstream f(o.kernel_csv, std::ios::binary);
  if (!f) throw InvalidArgument("cannot read " + o.kernel_csv);
  DiscreteKernel dk;
  dk.grid = grid;
  dk.values = csv::read_matrix(f, static_cast<long>(grid.size()), static_cast<long>(grid.cells()));
  return dk;
}

ProcessContext context_on(const Options& o, const TimeGrid& grid) {
  if (o.process == "bm") return martingale_context(brownian_qv(grid));
  return volterra_context(kernel_on(o, grid));
}

int cmd_simulate(const CLI::App& app, const Options& o) {
  const TimeGrid grid = make_sim_grid(o);
  PathEnsemble ens;
  if (o.method == "kernel") {
    const PathMatrix dw = sample_increments(grid, o.paths, o.seed, 0, o.threads);
    if (o.process == "bm") {
      ens.grid = grid;
      ens.paths = cumulative_paths(dw);
    } else {
      ens = synthesize_from_kernel(kernel_on(o, grid), dw, o.threads);
    }
  } else {
    Eigen::MatrixXd cov;
    if (o.process == "fbm") {
      cov = fbm_covariance_matrix(o.hurst, grid);
    } else {
      cov = covariance_from_kernel(kernel_on(o, grid));
    }
    const long n = static_cast<long>(grid.cells());
    ens = synthesize_cholesky(cov.bottomRightCorner(n, n), grid, o.paths, o.seed, o.threads);
  }
  ens.process_name = o.process;
  ens.seed = o.seed;
  ens.method = o.method;
  write_manifest(app, "simulate", o);
  auto f = open_out(fs::path(o.out) / "paths.csv");
  csv::write_paths(f, ens);
  return ok;
}

TransformKind parse_op(const std::string& op) {
  if (op == "t1") return TransformKind::T1;
  if (op == "t2") return TransformKind::T2;
  if (op == "b1") return TransformKind::B1;
  if (op == "b2") return TransformKind::B2;
  if (op == "anticipative") return TransformKind::anticipative;
  if (op == "reverse") return TransformKind::reverse;
  return TransformKind::prediction;
}

int cmd_transform(const CLI::App& app, const Options& o) {
  const PathEnsemble ens = read_input(o);
  if (ens.count() == 0) {
    write_manifest(app, "transform", o);
    auto f = open_out(fs::path(o.out) / "transformed.csv");
    csv::write_paths(f, ens);
    return ok;
  }
  const ProcessContext ctx = context_on(o, ens.grid);
  const TransformKind kind = parse_op(o.op);
  const TransformMethod method = o.mode == "pathwise" ? TransformMethod::pathwise : TransformMethod::operator_form;
  const OperatorMode mode = o.mode == "consistent" ? OperatorMode::consistent : OperatorMode::analytic;
  const PathEnsemble out = transform_volterra(ens, ctx, kind, method, mode, o.threads);
  write_manifest(app, "transform", o);
  {
    auto f = open_out(fs::path(o.out) / "transformed.csv");
    csv::write_paths(f, out);
  }
  if (o.check_roundtrip) {
    std::vector<ResidualRow> rows;
    if (kind == TransformKind::reverse) {
      rows = reversal_residuals(ens, ctx, o.threads);
    } else {
      const int i = kind == TransformKind::T2 || kind == TransformKind::B2 ? 2 : 1;
      const std::string wanted = o.mode == "operator" ? "analytic" : o.mode;
      for (const auto& r : roundtrip_residuals(ens, ctx, i, o.threads))
        if (r.mode.rfind(wanted, 0) == 0) rows.push_back(r);
    }
    auto f = open_out(fs::path(o.out) / "residuals.csv");
    f << "identity,mode,max_residual\n";
    for (const auto& r : rows) f << r.identity << ',' << r.mode << ',' << csv::format_number(r.max_residual) << '\n';
  }
  return ok;
}

// Geometric nodes with ratio 2^{1/steps} below T down to T e^{-40}, and the
// nearest whole number of equal log-steps from T up to T_max.
TimeGrid expansion_grid(double split, double t_max, std::size_t steps) {
  const double h = std::log(2.0) / static_cast<double>(steps);
  const auto depth = static_cast<std::size_t>(std::llround(40.0 / h));
  const double span = std::log(t_max / split);
  const auto up = std::max<long long>(1, std::llround(span / h));
  std::vector<double> nodes{0.0};
  for (std::size_t k = depth; k >= 1; --k) nodes.push_back(split * std::exp(-static_cast<double>(k) * h));
  nodes.push_back(split);
  for (long long k = 1; k < up; ++k) nodes.push_back(split * std::exp(static_cast<double>(k) * span / static_cast<double>(up)));
  nodes.push_back(t_max);
  return TimeGrid::from_nodes(std::move(nodes));
}

int cmd_expand(const CLI::App& app, const Options& o) {
  if (o.n_plus < 0 || o.n_minus < 0) throw InvalidArgument("expansion orders must be nonnegative");
  if (!(o.split > 0.0 && o.t_max > o.split)) throw InvalidArgument("need 0 < T < T_max");
  if (o.octave_steps == 0) throw InvalidArgument("--octave-steps must be positive");
  const TimeGrid log_grid = expansion_grid(o.split, o.t_max, o.octave_steps);
  PathEnsemble ens;
  if (!o.input.empty()) {
    ens = read_input(o);
    // A header-only input carries no grid; its coefficient table is empty either way.
    if (ens.count() == 0) ens.grid = log_grid;
  } else {
    if (o.process != "bm") throw InvalidArgument("expand simulates Brownian input only; pass --input otherwise");
    ens.grid = log_grid;
    ens.paths = cumulative_paths(sample_increments(ens.grid, o.paths, o.seed, 0, o.threads));
  }
  if (ens.paths.cols() != static_cast<long>(ens.grid.size())) ens.paths.resize(0, static_cast<long>(ens.grid.size()));
  const QuadraticVariation qv =
      o.process == "bm" ? brownian_qv(ens.grid) : quadratic_variation(kernel_on(o, ens.grid));
  const LaguerreMode lmode = o.laguerre_mode == "consistent" ? LaguerreMode::consistent : LaguerreMode::analytic;
  const ExpansionCoefficients c = epsilon_coefficients(ens, qv, o.split, o.n_plus, o.n_minus, lmode, o.threads);
  if (c.truncation_ratio > 0.5) {
    std::cerr << "error: <M>_T / <M>_T_max = " << c.truncation_ratio << " exceeds 0.5\n";
    return numerical_error;
  }
  if (c.truncation_warning) std::cerr << "warning: <M>_T / <M>_T_max = " << c.truncation_ratio << "\n";
  write_manifest(app, "expand", o);
  const fs::path dir(o.out);
  {
    auto f = open_out(dir / "coefficients.csv");
    f << "path_id,n,value\n";
    for (std::size_t p = 0; p < c.paths(); ++p)
      for (int n = -o.n_minus; n <= o.n_plus; ++n)
        f << p << ',' << n << ',' << csv::format_number(c.at(p, n)) << '\n';
  }
  {
    auto f = open_out(dir / "report.csv");
    f << "n,m,value,target\n";
    if (c.paths() >= 2) {
      const CovarianceEstimate cov = sample_covariance(c.values);
      for (int n = -o.n_minus; n <= o.n_plus; ++n)
        for (int m = n; m <= o.n_plus; ++m)
          f << n << ',' << m << ',' << csv::format_number(cov.estimate(n + o.n_minus, m + o.n_minus)) << ','
            << (n == m ? 1 : 0) << '\n';
    }
  }
  {
    // Ensemble mean-square reconstruction error at the node nearest T/2
    // against the Parseval tail sum_{n > N} zeta_n(ln(<M>_T / <M>_t))^2 <M>_T.
    auto f = open_out(dir / "reconstruction.csv");
    f << "order,t,mse,parseval_tail\n";
    const std::size_t node = ens.grid.nearest(0.5 * o.split);
    const double q = qv.at_node(c.split_node);
    const double x = std::log(q / qv.at_node(node));
    for (int order = 0; order <= o.n_plus; ++order) {
      double mse = 0.0;
      for (std::size_t p = 0; p < c.paths(); ++p) {
        const double d = reconstruct_value(c, p, qv, node, order) - ens.paths(static_cast<long>(p), static_cast<long>(node));
        mse += d * d;
      }
      if (c.paths() > 0) mse /= static_cast<double>(c.paths());
      // sum_n zeta_n(x)^2 = e^{-x}, so the tail is exact without summing it.
      double tail = std::exp(-x);
      for (int n = 0; n <= order; ++n) tail -= std::pow(specfun::laguerre_tail(n, x), 2);
      f << order << ',' << csv::format_number(ens.grid.node(node)) << ',' << csv::format_number(mse) << ','
        << csv::format_number(q * tail) << '\n';
    }
  }
  {
    auto f = open_out(dir / "parseval.csv");
    f << "order,sum,target\n";
    Eigen::VectorXd ind = Eigen::VectorXd::Zero(static_cast<long>(qv.cells()));
    ind.head(static_cast<long>(c.split_node)).setOnes();
    const auto coef = functional_coefficients(ind, qv, c.split_node, o.n_plus, o.n_minus);
    double sum = 0.0;
    for (int order = 0; order <= std::max(o.n_plus, o.n_minus); ++order) {
      if (order <= o.n_plus) sum += std::pow(coef[static_cast<std::size_t>(order + o.n_minus)], 2);
      if (order > 0 && order <= o.n_minus) sum += std::pow(coef[static_cast<std::size_t>(o.n_minus - order)], 2);
      f << order << ',' << csv::format_number(sum) << ',' << csv::format_number(qv.at_node(c.split_node)) << '\n';
    }
  }
  return ok;
}

int cmd_verify(const CLI::App& app, const Options& o) {
  if (!verify::is_suite(o.suite)) throw InvalidArgument("unknown suite: " + o.suite);
  const auto results = verify::run_suite(o.suite, o.threads);
  write_manifest(app, "verify", o);
  {
    auto f = open_out(fs::path(o.out) / "report.csv");
    verify::write_report(f, results);
  }
  bool all = true;
  for (const auto& r : results) {
    std::cout << (r.pass() ? "PASS" : "FAIL") << " criterion " << r.id << ": " << r.title << " ("
              << r.report.failures() << " of " << r.report.entries().size() << " checks failed)\n";
    all = all && r.pass();
  }
  return all ? ok : verify_failed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation, transforms and expansions of Volterra Gaussian processes"};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "key=value file; flags given on the command line take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);
  Options o;

  app.add_option("--seed", o.seed, "Base seed")->capture_default_str();
  app.add_option("--grid", o.grid, "Number of uniform cells")->capture_default_str();
  app.add_option("--horizon", o.horizon, "Horizon T of the grid")->capture_default_str();
  app.add_option("--paths", o.paths, "Number of paths")->capture_default_str();
  app.add_option("--out", o.out, "Output directory")->capture_default_str();
  app.add_option("--threads", o.threads, "Worker threads; outputs do not depend on it")->capture_default_str();
  app.add_option("--origin-levels", o.origin_levels, "Dyadic refinement levels of the first cell")
      ->capture_default_str();
  app.add_option("--process", o.process, "Input process")
      ->check(CLI::IsMember({"bm", "fbm", "custom-kernel"}))
      ->capture_default_str();
  app.add_option("--hurst", o.hurst, "Hurst index for fbm")->capture_default_str();
  app.add_option("--kernel", o.kernel_csv, "Kernel CSV (i,j,value) for custom-kernel");
  app.add_option("--method", o.method, "Sampler")->check(CLI::IsMember({"kernel", "cholesky"}))->capture_default_str();
  app.add_option("--input", o.input, "Input path CSV");
  app.add_option("--op", o.op, "Transform")
      ->check(CLI::IsMember({"t1", "t2", "b1", "b2", "anticipative", "reverse", "prediction"}))
      ->capture_default_str();
  app.add_option("--mode", o.mode, "Transform evaluation")
      ->check(CLI::IsMember({"operator", "consistent", "pathwise"}))
      ->capture_default_str();
  app.add_flag("--check-roundtrip", o.check_roundtrip, "Write roundtrip residuals");
  app.add_option("--split", o.split, "Expansion time T")->capture_default_str();
  app.add_option("--t-max", o.t_max, "Truncation horizon T_max")->capture_default_str();
  app.add_option("--n-plus", o.n_plus, "Largest positive order N+")->capture_default_str();
  app.add_option("--n-minus", o.n_minus, "Largest negative order N-")->capture_default_str();
  app.add_option("--octave-steps", o.octave_steps, "Log-grid cells per doubling of time for expand")
      ->capture_default_str();
  app.add_option("--laguerre-mode", o.laguerre_mode, "Discretization of the Laguerre integrands")
      ->check(CLI::IsMember({"analytic", "consistent"}))
      ->capture_default_str();
  app.add_option("--suite", o.suite, "Verification suite")->capture_default_str();

  auto* sim = app.add_subcommand("simulate", "Sample a path ensemble")->fallthrough();
  auto* tr = app.add_subcommand("transform", "Apply a transform to a path ensemble")->fallthrough();
  auto* ex = app.add_subcommand("expand", "Two-sided Laguerre coefficients of a martingale ensemble")->fallthrough();
  auto* ve = app.add_subcommand("verify", "Run a named acceptance suite")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : config_error;
  }

  try {
    if (sim->parsed()) return cmd_simulate(app, o);
    if (tr->parsed()) return cmd_transform(app, o);
    if (ex->parsed()) return cmd_expand(app, o);
    if (ve->parsed()) return cmd_verify(app, o);
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return config_error;
  } catch (const DimensionMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return config_error;
  } catch (const NonUniformGrid& e) {
    std::cerr << "error: " << e.what() << "\n";
    return config_error;
  } catch (const Error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return numerical_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return config_error;
  }
  return config_error;
}
