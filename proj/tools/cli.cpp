#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <optional>
#include <ostream>
#include <thread>

#include "delaycert/error.hpp"
#include "delaycert/expression.hpp"
#include "delaycert/freqcheck.hpp"
#include "delaycert/goodwin.hpp"
#include "delaycert/io.hpp"
#include "delaycert/simulate.hpp"
#include "delaycert/smalldelay.hpp"
#include "delaycert/spectrum.hpp"

namespace delaycert::cli {

namespace {

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::Certified:
      return kExitCertified;
    case Verdict::Rejected:
      return kExitRejected;
    case Verdict::Inconclusive:
      break;
  }
  return kExitInconclusive;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f << text;
}

double parse_number(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("invalid number '" + text + "' in " + what);
  }
}

// "lo:hi:N"
goodwin::Range parse_range(const std::string& text, const std::string& what) {
  const auto a = text.find(':');
  const auto b = a == std::string::npos ? a : text.find(':', a + 1);
  if (b == std::string::npos) throw ConfigError(what + " must look like lo:hi:N");
  goodwin::Range r;
  r.lo = parse_number(text.substr(0, a), what);
  r.hi = parse_number(text.substr(a + 1, b - a - 1), what);
  const double count = parse_number(text.substr(b + 1), what);
  if (count < 1 || count != static_cast<int>(count)) throw ConfigError(what + ": N must be a positive integer");
  r.count = static_cast<int>(count);
  return r;
}

// const:v | const:v1,v2,... | random[:lo:hi] | expression in sigma (read as t)
History parse_history(const std::string& text, Index n, std::uint64_t seed) {
  if (text.rfind("const:", 0) == 0) {
    std::vector<double> values;
    std::string rest = text.substr(6);
    std::size_t start = 0;
    while (true) {
      const auto comma = rest.find(',', start);
      values.push_back(parse_number(rest.substr(start, comma - start), "history"));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    Vector v(n);
    if (values.size() == 1) {
      v.setConstant(values[0]);
    } else if (static_cast<Index>(values.size()) == n) {
      for (Index i = 0; i < n; ++i) v(i) = values[static_cast<std::size_t>(i)];
    } else {
      throw ConfigError("const history needs 1 or n values");
    }
    return [v](double) { return v; };
  }
  if (text == "random") return random_history(n, seed);
  if (text.rfind("random:", 0) == 0) {
    const auto colon = text.find(':', 7);
    if (colon == std::string::npos) throw ConfigError("random history must look like random:lo:hi");
    return random_history(n, seed, parse_number(text.substr(7, colon - 7), "history"),
                          parse_number(text.substr(colon + 1), "history"));
  }
  expr::ExprTree tree;
  try {
    tree = expr::parse_expression(text);
  } catch (const SyntaxError& e) {
    throw ConfigError(std::string("history: ") + e.what());
  }
  return [tree, n](double t) { return Vector::Constant(n, tree.evaluate(t)); };
}

struct Common {
  int threads = 0;
  std::uint64_t seed = 1;

  int worker_count() const {
    if (threads > 0) return threads;
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  }
};

struct CheckArgs {
  std::string system;
  std::string mode;
  double nu = 0.0;
  std::optional<double> lambda;
  std::optional<double> k1;
  std::optional<double> k2;
  std::string out;
  int nodes = 2048;
};

int do_check(const CheckArgs& args, const Common& common, std::ostream& out) {
  const io::SystemFile file = io::load_system(args.system);
  SweepOptions sweep;
  sweep.nodes = args.nodes;
  sweep.threads = common.worker_count();
  Certificate cert;
  if (args.mode == "smith") {
    std::optional<double> lambda = args.lambda;
    if (!lambda && file.nonlinearity && file.nonlinearity->lipschitz())
      lambda = file.nonlinearity->lipschitz()->lambda;
    if (!lambda) throw ConfigError("smith needs --lambda or a lipschitz entry in the system file");
    cert = smith_check(file.system, *lambda, args.nu, sweep);
  } else if (args.mode == "circle") {
    std::optional<double> k1 = args.k1;
    std::optional<double> k2 = args.k2;
    Mode mode = Mode::MSC;
    if (file.nonlinearity && file.nonlinearity->sector()) {
      const auto& s = *file.nonlinearity->sector();
      if (!k1) k1 = s.k1;
      if (!k2) k2 = s.k2;
      if (!args.k1 && !args.k2 && !s.incremental) mode = Mode::SC;
    }
    if (!k1 || !k2) throw ConfigError("circle needs --k1 and --k2 or a sector entry in the system file");
    cert = circle_check(file.system, *k1, *k2, args.nu, sweep, mode);
  } else {
    if (!file.nonlinearity) throw ConfigError("mode " + args.mode + " needs a nonlinearity in the system file");
    cert = certify(file.system, *file.nonlinearity, args.nu, args.mode == "sc" ? Mode::SC : Mode::MSC,
                   sweep);
  }
  out << io::certificate_text(cert);
  if (!args.out.empty()) write_file(args.out, io::certificate_json(cert));
  return exit_code(cert.verdict);
}

int do_spectrum(const std::string& system, double nu, const std::string& out_path, std::ostream& out) {
  const io::SystemFile file = io::load_system(system);
  try {
    const RootCount rc = count_roots_right_of(file.system, nu);
    out << io::root_count_text(rc);
    if (!out_path.empty()) write_file(out_path, io::root_count_json(rc));
    return kExitCertified;
  } catch (const RootOnLine& e) {
    out << "error: " << e.code() << "\nimag_part: " << io::format_double(e.imag_part()) << "\n";
  } catch (const NonIntegerWinding& e) {
    out << "error: " << e.code() << "\nresidual: " << io::format_double(e.residual()) << "\n";
  }
  return kExitInconclusive;
}

struct SimulateArgs {
  std::string system;
  std::string history = "const:1";
  double t_end = 10.0;
  double step = 0.01;
  std::string forcing;
  std::string out;
};

int do_simulate(const SimulateArgs& args, const Common& common, std::ostream& out) {
  const io::SystemFile file = io::load_system(args.system);
  if (!file.nonlinearity) throw ConfigError("simulate needs a nonlinearity in the system file");
  IntegrateOptions opts;
  opts.t_end = args.t_end;
  opts.step = args.step;
  const History history = parse_history(args.history, file.system.n(), common.seed);
  if (!args.forcing.empty()) {
    if (args.forcing.rfind("random", 0) == 0) throw ConfigError("forcing must be const:v or an expression");
    opts.forcing = parse_history(args.forcing, file.system.n(), common.seed);
  }
  try {
    const Trace trace = integrate(file.system, *file.nonlinearity, history, opts);
    if (args.out.empty()) {
      io::write_trace_csv(out, trace);
    } else {
      std::ofstream f(args.out, std::ios::binary);
      if (!f) throw ConfigError("cannot write '" + args.out + "'");
      io::write_trace_csv(f, trace);
      out << "nodes: " << trace.size() << "\nstep: " << io::format_double(trace.step())
          << "\nt_end: " << io::format_double(trace.t_end()) << "\n";
    }
  } catch (const NonFiniteState& e) {
    out << "error: " << e.code() << "\nblowup_time: " << io::format_double(e.blowup_time()) << "\n";
    return kExitInconclusive;
  }
  return kExitCertified;
}

int do_smalldelay(int n, int r, double lambda, double tau, const std::string& out_path,
                  std::ostream& out) {
  const SmallDelayReport rep = small_delay_certificate(n, r, lambda, tau);
  out << io::small_delay_text(rep);
  if (!out_path.empty()) write_file(out_path, io::small_delay_json(rep));
  return exit_code(rep.verdict_frequency);
}

struct GoodwinArgs {
  std::string tau = "0.05:4:41";
  std::string lambda = "0.05:1:21";
  double tau_point = 1.0;
  double lambda_point = 1.0;
  int rho_grid = 64;
  int nodes = 2048;
  bool decoupled = false;
  bool simulate = false;
  std::string out;
  std::string svg;
};

goodwin::CertifyOptions certify_options(const GoodwinArgs& args) {
  goodwin::CertifyOptions opts;
  opts.rho_grid = args.rho_grid;
  opts.sweep.nodes = args.nodes;
  opts.coupled = !args.decoupled;
  return opts;
}

int do_goodwin_region(const GoodwinArgs& args, const Common& common, std::ostream& out) {
  goodwin::RegionConfig cfg;
  cfg.tau = parse_range(args.tau, "--tau");
  cfg.lambda = parse_range(args.lambda, "--lambda");
  cfg.certify = certify_options(args);
  cfg.threads = common.worker_count();
  const auto rows = goodwin::region_scan(cfg);
  if (args.out.empty()) {
    io::write_region_csv(out, rows);
  } else {
    std::ofstream f(args.out, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + args.out + "'");
    io::write_region_csv(f, rows);
    int certified = 0;
    for (const auto& r : rows) certified += r.point.certified() ? 1 : 0;
    out << "nodes: " << rows.size() << "\ncertified: " << certified << "\n";
  }
  if (!args.svg.empty()) {
    std::ofstream f(args.svg, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + args.svg + "'");
    io::write_region_svg(f, rows);
  }
  return kExitCertified;
}

int do_goodwin_point(const GoodwinArgs& args, const Common& common, std::ostream& out) {
  const goodwin::Point pt = goodwin::certify(args.tau_point, args.lambda_point, certify_options(args));
  out << io::goodwin_point_text(pt);
  if (!args.out.empty()) write_file(args.out, io::goodwin_point_json(pt));
  int code = kExitRejected;
  if (pt.certified())
    code = kExitCertified;
  else if (pt.reason != "no_rho_passed")
    code = kExitInconclusive;
  if (args.simulate) {
    goodwin::SimulationOptions sim;
    sim.seed = common.seed;
    sim.coupled = !args.decoupled;
    const auto check = goodwin::validate_by_simulation(args.tau_point, args.lambda_point, sim);
    out << "simulation_pairs: " << check.pairs
        << "\nsimulation_min_contraction: " << io::format_double(check.min_contraction)
        << "\nsimulation_fixed_point_error: " << io::format_double(check.max_fixed_point_error)
        << "\nsimulation_min_rate: " << io::format_double(check.min_rate)
        << "\nsimulation_monotone: " << (check.monotone ? 1 : 0)
        << "\nsimulation_passed: " << (check.passed ? 1 : 0) << "\n";
    if (pt.certified() && !check.passed) code = kExitInconclusive;
  }
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Frequency-domain stability certificates for delay equations", "delaycert"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--threads", common.threads, "Worker threads (default: hardware concurrency)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--seed", common.seed, "Seed for random simulation histories");

  CheckArgs check;
  auto* check_cmd = app.add_subcommand("check", "Verify the frequency condition and root count");
  check_cmd->add_option("--system", check.system, "System file (JSON)")->required();
  check_cmd->add_option("--mode", check.mode, "sc, msc, smith or circle")
      ->required()
      ->check(CLI::IsMember({"sc", "msc", "smith", "circle"}));
  check_cmd->add_option("--nu", check.nu, "Exponent nu");
  auto* lambda_opt = check_cmd->add_option("--lambda", check.lambda, "Lipschitz constant (smith)");
  auto* k1_opt = check_cmd->add_option("--k1", check.k1, "Lower sector slope (circle)");
  auto* k2_opt = check_cmd->add_option("--k2", check.k2, "Upper sector slope (circle)");
  lambda_opt->excludes(k1_opt)->excludes(k2_opt);
  check_cmd->add_option("--nodes", check.nodes, "Sweep grid nodes")->check(CLI::PositiveNumber);
  check_cmd->add_option("--out", check.out, "Write the certificate as JSON");

  std::string spec_system;
  double spec_nu = 0.0;
  std::string spec_out;
  auto* spectrum_cmd = app.add_subcommand("spectrum", "Count characteristic roots right of -nu");
  spectrum_cmd->add_option("--system", spec_system, "System file (JSON)")->required();
  spectrum_cmd->add_option("--nu", spec_nu, "Exponent nu");
  spectrum_cmd->add_option("--out", spec_out, "Write the count as JSON");

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Integrate the nonlinear delay equation");
  simulate_cmd->add_option("--system", sim.system, "System file (JSON)")->required();
  simulate_cmd->add_option("--history", sim.history,
                           "const:v[,v2,...], random[:lo:hi] or an expression in sigma (time)");
  simulate_cmd->add_option("--tend", sim.t_end, "Final time");
  simulate_cmd->add_option("--step", sim.step, "Requested step");
  simulate_cmd->add_option("--forcing", sim.forcing,
                           "Additive forcing W(t): const:v[,v2,...] or an expression in sigma (time)");
  simulate_cmd->add_option("--out", sim.out, "Trace CSV path (stdout when omitted)");

  int sd_n = 1;
  int sd_r = 1;
  double sd_lambda = 1.0;
  double sd_tau = 0.0;
  std::string sd_out;
  auto* small_cmd = app.add_subcommand("smalldelay", "Small-delay inertial manifold thresholds");
  small_cmd->add_option("--n", sd_n, "State dimension")->required();
  small_cmd->add_option("--r", sd_r, "Number of delayed readouts")->required();
  small_cmd->add_option("--lambda", sd_lambda, "Lipschitz constant")->required();
  small_cmd->add_option("--tau", sd_tau, "Delay")->required();
  small_cmd->add_option("--out", sd_out, "Write the report as JSON");

  GoodwinArgs gw;
  auto* goodwin_cmd = app.add_subcommand("goodwin", "Goodwin chain case study");
  goodwin_cmd->require_subcommand(1);
  goodwin_cmd->add_option("--rho-grid", gw.rho_grid, "Number of rho grid nodes")->check(CLI::PositiveNumber);
  goodwin_cmd->add_option("--nodes", gw.nodes, "Sweep grid nodes")->check(CLI::PositiveNumber);
  goodwin_cmd->add_flag("--decoupled", gw.decoupled, "Drop the x1 -> x2 -> x3 coupling");
  auto* region_cmd = goodwin_cmd->add_subcommand("region", "Scan a (tau, lambda) grid");
  region_cmd->add_option("--tau", gw.tau, "lo:hi:N");
  region_cmd->add_option("--lambda", gw.lambda, "lo:hi:N");
  region_cmd->add_option("--out", gw.out, "Region CSV path (stdout when omitted)");
  region_cmd->add_option("--svg", gw.svg, "Heatmap SVG path");
  auto* point_cmd = goodwin_cmd->add_subcommand("point", "Certify a single (tau, lambda)");
  point_cmd->add_option("--tau", gw.tau_point, "Delay")->required();
  point_cmd->add_option("--lambda", gw.lambda_point, "Decay rate")->required();
  point_cmd->add_flag("--simulate", gw.simulate, "Validate by simulating random history pairs");
  point_cmd->add_option("--out", gw.out, "Write the point as JSON");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*check_cmd) return do_check(check, common, out);
    if (*spectrum_cmd) return do_spectrum(spec_system, spec_nu, spec_out, out);
    if (*simulate_cmd) return do_simulate(sim, common, out);
    if (*small_cmd) return do_smalldelay(sd_n, sd_r, sd_lambda, sd_tau, sd_out, out);
    if (*region_cmd) return do_goodwin_region(gw, common, out);
    if (*point_cmd) return do_goodwin_point(gw, common, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DimensionError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << e.code() << ": " << e.what() << "\n";
    return kExitInconclusive;
  }
  return kExitUsage;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace delaycert::cli
