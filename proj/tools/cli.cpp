#include "cli.hpp"

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif
#include "dtph/dtph.hpp"

namespace dtph::cli {

namespace {

using io::json;

struct Options {
  double tol = -1.0;
  int steps = 10;
  std::uint64_t seed = 0;
  bool json = false;
  std::string output;
  std::string alpha = "1";
  std::string beta = "1";
  double h = -1.0;
  std::string mode;
  std::string weight;
  std::string weight1;
  std::string weight2;
  bool find_weight = false;
  std::string inputs_csv;
  std::string x0_path;
  std::string coupling_path;
  std::string lagrangian_path;
  int trials = 1;
  std::vector<std::string> files;
};

struct Context {
  Options opt;
  Tolerances tol;
  std::ostream& out;
  std::ostream& err;

  // Data (JSON / CSV) goes to --output or stdout; reports go to stdout when
  // the data went to a file and to stderr otherwise.
  std::ostream& report() const { return opt.output.empty() ? err : out; }

  void emit(const std::string& text) const {
    if (opt.output.empty()) {
      out << text;
      return;
    }
    std::ofstream f(opt.output);
    if (!f) throw Error(ErrorKind::ParseError, "cannot write '" + opt.output + "'");
    f << text;
  }
};

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError: return kParseError;
    case ErrorKind::DimensionMismatch:
    case ErrorKind::PortMismatch: return kDimensionError;
    case ErrorKind::NonUniqueStep:
    case ErrorKind::InconsistentStep:
    case ErrorKind::InconsistentInitialState: return kStepFailure;
    case ErrorKind::CouplingSingular:
    case ErrorKind::NonContractiveCoupling:
    case ErrorKind::FeedbackSingular:
    case ErrorKind::NonCausal: return kCouplingError;
    case ErrorKind::NotScatteringPH: return kCheckFailed;
    default: return kNumericalError;
  }
}

Tolerances make_tolerances(const Options& opt) {
  Tolerances tol;
  double value = opt.tol;
  if (value < 0.0) {
    if (const char* env = std::getenv("DTPH_TOL")) {
      try {
        value = std::stod(env);
      } catch (const std::exception&) {
        throw Error(ErrorKind::ParseError, std::string("DTPH_TOL is not a number: ") + env);
      }
    }
  }
  if (value >= 0.0) {
    tol.psd_atol = value;
    tol.residual_rtol = value;
  }
  tol.validate();
  return tol;
}

Complex parse_scalar(const std::string& text, const char* name) {
  std::stringstream ss(text);
  double re = 0.0, im = 0.0;
  char comma = 0;
  if (!(ss >> re)) throw Error(ErrorKind::ParseError, std::string(name) + ": not a number");
  if (ss >> comma) {
    if (comma != ',' || !(ss >> im)) {
      throw Error(ErrorKind::ParseError, std::string(name) + ": expected 're' or 're,im'");
    }
  }
  return {re, im};
}

const char* mark(bool b) { return b ? "✓" : "✗"; }

void print_classification(std::ostream& os, const ClassificationReport& r) {
  const auto row = [&](const char* name, const std::string& value) {
    os << std::left << std::setw(26) << name << value << "\n";
  };
  row("dim", std::to_string(r.dim) + " (n = " + std::to_string(r.n) + ")");
  row("contractive", mark(r.contractive));
  row("monotone", mark(r.monotone));
  row("norm_preserving", mark(r.norm_preserving));
  row("dirac", mark(r.dirac));
  row("lagrangian", mark(r.lagrangian));
  row("maximal_contractive", mark(r.maximal_contractive));
  row("maximal_monotone", mark(r.maximal_monotone));
  row("maximal_norm_preserving", mark(r.maximal_norm_preserving));
  row("contractive_min_eig", io::format_double(r.contractive_min_eig));
  row("monotone_min_eig", io::format_double(r.monotone_min_eig));
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::vector<Vector> random_inputs(std::uint64_t seed, int steps, Eigen::Index width, bool cplx) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Vector> inputs(static_cast<std::size_t>(steps), Vector(width));
  for (Vector& u : inputs) {
    for (Eigen::Index i = 0; i < width; ++i) {
      const double re = normal(rng);
      u(i) = Complex(re, cplx ? normal(rng) : 0.0);
    }
  }
  return inputs;
}

std::optional<StorageWeight> load_weight(const std::string& path, const Tolerances& tol) {
  if (path.empty()) return std::nullopt;
  return StorageWeight(io::matrix_from_json(io::read_json_file(path), "weight"), tol);
}

StorageWeight weight_for(const Context& ctx, const StandardSystem& sys, const std::string& path) {
  if (auto w = load_weight(path, ctx.tol)) return *w;
  if (ctx.opt.find_weight) return find_storage_weight(sys, ctx.tol);
  throw Error(ErrorKind::ParseError, "a storage weight is required: pass --weight or --find-weight");
}

StandardSystem reduced_system(const DescriptorSystem& sys, const Tolerances& tol) {
  return reduce_to_standard(sys, tol).reduced;
}

// ---------------------------------------------------------------- commands

int run_classify(const Context& ctx) {
  const Subspace s = io::subspace_from_json(io::read_json_file(ctx.opt.files.at(0)), ctx.tol);
  const ClassificationReport r = classify(s, ctx.tol);
  if (ctx.opt.json) {
    ctx.emit(dump(io::to_json(r)));
  } else {
    std::ostringstream os;
    print_classification(os, r);
    ctx.emit(os.str());
  }
  return kOk;
}

int run_cayley(const Context& ctx) {
  const Subspace s = io::subspace_from_json(io::read_json_file(ctx.opt.files.at(0)), ctx.tol);
  const Subspace c = cayley(s, parse_scalar(ctx.opt.alpha, "--alpha"),
                            parse_scalar(ctx.opt.beta, "--beta"), ctx.tol);
  const ClassificationReport r = classify(c, ctx.tol);
  json j = io::to_json(c);
  if (ctx.opt.json) j["classification"] = io::to_json(r);
  ctx.emit(dump(j));
  ctx.report() << "cayley: dim=" << c.dim() << " contractive=" << mark(r.contractive)
               << " monotone=" << mark(r.monotone) << " norm_preserving="
               << mark(r.norm_preserving) << "\n";
  return kOk;
}

int run_check_ph(const Context& ctx) {
  const StandardSystem sys =
      reduced_system(io::system_from_json(io::read_json_file(ctx.opt.files.at(0))), ctx.tol);
  const StorageWeight w = weight_for(ctx, sys, ctx.opt.weight);
  const PhReport r = is_scattering_ph(sys, w, ctx.tol);
  if (ctx.opt.json) {
    ctx.emit(dump({{"scattering_ph", r.scattering_ph},
                   {"lmi_residual", r.lmi_residual},
                   {"weighted_norm", r.weighted_norm},
                   {"weight", io::to_json(w.matrix())}}));
  } else {
    std::ostringstream os;
    os << std::left << std::setw(16) << "scattering_ph" << mark(r.scattering_ph) << "\n"
       << std::setw(16) << "lmi_residual" << io::format_double(r.lmi_residual) << "\n"
       << std::setw(16) << "weighted_norm" << io::format_double(r.weighted_norm) << "\n";
    ctx.emit(os.str());
  }
  return r.scattering_ph ? kOk : kCheckFailed;
}

int run_find_weight(const Context& ctx) {
  const StandardSystem sys =
      reduced_system(io::system_from_json(io::read_json_file(ctx.opt.files.at(0))), ctx.tol);
  const StorageWeight w = find_storage_weight(sys, ctx.tol);
  const PhReport r = is_scattering_ph(sys, w, ctx.tol);
  ctx.emit(dump(io::to_json(w.matrix())));
  ctx.report() << "find-weight: lmi_residual=" << io::format_double(r.lmi_residual) << "\n";
  return kOk;
}

struct SimOutcome {
  Trajectory traj;
  std::vector<double> margins;
  double min_margin = 0.0;
  double max_residual = 0.0;
  bool cplx = false;
};

SimOutcome simulate_geometric(const Context& ctx, const GeometricPH& g, std::uint64_t seed) {
  const GeometricValidation v = validate(g, ctx.tol);
  if (!v.valid) {
    std::string msg = "invalid geometric system:";
    for (const std::string& s : v.violations) msg += " " + s + ";";
    throw Error(ErrorKind::NotContractive, msg);
  }
  SimOutcome o;
  o.cplx = !(g.N.is_real() && g.C.is_real());
  const std::vector<Vector> inputs =
      ctx.opt.inputs_csv.empty() ? random_inputs(seed, ctx.opt.steps, g.m, o.cplx)
                                 : io::read_inputs_csv(ctx.opt.inputs_csv, g.m, o.cplx);
  const Vector x0 = ctx.opt.x0_path.empty()
                        ? Vector(Vector::Zero(g.n))
                        : io::vector_from_json(io::read_json_file(ctx.opt.x0_path), "x0");
  GeoTrajectory gt = simulate(g, x0, inputs, ctx.tol);
  o.traj = std::move(gt.traj);
  o.margins = gt.margins;
  o.min_margin = gt.min_margin;
  o.max_residual = gt.max_power_residual;
  return o;
}

SimOutcome simulate_system(const Context& ctx, const DescriptorSystem& sys, std::uint64_t seed) {
  SimOutcome o;
  o.cplx = !(is_real(sys.e) && is_real(sys.a) && is_real(sys.b) && is_real(sys.c) &&
             is_real(sys.d));
  const std::vector<Vector> inputs =
      ctx.opt.inputs_csv.empty() ? random_inputs(seed, ctx.opt.steps, sys.inputs(), o.cplx)
                                 : io::read_inputs_csv(ctx.opt.inputs_csv, sys.inputs(), o.cplx);
  const Reduction red = reduce_to_standard(sys, ctx.tol);
  Vector x0;
  if (!ctx.opt.x0_path.empty()) {
    x0 = io::vector_from_json(io::read_json_file(ctx.opt.x0_path), "x0");
  } else {
    const Vector u0 = inputs.empty() ? Vector(Vector::Zero(sys.inputs())) : inputs.front();
    x0 = red.psi * u0;
  }
  o.traj = sys.has_identity_e() ? simulate_standard(red.reduced, x0, inputs)
                                : simulate_descriptor(sys, x0, inputs, ctx.tol);

  DissipationReport d;
  if (auto w = load_weight(ctx.opt.weight, ctx.tol)) {
    d = check_dissipation(o.traj, *w, sys.e, ctx.tol);
  } else {
    std::optional<StorageWeight> reduced_weight;
    if (red.reduced.states() == 0) {
      reduced_weight.emplace(Matrix(0, 0), ctx.tol);
    } else {
      try {
        reduced_weight.emplace(find_storage_weight(red.reduced, ctx.tol));
      } catch (const Error& e) {
        throw Error(ErrorKind::NotFound,
                    std::string("no storage weight for the margins (pass --weight): ") + e.what());
      }
    }
    Trajectory projected = o.traj;
    for (Vector& x : projected.states) x = red.project * x;
    const Eigen::Index r = red.reduced.states();
    d = check_dissipation(projected, *reduced_weight, Matrix::Identity(r, r), ctx.tol);
  }
  o.margins = d.margins;
  o.min_margin = d.min_margin;
  for (double res : o.traj.residuals) o.max_residual = std::max(o.max_residual, res);
  return o;
}

int run_simulate(const Context& ctx) {
  const json j = io::read_json_file(ctx.opt.files.at(0));
  const bool geometric = j.is_object() && j.contains("N");
  std::optional<GeometricPH> g;
  std::optional<DescriptorSystem> sys;
  if (geometric) {
    g = io::geometric_from_json(j, ctx.tol);
  } else {
    sys = io::system_from_json(j);
  }
  const int trials = std::max(1, ctx.opt.trials);
  bool all_passive = true;
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t seed = ctx.opt.seed + static_cast<std::uint64_t>(t);
    const SimOutcome o = geometric ? simulate_geometric(ctx, *g, seed)
                                   : simulate_system(ctx, *sys, seed);
    if (trials == 1) {
      std::ostringstream csv;
      io::write_trajectory_csv(csv, o.traj, o.margins, o.cplx);
      ctx.emit(csv.str());
    }
    if (trials > 1) ctx.report() << "trial=" << t << " seed=" << seed << " ";
    ctx.report() << "min_margin=" << io::format_double(o.min_margin)
                 << " max_residual=" << io::format_double(o.max_residual)
                 << " steps=" << o.traj.steps() << "\n";
    all_passive = all_passive && o.min_margin >= -ctx.tol.psd_atol;
  }
  return all_passive ? kOk : kCheckFailed;
}

int run_discretize(const Context& ctx) {
  if (!(ctx.opt.h > 0.0)) throw Error(ErrorKind::ParseError, "--h must be a positive step");
  const Subspace m = io::subspace_from_json(io::read_json_file(ctx.opt.files.at(0)), ctx.tol);
  std::optional<Subspace> l;
  if (!ctx.opt.lagrangian_path.empty()) {
    l = io::subspace_from_json(io::read_json_file(ctx.opt.lagrangian_path), ctx.tol);
  }
  const Discretization d = discretize_dh(m, l ? &*l : nullptr, ctx.opt.h, ctx.tol);
  json j = io::to_json(d.relation);
  if (ctx.opt.json) j["classification"] = io::to_json(d.report);
  ctx.emit(dump(j));
  ctx.report() << "discretize: h=" << io::format_double(ctx.opt.h)
               << " contractive=" << mark(d.report.contractive)
               << " norm_preserving=" << mark(d.report.norm_preserving) << "\n";
  return kOk;
}

int run_dilate(const Context& ctx) {
  const StandardSystem sys = io::standard_from_json(io::read_json_file(ctx.opt.files.at(0)));
  const StorageWeight w = weight_for(ctx, sys, ctx.opt.weight);
  const GeometricPH g = dilate(sys, w, ctx.tol);
  const GeometricValidation v = validate(g, ctx.tol);
  ctx.emit(dump(io::to_json(g)));
  ctx.report() << "dilate: n=" << g.n << " r=" << g.r << " m=" << g.m
               << " valid=" << mark(v.valid) << "\n";
  return v.valid ? kOk : kCheckFailed;
}

int run_interconnect(const Context& ctx) {
  if (ctx.opt.files.size() != 2) {
    throw Error(ErrorKind::ParseError, "interconnect needs two system files");
  }
  const DescriptorSystem s1 = io::system_from_json(io::read_json_file(ctx.opt.files[0]));
  const DescriptorSystem s2 = io::system_from_json(io::read_json_file(ctx.opt.files[1]));
  io::CouplingSpec spec;
  if (!ctx.opt.coupling_path.empty()) {
    spec = io::coupling_from_json(io::read_json_file(ctx.opt.coupling_path));
  }
  if (!ctx.opt.mode.empty()) spec.mode = io::parse_mode(ctx.opt.mode);

  const auto weights = [&](const StandardSystem& a, const StandardSystem& b)
      -> std::optional<std::pair<StorageWeight, StorageWeight>> {
    std::optional<StorageWeight> w1 = load_weight(ctx.opt.weight1, ctx.tol);
    std::optional<StorageWeight> w2 = load_weight(ctx.opt.weight2, ctx.tol);
    if (ctx.opt.find_weight) {
      if (!w1) w1 = find_storage_weight(a, ctx.tol);
      if (!w2) w2 = find_storage_weight(b, ctx.tol);
    }
    if (w1 && w2) return std::make_pair(*w1, *w2);
    return std::nullopt;
  };
  const auto standard = [](const DescriptorSystem& d) {
    if (!d.has_identity_e()) {
      throw Error(ErrorKind::NotIdentityE, "this mode requires E = I for both systems");
    }
    return StandardSystem{d.a, d.b, d.c, d.d, d.coupled};
  };

  bool ok = true;
  switch (spec.mode) {
    case CouplingMode::General: {
      if (!spec.kernel) throw Error(ErrorKind::ParseError, "general mode needs --coupling");
      const ComposedDescriptor comp = general_interconnect(s1, s2, *spec.kernel, ctx.tol);
      json j = io::to_json(comp.system);
      j["blocks"] = {{"states", io::blocks_to_json(comp.state_blocks)},
                     {"inputs", io::blocks_to_json(comp.input_blocks)},
                     {"outputs", io::blocks_to_json(comp.output_blocks)}};
      ctx.emit(dump(j));
      const ClassificationReport cr = certify_coupling(*spec.kernel, ctx.tol);
      ctx.report() << "coupling: contractive=" << mark(cr.contractive)
                   << " norm_preserving=" << mark(cr.norm_preserving) << "\n";
      if (s1.has_identity_e() && s2.has_identity_e()) {
        if (auto w = weights(standard(s1), standard(s2))) {
          const Eigen::Index alg = comp.system.states() - s1.states() - s2.states();
          const Matrix xh = block_diag(block_diag(w->first.matrix(), w->second.matrix()),
                                       Matrix::Identity(alg, alg));
          const bool cplx = !is_real(comp.system.a) || !is_real(comp.system.b);
          const std::vector<Vector> inputs =
              random_inputs(ctx.opt.seed, ctx.opt.steps, comp.system.inputs(), cplx);
          const Vector u0 =
              inputs.empty() ? Vector(Vector::Zero(comp.system.inputs())) : inputs.front();
          const Vector x0 = comp.initial_state(Vector::Zero(s1.states()),
                                               Vector::Zero(s2.states()), u0, ctx.tol);
          const Trajectory traj = simulate_descriptor(comp.system, x0, inputs, ctx.tol);
          const DissipationReport d = check_dissipation(traj, xh, comp.system.e, ctx.tol);
          ctx.report() << "dissipation: min_margin=" << io::format_double(d.min_margin)
                       << " steps=" << traj.steps() << " passive=" << mark(d.passive) << "\n";
          ok = d.passive;
        }
      }
      break;
    }
    case CouplingMode::Redheffer: {
      const StandardSystem a = standard(s1), b = standard(s2);
      const RedhefferResult r = redheffer_reduce(a, b, ctx.tol);
      json j = io::to_json(r.reduced);
      const Eigen::Index e1 = a.inputs() - a.coupled.value_or(0);
      const Eigen::Index o1 = a.outputs() - a.coupled.value_or(0);
      j["blocks"] = {
          {"states", io::blocks_to_json({{"x1", 0, a.states()}, {"x2", a.states(), b.states()}})},
          {"inputs", io::blocks_to_json({{"u1^2", 0, e1}, {"u2^2", e1, b.inputs() - b.coupled.value_or(0)}})},
          {"outputs",
           io::blocks_to_json({{"y1^2", 0, o1}, {"y2^2", o1, b.outputs() - b.coupled.value_or(0)}})}};
      ctx.emit(dump(j));
      ctx.report() << "invertibility: I-D1D2=" << mark(r.invertibility.i_minus_d1d2)
                   << " I-D2D1=" << mark(r.invertibility.i_minus_d2d1)
                   << " kernel_trivial=" << mark(r.invertibility.kernel_trivial) << "\n";
      if (auto w = weights(a, b)) {
        const PhReport ph =
            is_scattering_ph(r.reduced, compose_storage(w->first, w->second, ctx.tol), ctx.tol);
        ctx.report() << "scattering_ph=" << mark(ph.scattering_ph)
                     << " lmi_residual=" << io::format_double(ph.lmi_residual) << "\n";
        ok = ph.scattering_ph;
      }
      break;
    }
    case CouplingMode::Feedback: {
      const StandardSystem a = standard(s1), b = standard(s2);
      const Matrix ahat = closed_loop_matrix(a, b, ctx.tol);
      const Eigen::Index n = ahat.rows();
      const StandardSystem loop{ahat, Matrix(n, 0), Matrix(0, n), Matrix(0, 0), std::nullopt};
      json j = io::to_json(loop);
      j["blocks"] = {
          {"states", io::blocks_to_json({{"x1", 0, a.states()}, {"x2", a.states(), b.states()}})}};
      ctx.emit(dump(j));
      if (auto w = weights(a, b)) {
        const ClosedLoopReport r = closed_loop(a, b, w->first, w->second, ctx.tol);
        ctx.report() << "closed_loop: contractive=" << mark(r.contractive)
                     << " lmi_max_eig=" << io::format_double(r.lmi_max_eig)
                     << " weighted_norm=" << io::format_double(r.weighted_norm)
                     << " literal_norm=" << io::format_double(r.literal_norm) << "\n";
        ok = r.contractive;
      }
      break;
    }
  }
  return ok ? kOk : kCheckFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"dtph: discrete-time scattering port-Hamiltonian toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--tol", opt.tol, "Tolerance for PSD and residual tests (env DTPH_TOL)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--steps", opt.steps, "Number of simulation steps")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", opt.seed, "Seed for random inputs");
  app.add_flag("--json", opt.json, "Machine-readable output");
  app.add_option("--output", opt.output, "Write data output to this path");

  const auto add_file = [&](CLI::App* sub, const char* what) {
    sub->add_option("file", opt.files, what)->required()->check(CLI::ExistingFile);
  };
  const auto add_weight = [&](CLI::App* sub) {
    sub->add_option("--weight", opt.weight, "Storage weight matrix JSON")->check(CLI::ExistingFile);
    sub->add_flag("--find-weight", opt.find_weight, "Search a storage weight");
  };

  CLI::App* classify_cmd = app.add_subcommand("classify", "Classify a linear relation");
  add_file(classify_cmd, "Subspace JSON");

  CLI::App* cayley_cmd = app.add_subcommand("cayley", "Cayley transform of a relation");
  add_file(cayley_cmd, "Subspace JSON");
  cayley_cmd->add_option("--alpha", opt.alpha, "alpha as 're' or 're,im'");
  cayley_cmd->add_option("--beta", opt.beta, "beta as 're' or 're,im'");

  CLI::App* check_cmd = app.add_subcommand("check-ph", "Verify the scattering-pH LMI");
  add_file(check_cmd, "System JSON");
  add_weight(check_cmd);

  CLI::App* find_cmd = app.add_subcommand("find-weight", "Search a storage weight");
  add_file(find_cmd, "System JSON");

  CLI::App* sim_cmd = app.add_subcommand("simulate", "Simulate a system or geometric pH system");
  add_file(sim_cmd, "System or GeometricPH JSON");
  sim_cmd->add_option("--inputs", opt.inputs_csv, "Input CSV")->check(CLI::ExistingFile);
  sim_cmd->add_option("--x0", opt.x0_path, "Initial state JSON")->check(CLI::ExistingFile);
  sim_cmd->add_option("--weight", opt.weight, "Storage weight for the margins")
      ->check(CLI::ExistingFile);
  sim_cmd->add_option("--trials", opt.trials, "Independent trials with seeds seed+i")
      ->check(CLI::PositiveNumber);

  CLI::App* disc_cmd = app.add_subcommand("discretize", "Trapezoidal discretization");
  add_file(disc_cmd, "Monotone subspace JSON");
  disc_cmd->set_help_flag("--help", "Print this help message and exit");
  disc_cmd->add_option("--h", opt.h, "Step size")->required();
  disc_cmd->add_option("--lagrangian", opt.lagrangian_path, "Lagrangian subspace JSON")
      ->check(CLI::ExistingFile);

  CLI::App* inter_cmd = app.add_subcommand("interconnect", "Interconnect two systems");
  inter_cmd->add_option("files", opt.files, "Two system JSON files")
      ->required()
      ->expected(2)
      ->check(CLI::ExistingFile);
  inter_cmd->add_option("--mode", opt.mode, "general | redheffer | feedback");
  inter_cmd->add_option("--coupling", opt.coupling_path, "Coupling JSON")
      ->check(CLI::ExistingFile);
  inter_cmd->add_option("--weight1", opt.weight1, "Weight of system 1")->check(CLI::ExistingFile);
  inter_cmd->add_option("--weight2", opt.weight2, "Weight of system 2")->check(CLI::ExistingFile);
  inter_cmd->add_flag("--find-weight", opt.find_weight, "Search missing weights");

  CLI::App* dilate_cmd = app.add_subcommand("dilate", "Geometric realization by unitary dilation");
  add_file(dilate_cmd, "Standard system JSON");
  add_weight(dilate_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParseError;
  }

  try {
    const Context ctx{opt, make_tolerances(opt), out, err};
    if (*classify_cmd) return run_classify(ctx);
    if (*cayley_cmd) return run_cayley(ctx);
    if (*check_cmd) return run_check_ph(ctx);
    if (*find_cmd) return run_find_weight(ctx);
    if (*sim_cmd) return run_simulate(ctx);
    if (*disc_cmd) return run_discretize(ctx);
    if (*inter_cmd) return run_interconnect(ctx);
    if (*dilate_cmd) return run_dilate(ctx);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNumericalError;
  }
  return kParseError;
}

}  // namespace dtph::cli
