#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "cli/cli.hpp"
#include "cli/config.hpp"
#include "cli/reports.hpp"
#include "curvflow/error.hpp"

namespace curvflow::cli {

namespace {

struct QuadricArgs {
  int n = 3;
  int samples = 100000;
  int restarts = 32;
  std::uint64_t seed = 0;
  std::string out;
};

struct FlowArgs {
  int level = 3;
  int rank = 0;  // 0: taken from the degree list
  std::vector<int> degrees;
  std::string init = "monopole";
  double eps = 0.1;
  int steps = 20000;
  double tol = 1e-6;
  double step_size = 0.0;  // 0: stable_step_size of the mesh
  int record_every = 1;
  bool backtrack = true;
  std::string trace_path;
  std::string report_path;
  std::uint64_t seed = 0;
  // maxprin only
  double t_check = 0.1;
  std::vector<int> calibration_levels{3, 4};
  int calibration_steps = 100;
  std::string inject_trace;
};

struct CertArgs {
  int n = 0;
  std::vector<int> splitting;
  int k = 0;
};

void emit(const Json& j, const std::string& path, std::ostream& out) {
  const std::string text = j.dump(2) + "\n";
  out << text;
  if (!path.empty()) {
    std::ofstream f(path);
    if (!f) throw UsageError("cannot write " + path);
    f << text;
  }
}

quadric::HoloTangent random_unit(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXcd a(n);
  for (int i = 0; i < n; ++i) {
    const double re = normal(rng), im = normal(rng);
    a[i] = std::complex<double>(re, im);
  }
  return quadric::HoloTangent(a / a.norm());
}

int cmd_quadric(const QuadricArgs& a, std::ostream& out) {
  if (a.n < 2 || a.n > 16) throw UsageError("--n must be in [2, 16]");
  if (a.samples < 1 || a.restarts < 1) throw UsageError("--samples and --restarts must be positive");

  quadric::CertifyOptions opts;
  opts.restarts = a.restarts;
  opts.seed = a.seed;
  const quadric::CertifyResult cert = quadric::certify_two_positivity(a.n, opts);

  std::mt19937_64 rng(a.seed);
  double closed_trace = 0.0, closed_bracket = 0.0, trace_bracket = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto u = random_unit(a.n, rng);
    const auto v = random_unit(a.n, rng);
    const double c = quadric::bisectional_closed(u, v);
    const double t = quadric::bisectional_trace(u, v);
    const double b = quadric::bisectional_bracket(u, v);
    closed_trace = std::max(closed_trace, std::abs(c - t));
    closed_bracket = std::max(closed_bracket, std::abs(c - b));
    trace_bracket = std::max(trace_bracket, std::abs(t - b));
  }
  const double worst = std::max({closed_trace, closed_bracket, trace_bracket});

  const double sweep = quadric::bisectional_sweep_min(a.n, a.samples, a.seed);
  const double descent = quadric::minimize_bisectional(a.n, 8, 400, a.seed).value;
  const auto eq = spectra::eigenvalues_ascending(quadric::curvature_operator(quadric::equality_case_vector(a.n)));

  Json j{{"n", a.n}, {"seed", a.seed}, {"samples", a.samples}, {"restarts", a.restarts}};
  j["certification"] = to_json(cert);
  j["oracle_residuals"] = {{"closed_vs_trace", closed_trace},
                           {"closed_vs_bracket", closed_bracket},
                           {"trace_vs_bracket", trace_bracket}};
  j["nonnegativity"] = {{"sweep_min", sweep}, {"descent_min", descent}, {"min", std::min(sweep, descent)}};
  j["equality_case"] = {{"lambda1", eq.eigenvalues[0]}, {"lambda2", eq.eigenvalues[1]}};
  const bool ok = cert.certified && worst < 1e-9;
  j["pass"] = ok;
  emit(j, a.out, out);
  return ok ? kSuccess : kCertifiedFailure;
}

struct FlowSetup {
  std::shared_ptr<const mesh::SphereMesh> mesh;
  std::vector<int> degrees;
  ym::FlowConfig config;
};

FlowSetup prepare(const FlowArgs& a) {
  if (a.level < 0 || a.level > mesh::SphereMesh::kMaxLevel) throw UsageError("--level must be in [0, 7]");
  if (a.rank < 0 || a.rank > ym::GaugeField::kMaxRank) throw UsageError("--rank must be in [1, 8]");
  FlowSetup s;
  s.degrees = a.degrees;
  if (s.degrees.empty()) s.degrees.assign(a.rank == 0 ? 1 : a.rank, 0);
  if (a.rank != 0 && static_cast<int>(s.degrees.size()) != a.rank)
    throw UsageError("--degrees must list one degree per rank");
  if (static_cast<int>(s.degrees.size()) > ym::GaugeField::kMaxRank) throw UsageError("rank must be at most 8");
  if (!(a.eps >= 0.0)) throw UsageError("--eps must be nonnegative");
  if (a.steps < 0) throw UsageError("--steps must be nonnegative");
  if (!(a.tol > 0.0)) throw UsageError("--tol must be positive");
  if (a.step_size < 0.0) throw UsageError("--step-size must be positive (0 selects the stable step)");
  if (a.record_every < 1) throw UsageError("--record-every must be positive");
  s.mesh = std::make_shared<const mesh::SphereMesh>(mesh::build_icosphere(a.level));
  s.config.step_size = a.step_size > 0.0 ? a.step_size : ym::stable_step_size(*s.mesh);
  s.config.max_steps = a.steps;
  s.config.grad_tol = a.tol;
  s.config.energy_backtrack = a.backtrack;
  s.config.seed = a.seed;
  s.config.record_every = a.record_every;
  return s;
}

ym::GaugeField initial_field(const FlowArgs& a, const FlowSetup& s) {
  if (a.init == "monopole") return ym::monopole_field(s.mesh, s.degrees);
  if (a.init == "scrambled") return ym::gauge_scramble(ym::monopole_field(s.mesh, s.degrees), a.seed);
  if (a.init == "perturbed")
    return ym::perturb(ym::gauge_scramble(ym::monopole_field(s.mesh, s.degrees), a.seed), a.eps, a.seed + 1);
  if (a.init == "hemisphere") return ym::gauge_scramble(ym::hemisphere_field(s.mesh, s.degrees), a.seed);
  throw UsageError("--init must be one of monopole, scrambled, perturbed, hemisphere");
}

void write_trace(const ym::FlowTrace& trace, const std::string& path) {
  if (path.empty()) return;
  std::ofstream f(path);
  if (!f) throw UsageError("cannot write " + path);
  ym::write_trace_csv(f, trace);
}

struct Monitors {
  bool energy_monotone = true;
  bool degree_conserved = true;
  bool time_increasing = true;
  bool all() const { return energy_monotone && degree_conserved && time_increasing; }
};

Monitors check_trace(const ym::FlowTrace& t) {
  Monitors m;
  for (std::size_t i = 1; i < t.records.size(); ++i) {
    m.energy_monotone &= t.records[i].energy <= t.records[i - 1].energy;
    m.degree_conserved &= t.records[i].degree == t.records[0].degree;
    m.time_increasing &= t.records[i].time > t.records[i - 1].time;
  }
  return m;
}

Json flow_report(const FlowArgs& a, const FlowSetup& s, const ym::FlowResult& r) {
  const auto split = ym::splitting_readout(r.field);
  const auto mon = check_trace(r.trace);
  Json j{{"rank", r.field.rank()},
         {"level", s.mesh->level()},
         {"degrees", s.degrees},
         {"init", a.init},
         {"eps", a.eps},
         {"seed", a.seed},
         {"step_size", s.config.step_size},
         {"steps_taken", r.trace.steps_taken},
         {"converged", r.trace.converged}};
  j["final"] = to_json(r.trace.records.back());
  j["final_eigenvalues_per_face_summary"] = eigenvalue_summary(ym::face_eigenvalues(r.field), s.mesh->face_areas());
  j["splitting_type"] = split.splitting_type;
  j["integrality_residual"] = split.integrality_residual;
  j["splitting"] = to_json(split);
  j["monitors"] = {{"energy_monotone", mon.energy_monotone},
                   {"degree_conserved", mon.degree_conserved},
                   {"time_increasing", mon.time_increasing},
                   {"unitarity_defect", r.field.max_unitarity_defect()}};
  j["maxprin_verdicts"] = nullptr;
  return j;
}

int cmd_ymflow(const FlowArgs& a, std::ostream& out) {
  const FlowSetup s = prepare(a);
  const ym::GaugeField start = initial_field(a, s);
  const ym::FlowResult r = ym::run_flow(start, s.config);
  write_trace(r.trace, a.trace_path);
  Json j = flow_report(a, s, r);
  const bool ok = r.trace.converged && check_trace(r.trace).all() && ym::splitting_readout(r.field).certified &&
                  r.field.max_unitarity_defect() <= 1e-10;
  j["pass"] = ok;
  emit(j, a.report_path, out);
  return ok ? kSuccess : kCertifiedFailure;
}

int cmd_maxprin(const FlowArgs& a, std::ostream& out) {
  const FlowSetup s = prepare(a);
  if (s.degrees.size() < 2) throw UsageError("maxprin needs rank >= 2");
  for (int level : a.calibration_levels)
    if (level < 0 || level > mesh::SphereMesh::kMaxLevel) throw UsageError("calibration levels must be in [0, 7]");
  const ym::GaugeField start = initial_field(a, s);
  const spectra::PositivityClass cls = ym::classify_curvature(start);

  ym::MaxPrinOptions opts;
  opts.tolerance = ym::calibrate_maxprin_tolerance(a.calibration_levels, a.calibration_steps, a.seed);
  opts.t_check = a.t_check;
  opts.initial_class = cls.kind;

  Json j{{"rank", start.rank()}, {"level", s.mesh->level()}, {"degrees", s.degrees}, {"init", a.init},
         {"eps", a.eps},         {"seed", a.seed},           {"step_size", s.config.step_size}};
  j["initial_class"] = {{"kind", spectra::to_string(cls.kind)}, {"margin", cls.margin}};

  ym::FlowTrace trace;
  if (!a.inject_trace.empty()) {
    std::ifstream f(a.inject_trace);
    if (!f) throw UsageError("cannot read " + a.inject_trace);
    try {
      trace = ym::read_trace_csv(f, start.rank(), s.mesh->mesh_size(), s.config.step_size);
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
    j["trace_source"] = a.inject_trace;
  } else {
    const ym::FlowResult r = ym::run_flow(start, s.config);
    trace = r.trace;
    write_trace(trace, a.trace_path);
    j["converged"] = r.trace.converged;
    j["steps_taken"] = r.trace.steps_taken;
  }
  const ym::MaxPrinVerdict v = ym::maxprin_monitor(trace, opts);
  j["maxprin_verdicts"] = to_json(v, opts.tolerance);
  const bool ok = v.v1_pass && (!v.v2_applicable || v.v2_pass);
  j["pass"] = ok;
  emit(j, a.report_path, out);
  return ok ? kSuccess : kCertifiedFailure;
}

int cmd_cert(const CertArgs& a, std::ostream& out) {
  if (a.splitting.empty()) throw UsageError("--splitting is required");
  if (a.k < 0) throw UsageError("--k must be nonnegative");
  if (static_cast<int>(a.splitting.size()) != a.n) throw UsageError("--splitting must list --n degrees");
  const auto split = pseudoindex::SplittingType::from(a.splitting);
  const auto c = pseudoindex::check_certificate(split, a.k, a.n);
  emit(to_json(c), "", out);
  return c.pass ? kSuccess : kCertifiedFailure;
}

void add_flow_options(CLI::App* sub, FlowArgs& a) {
  sub->add_option("--level", a.level, "icosphere subdivision level (0-7)");
  sub->add_option("--rank", a.rank, "bundle rank (1-8); defaults to the number of degrees");
  sub->add_option("--degrees", a.degrees, "degrees a_1,...,a_r")->delimiter(',')->allow_extra_args(false);
  sub->add_option("--init", a.init, "monopole | scrambled | perturbed | hemisphere");
  sub->add_option("--eps", a.eps, "perturbation size for --init perturbed");
  sub->add_option("--steps", a.steps, "maximum number of flow steps");
  sub->add_option("--tol", a.tol, "gradient-norm tolerance");
  sub->add_option("--step-size", a.step_size, "flow step (0: largest stable step)");
  sub->add_option("--record-every", a.record_every, "record every k-th step in the trace");
  sub->add_option("--backtrack", a.backtrack, "halve rejected steps until the energy decreases");
  sub->add_option("--trace", a.trace_path, "CSV trace output");
  sub->add_option("--report", a.report_path, "JSON report output");
  sub->add_option("--seed", a.seed, "random seed");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Curvature positivity and lattice Yang-Mills flow experiments", "curvflow"};
  app.require_subcommand(1);
  std::string config_path;

  QuadricArgs qa;
  auto* quad = app.add_subcommand("quadric", "2-positivity certification on the hyperquadric");
  quad->add_option("--n", qa.n, "complex dimension (2-16)");
  quad->add_option("--samples", qa.samples, "random pairs in the nonnegativity sweep");
  quad->add_option("--restarts", qa.restarts, "optimizer restarts");
  quad->add_option("--seed", qa.seed, "random seed");
  quad->add_option("--out", qa.out, "JSON report output");

  FlowArgs fa;
  auto* flow = app.add_subcommand("ymflow", "lattice Yang-Mills flow");
  add_flow_options(flow, fa);

  FlowArgs ma;
  auto* maxp = app.add_subcommand("maxprin", "2-positivity maximum-principle monitor");
  add_flow_options(maxp, ma);
  maxp->add_option("--t-check", ma.t_check, "earliest time for the strict-positivity check");
  maxp->add_option("--calibration-levels", ma.calibration_levels, "levels for the tolerance calibration")
      ->delimiter(',');
  maxp->add_option("--calibration-steps", ma.calibration_steps, "steps per calibration run");
  maxp->add_option("--inject-trace", ma.inject_trace, "monitor this trace CSV instead of running the flow");

  CertArgs ca;
  auto* cert = app.add_subcommand("cert", "degree-estimate certificate");
  cert->add_option("--n", ca.n, "dimension (required)");
  cert->add_option("--splitting", ca.splitting, "splitting type a_1,...,a_n")->delimiter(',');
  cert->add_option("--k", ca.k, "vanishing order of df");

  for (auto* sub : {quad, flow, maxp, cert}) sub->add_option("--config", config_path, "JSON config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    if (!config_path.empty()) apply_json_config(*sub, config_path);
    if (sub == quad) return cmd_quadric(qa, out);
    if (sub == flow) return cmd_ymflow(fa, out);
    if (sub == maxp) return cmd_maxprin(ma, out);
    return cmd_cert(ca, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const CurvatureExtractionError& e) {
    err << "{\"error\": \"curvature_extraction\", \"face\": " << e.face() << ", \"angle\": " << e.angle() << "}\n";
    err << e.what() << "\n";
    return kNumericalGuard;
  } catch (const OutOfScopeError& e) {
    err << "out of scope: " << e.what() << "\n";
    return kUsage;
  } catch (const SizeGuardError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const DimensionError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const NotApplicableError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "numerical guard: " << e.what() << "\n";
    return kNumericalGuard;
  }
}

}  // namespace curvflow::cli
