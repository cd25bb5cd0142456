#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "curvflow/kernels.hpp"
#include "curvflow/ym_lattice.hpp"
#include "rank_dispatch.hpp"
#include "ym_engine.hpp"

namespace curvflow::ym {

DegreeReadout degree_readout(const GaugeField& field) {
  return dispatch_rank(field.rank(), [&]<int R>() {
    const auto fl = engine::compute_logs<R>(field.mesh(), field.raw().data());
    fl.require();
    double sum = 0.0;
    for (const auto& lg : fl.logs) sum += lg.angles.sum();
    const double raw = sum / (2.0 * std::numbers::pi);
    const double rounded = std::round(raw);
    const DegreeReadout out{static_cast<int>(rounded), std::abs(raw - rounded)};
    if (out.residual >= 0.01)
      throw QuantizationViolationError("total degree " + std::to_string(raw) + " is not within 0.01 of an integer");
    return out;
  });
}

int total_degree(const GaugeField& field) { return degree_readout(field).degree; }

FlowRecord field_record(const GaugeField& field) {
  return dispatch_rank(field.rank(), [&]<int R>() {
    const auto& m = field.mesh();
    const auto fl = engine::compute_logs<R>(m, field.raw().data());
    fl.require();
    FlowRecord rec;
    rec.energy = engine::energy<R>(m, fl);
    rec.grad_norm = engine::weighted_norm<R>(m, engine::flow_gradient<R>(m, field.raw().data(), fl));
    engine::fill_record<R>(m, fl, rec);
    return rec;
  });
}

SplittingReport splitting_readout(const GaugeField& field) {
  const auto& m = field.mesh();
  const Eigen::MatrixXd eig = face_eigenvalues(field);
  const int r = field.rank();
  const auto& areas = m.face_areas();
  double total = 0.0;
  for (double a : areas) total += a;

  SplittingReport rep;
  rep.mean_eigenvalues = Eigen::VectorXd::Zero(r);
  rep.std_eigenvalues = Eigen::VectorXd::Zero(r);
  for (std::size_t f = 0; f < areas.size(); ++f) rep.mean_eigenvalues += areas[f] * eig.row(f).transpose();
  rep.mean_eigenvalues /= total;
  for (std::size_t f = 0; f < areas.size(); ++f)
    rep.std_eigenvalues += areas[f] * (eig.row(f).transpose() - rep.mean_eigenvalues).cwiseAbs2();
  rep.std_eigenvalues = (rep.std_eigenvalues / total).cwiseSqrt();

  // Chern-Weil on the unit sphere: a_j = lambda_j * 4 pi / 2 pi.
  for (int j = 0; j < r; ++j) {
    const double a = 2.0 * rep.mean_eigenvalues[j];
    const double rounded = std::round(a);
    rep.splitting_type.push_back(static_cast<int>(rounded));
    rep.integrality_residual = std::max(rep.integrality_residual, std::abs(a - rounded));
  }
  rep.max_std = rep.std_eigenvalues.maxCoeff();
  rep.mesh_size = m.mesh_size();
  rep.certified = rep.integrality_residual < 0.05 && rep.max_std < 5.0 * rep.mesh_size;
  return rep;
}

spectra::PositivityClass classify_curvature(const GaugeField& field, double epsilon) {
  if (field.rank() < 2) throw NotApplicableError("2-positivity needs rank >= 2");
  const Eigen::MatrixXd eig = face_eigenvalues(field);
  std::vector<double> l12(eig.rows());
  for (Eigen::Index f = 0; f < eig.rows(); ++f) l12[f] = eig(f, 0) + eig(f, 1);
  return spectra::classify_lambda12(l12, epsilon);
}

// ---- maximum principle -----------------------------------------------------

double MaxPrinTolerance::value(double h, double step, double scale) const {
  return c * h * h + c_prime * step + roundoff * std::max(1.0, std::abs(scale));
}

MaxPrinTolerance calibrate_maxprin_tolerance(const std::vector<int>& levels, int steps, std::uint64_t seed) {
  MaxPrinTolerance tol;
  const int degrees[] = {1, 1};
  for (int level : levels) {
    auto mesh = std::make_shared<const mesh::SphereMesh>(mesh::build_icosphere(level));
    const GaugeField start = gauge_scramble(monopole_field(mesh, degrees), seed + static_cast<std::uint64_t>(level));
    FlowConfig cfg;
    cfg.step_size = stable_step_size(*mesh);
    cfg.max_steps = steps;
    cfg.grad_tol = std::numeric_limits<double>::min();  // force every step
    const FlowTrace trace = run_flow(start, cfg).trace;
    double drift = 0.0;
    for (const auto& rec : trace.records)
      drift = std::max(drift, trace.records.front().min_lambda12 - rec.min_lambda12);
    const double h = mesh->mesh_size();
    tol.c = std::max(tol.c, 0.5 * drift / (h * h));
    tol.c_prime = std::max(tol.c_prime, 0.5 * drift / cfg.step_size);
  }
  return tol;
}

MaxPrinVerdict maxprin_monitor(const FlowTrace& trace, const MaxPrinOptions& options) {
  if (trace.rank < 2) throw NotApplicableError("maximum-principle monitor needs rank >= 2");
  if (trace.records.empty()) throw EmptyInputError("trace has no records");
  MaxPrinVerdict v;
  v.initial_min_lambda12 = trace.records.front().min_lambda12;
  for (const auto& rec : trace.records)
    v.worst_drop = std::max(v.worst_drop, v.initial_min_lambda12 - rec.min_lambda12);
  v.tol_mp = options.tolerance.value(trace.mesh_size, trace.step_size, v.initial_min_lambda12);
  v.v1_pass = v.worst_drop <= v.tol_mp;

  v.v2_applicable = options.initial_class == spectra::PositivityKind::kTwoQuasiPositive;
  if (v.v2_applicable) {
    v.v2_pass = false;
    v.min_lambda12_after_check = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < trace.records.size(); ++i) {
      if (trace.records[i].time < options.t_check) continue;
      v.t_check_time = trace.records[i].time;
      double lo = std::numeric_limits<double>::infinity();
      for (std::size_t j = i; j < trace.records.size(); ++j) lo = std::min(lo, trace.records[j].min_lambda12);
      v.min_lambda12_after_check = lo;
      v.v2_pass = lo > spectra::kZeroTolerance;
      break;
    }
  }
  return v;
}

// ---- heat modes ------------------------------------------------------------

double real_spherical_harmonic(int l, int m, const Eigen::Vector3d& x) {
  if (l < 0 || std::abs(m) > l) throw DomainError("need 0 <= |m| <= l");
  const Eigen::Vector3d u = x.normalized();
  const double theta = std::acos(std::clamp(u.z(), -1.0, 1.0));
  const double phi = std::atan2(u.y(), u.x());
  const unsigned am = static_cast<unsigned>(std::abs(m));
  const double p = std::sph_legendre(static_cast<unsigned>(l), am, theta);
  if (m == 0) return p;
  return std::numbers::sqrt2 * p * (m > 0 ? std::cos(m * phi) : std::sin(am * phi));
}

std::vector<ModeAmplitude> heat_mode_projection(const GaugeField& field, int l_max) {
  if (field.rank() != 1) throw NotApplicableError("heat-mode projection needs rank 1");
  if (l_max < 0) throw DomainError("l_max must be nonnegative");
  const auto& m = field.mesh();
  const Eigen::MatrixXd eig = face_eigenvalues(field);
  const std::size_t nf = m.num_faces();
  // area_f * H_f is the face angle itself.
  std::vector<double> flux(nf), y(nf);
  for (std::size_t f = 0; f < nf; ++f) flux[f] = eig(f, 0) * m.face_areas()[f];
  std::vector<ModeAmplitude> out;
  for (int l = 0; l <= l_max; ++l) {
    for (int mm = -l; mm <= l; ++mm) {
      for (std::size_t f = 0; f < nf; ++f) y[f] = real_spherical_harmonic(l, mm, m.face_center(f));
      out.push_back({l, mm, kernels::weighted_dot(flux, y)});
    }
  }
  return out;
}

double mode_power(const std::vector<ModeAmplitude>& modes, int l) {
  double s = 0.0;
  for (const auto& mode : modes)
    if (mode.l == l) s += mode.amplitude * mode.amplitude;
  return std::sqrt(s);
}

// ---- trace CSV -------------------------------------------------------------

void write_trace_csv(std::ostream& out, const FlowTrace& trace) {
  out << kTraceHeader << '\n';
  char line[256];
  for (const auto& r : trace.records) {
    std::snprintf(line, sizeof line, "%d,%.17e,%.17e,%.17e,%.17e,%.17e,%d\n", r.step, r.time, r.energy, r.grad_norm,
                  r.min_lambda12, r.eig_variance, r.degree);
    out << line;
  }
}

FlowTrace read_trace_csv(std::istream& in, int rank, double mesh_size, double step_size) {
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) throw DomainError("trace CSV header mismatch");
  FlowTrace trace;
  trace.rank = rank;
  trace.mesh_size = mesh_size;
  trace.step_size = step_size;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() != 7) throw DomainError("trace CSV row " + std::to_string(row) + " needs 7 columns");
    try {
      FlowRecord r;
      r.step = std::stoi(cells[0]);
      r.time = std::stod(cells[1]);
      r.energy = std::stod(cells[2]);
      r.grad_norm = std::stod(cells[3]);
      r.min_lambda12 = std::strtod(cells[4].c_str(), nullptr);
      r.eig_variance = std::stod(cells[5]);
      r.degree = std::stoi(cells[6]);
      trace.records.push_back(r);
    } catch (const std::logic_error&) {
      throw DomainError("trace CSV row " + std::to_string(row) + " is malformed");
    }
  }
  if (!trace.records.empty()) trace.steps_taken = trace.records.back().step;
  return trace;
}

}  // namespace curvflow::ym
