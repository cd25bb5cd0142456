#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "curvflow/gauge_field.hpp"
#include "curvflow/spectra.hpp"

namespace curvflow::ym {

/// Holonomy eigen-angles must stay this far (radians) from the branch cut.
inline constexpr double kBranchMargin = 0.1;

/// Per-edge r x r blocks (column-major), e.g. gradients or directions.
struct LinkBlocks {
  int rank = 0;
  std::vector<Complex> data;

  std::size_t size() const noexcept { return rank == 0 ? 0 : data.size() / (rank * rank); }
  Eigen::MatrixXcd block(std::size_t e) const;
};

// ---- curvature and energy ------------------------------------------------

/// Ordered product T_2 T_1 T_0 of the boundary transports of a face,
/// starting at its least-index vertex.
Eigen::MatrixXcd holonomy(const GaugeField& field, std::size_t face);

struct PlaquetteCurvature {
  std::vector<spectra::HermitianMatrix> curvature;  // H_f = log(Hol_f) / (i area_f)
  std::vector<Eigen::MatrixXcd> holonomy;
};

/// Throws CurvatureExtractionError naming the first face whose holonomy has
/// an eigen-angle within kBranchMargin of pi.
PlaquetteCurvature curvature_field(const GaugeField& field);

/// Ascending eigenvalues of every H_f, one row per face.
Eigen::MatrixXd face_eigenvalues(const GaugeField& field);

/// sum_f area_f ||H_f||_F^2.
double ym_energy(const GaugeField& field);

// ---- gradients -------------------------------------------------------------

/// Anti-Hermitian D_e with d/ds E(exp(s xi) U) at s = 0 equal to
/// sum_e Re tr(D_e^H xi_e). Uses the adjoint Frechet derivative of the log.
LinkBlocks energy_differential(const GaugeField& field);

/// Flow velocity: the gradient of E/2 for the edge metric
/// <xi, eta> = sum_e w_e Re tr(xi_e^H eta_e), w_e the dual/primal length
/// ratio. G_e = D_e / (2 w_e). Rank one reduces to the finite-volume heat
/// equation for the curvature.
LinkBlocks ym_gradient(const GaugeField& field);

/// sqrt(sum_e w_e ||G_e||_F^2).
double gradient_norm(const GaugeField& field, const LinkBlocks& gradient);

/// Frechet derivative of the principal log at u in direction e, and its
/// adjoint for Re tr(a^H b). Exposed for testing.
Eigen::MatrixXcd log_frechet(const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& e);
Eigen::MatrixXcd log_frechet_adjoint(const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& g);

// ---- flow ------------------------------------------------------------------

struct FlowConfig {
  double step_size = 0.01;
  int max_steps = 1000;
  double grad_tol = 1e-6;
  bool energy_backtrack = true;
  std::uint64_t seed = 0;
  int record_every = 1;  // trace decimation; first and last steps always kept

  void validate() const;
};

/// Largest step for which the rank-one linearization is monotone:
/// 0.9 * min_f area_f / sum over the face's edges of 1/w_e, minimized over faces.
double stable_step_size(const mesh::SphereMesh& mesh);

struct FlowRecord {
  int step = 0;
  double time = 0.0;
  double energy = 0.0;
  double grad_norm = 0.0;
  double min_lambda12 = 0.0;  // NaN for rank 1
  double eig_variance = 0.0;  // sum over eigenvalue slots of the area-weighted cross-face variance
  int degree = 0;
};

struct FlowTrace {
  std::vector<FlowRecord> records;
  bool converged = false;
  int rank = 0;
  int level = 0;
  double mesh_size = 0.0;
  double step_size = 0.0;
  int steps_taken = 0;
};

struct StepOutcome {
  GaugeField field;
  FlowRecord record;  // describes the new field; step = 1, time = accepted step
  double accepted_step = 0.0;
  int halvings = 0;
};

/// One explicit descent step link <- exp(-tau G_e) link with re-unitarization.
/// With backtracking, tau halves (at most 30 times) until the energy does not
/// increase; a trial that trips the branch guard counts as rejected.
StepOutcome flow_step(const GaugeField& field, const FlowConfig& config);

struct FlowResult {
  GaugeField field;
  FlowTrace trace;
};

/// Steps until grad_norm < grad_tol or max_steps. Non-convergence is reported
/// in the trace, step failures and guard trips throw.
FlowResult run_flow(const GaugeField& field, const FlowConfig& config);

// ---- diagnostics -----------------------------------------------------------

struct DegreeReadout {
  int degree = 0;
  double residual = 0.0;  // distance of the raw sum to the nearest integer
};

/// sum_f sum_j theta_{f,j} / 2 pi rounded; throws QuantizationViolationError
/// when the residual reaches 0.01.
DegreeReadout degree_readout(const GaugeField& field);
int total_degree(const GaugeField& field);

/// Per-face diagnostics of a field, as recorded in the trace.
FlowRecord field_record(const GaugeField& field);

struct SplittingReport {
  Eigen::VectorXd mean_eigenvalues;  // area-weighted, per eigenvalue slot
  Eigen::VectorXd std_eigenvalues;   // area-weighted cross-face standard deviation
  std::vector<int> splitting_type;   // round(2 * mean)
  double integrality_residual = 0.0;
  double max_std = 0.0;
  double mesh_size = 0.0;
  bool certified = false;  // residual < 0.05 and max_std < 5 h
};

SplittingReport splitting_readout(const GaugeField& field);

/// Positivity class of the field of H_f (lambda12 per face). Rank >= 2.
spectra::PositivityClass classify_curvature(const GaugeField& field, double epsilon = 0.0);

struct MaxPrinTolerance {
  double c = 0.0;
  double c_prime = 0.0;
  double roundoff = 1e-12;  // relative floor, scaled by max(1, |min_lambda12(0)|)

  double value(double h, double step, double scale) const;
};

/// Runs gauge-scrambled (1, 1) monopoles at the given levels for `steps`
/// steps each and sizes c, c' so that c h^2 + c' tau covers every observed
/// drop of min_lambda12 (half from each term).
MaxPrinTolerance calibrate_maxprin_tolerance(const std::vector<int>& levels, int steps, std::uint64_t seed);

struct MaxPrinOptions {
  MaxPrinTolerance tolerance;
  double t_check = 0.1;
  /// Class of the initial field; verdict (2) applies to 2-quasi-positive starts.
  std::optional<spectra::PositivityKind> initial_class;
};

struct MaxPrinVerdict {
  bool v1_pass = false;
  double initial_min_lambda12 = 0.0;
  double worst_drop = 0.0;  // max over records of min_lambda12(0) - min_lambda12(t)
  double tol_mp = 0.0;
  bool v2_applicable = false;
  bool v2_pass = true;
  double t_check_time = 0.0;             // time of the first record with t >= t_check
  double min_lambda12_after_check = 0.0;  // over records from t_check_time on
};

/// Throws NotApplicableError for rank < 2 and EmptyInputError for an empty trace.
MaxPrinVerdict maxprin_monitor(const FlowTrace& trace, const MaxPrinOptions& options);

struct ModeAmplitude {
  int l = 0;
  int m = 0;
  double amplitude = 0.0;
};

/// Real orthonormal spherical harmonic Y_lm at a unit vector (m < 0: sine type).
double real_spherical_harmonic(int l, int m, const Eigen::Vector3d& x);

/// Area-weighted quadrature of the rank-one curvature against Y_lm at face
/// centroids, l = 0..l_max. Real harmonics make every amplitude real.
std::vector<ModeAmplitude> heat_mode_projection(const GaugeField& field, int l_max);

/// sqrt(sum_m amplitude^2) for a given l.
double mode_power(const std::vector<ModeAmplitude>& modes, int l);

// ---- trace I/O -------------------------------------------------------------

inline constexpr const char* kTraceHeader = "step,time,energy,grad_norm,min_lambda12,eig_variance,degree";

void write_trace_csv(std::ostream& out, const FlowTrace& trace);
/// Parses a trace written by write_trace_csv; rank and mesh size are not part
/// of the CSV and must be supplied.
FlowTrace read_trace_csv(std::istream& in, int rank, double mesh_size, double step_size);

}  // namespace curvflow::ym
