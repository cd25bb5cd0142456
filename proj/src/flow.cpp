#include <cmath>
#include <limits>

#include "curvflow/ym_lattice.hpp"
#include "rank_dispatch.hpp"
#include "ym_engine.hpp"

namespace curvflow::ym {

namespace {

constexpr int kMaxHalvings = 30;

template <int R>
struct State {
  std::vector<Complex> links;
  engine::FaceLogs<R> logs;
  double energy = 0.0;
  std::vector<Complex> grad;
  double grad_norm = 0.0;
};

template <int R>
State<R> make_state(const mesh::SphereMesh& m, std::vector<Complex> links) {
  State<R> s;
  s.links = std::move(links);
  s.logs = engine::compute_logs<R>(m, s.links.data());
  s.logs.require();
  s.energy = engine::energy<R>(m, s.logs);
  s.grad = engine::flow_gradient<R>(m, s.links.data(), s.logs);
  s.grad_norm = engine::weighted_norm<R>(m, s.grad);
  return s;
}

template <int R>
FlowRecord record_of(const mesh::SphereMesh& m, const State<R>& s, int step, double time) {
  FlowRecord rec;
  rec.step = step;
  rec.time = time;
  rec.energy = s.energy;
  rec.grad_norm = s.grad_norm;
  engine::fill_record<R>(m, s.logs, rec);
  return rec;
}

struct Accepted {
  double tau = 0.0;
  int halvings = 0;
};

// Advances `s` in place. Throws StepFailureError when every trial is rejected.
template <int R>
Accepted advance(const mesh::SphereMesh& m, State<R>& s, const FlowConfig& config) {
  double tau = config.step_size;
  const std::size_t ne = m.num_edges();
  for (int halvings = 0; halvings <= kMaxHalvings; ++halvings, tau *= 0.5) {
    std::vector<Complex> trial = engine::descend<R>(ne, s.links.data(), s.grad, tau);
    auto logs = engine::compute_logs<R>(m, trial.data());
    if (!logs.ok) {
      if (!config.energy_backtrack) logs.require();
      continue;
    }
    const double e = engine::energy<R>(m, logs);
    if (config.energy_backtrack && !(e <= s.energy)) continue;
    s.links = std::move(trial);
    s.logs = std::move(logs);
    s.energy = e;
    s.grad = engine::flow_gradient<R>(m, s.links.data(), s.logs);
    s.grad_norm = engine::weighted_norm<R>(m, s.grad);
    return {tau, halvings};
  }
  throw StepFailureError("no acceptable step after " + std::to_string(kMaxHalvings) + " halvings");
}

GaugeField with_links(const GaugeField& like, const std::vector<Complex>& links) {
  GaugeField out = like;
  auto dst = out.raw_mutable();
  std::copy(links.begin(), links.end(), dst.begin());
  return out;
}

}  // namespace

void FlowConfig::validate() const {
  if (!(step_size > 0.0) || !std::isfinite(step_size)) throw DomainError("step_size must be positive");
  if (!(grad_tol > 0.0)) throw DomainError("grad_tol must be positive");
  if (max_steps < 0) throw DomainError("max_steps must be nonnegative");
  if (record_every < 1) throw DomainError("record_every must be at least 1");
}

double stable_step_size(const mesh::SphereMesh& m) {
  const auto& w = m.hodge_weights();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t f = 0; f < m.num_faces(); ++f) {
    double conductance = 0.0;
    for (const auto& se : m.face_boundaries()[f]) conductance += 1.0 / w[se.edge];
    best = std::min(best, m.face_areas()[f] / conductance);
  }
  return 0.9 * best;
}

StepOutcome flow_step(const GaugeField& field, const FlowConfig& config) {
  config.validate();
  return dispatch_rank(field.rank(), [&]<int R>() {
    const auto& m = field.mesh();
    State<R> s = make_state<R>(m, std::vector<Complex>(field.raw().begin(), field.raw().end()));
    const Accepted acc = advance<R>(m, s, config);
    return StepOutcome{with_links(field, s.links), record_of<R>(m, s, 1, acc.tau), acc.tau, acc.halvings};
  });
}

FlowResult run_flow(const GaugeField& field, const FlowConfig& config) {
  config.validate();
  return dispatch_rank(field.rank(), [&]<int R>() {
    const auto& m = field.mesh();
    FlowTrace trace;
    trace.rank = R;
    trace.level = m.level();
    trace.mesh_size = m.mesh_size();
    trace.step_size = config.step_size;

    State<R> s = make_state<R>(m, std::vector<Complex>(field.raw().begin(), field.raw().end()));
    double time = 0.0;
    int step = 0;
    trace.records.push_back(record_of<R>(m, s, 0, 0.0));
    while (s.grad_norm >= config.grad_tol && step < config.max_steps) {
      const Accepted acc = advance<R>(m, s, config);
      ++step;
      time += acc.tau;
      const bool converged = s.grad_norm < config.grad_tol;
      if (step % config.record_every == 0 || converged || step == config.max_steps)
        trace.records.push_back(record_of<R>(m, s, step, time));
    }
    trace.converged = s.grad_norm < config.grad_tol;
    trace.steps_taken = step;
    return FlowResult{with_links(field, s.links), std::move(trace)};
  });
}

}  // namespace curvflow::ym
