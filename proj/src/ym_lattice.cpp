#include "curvflow/ym_lattice.hpp"

#include "rank_dispatch.hpp"
#include "ym_engine.hpp"

namespace curvflow::ym {

Eigen::MatrixXcd LinkBlocks::block(std::size_t e) const {
  if (e >= size()) throw DomainError("edge index out of range");
  return Eigen::Map<const Eigen::MatrixXcd>(data.data() + e * rank * rank, rank, rank);
}

Eigen::MatrixXcd holonomy(const GaugeField& field, std::size_t face) {
  if (face >= field.mesh().num_faces()) throw DomainError("face index out of range");
  return dispatch_rank(field.rank(), [&]<int R>() -> Eigen::MatrixXcd {
    return engine::face_holonomy<R>(field.mesh(), field.raw().data(), face);
  });
}

PlaquetteCurvature curvature_field(const GaugeField& field) {
  return dispatch_rank(field.rank(), [&]<int R>() {
    const auto& m = field.mesh();
    const auto fl = engine::compute_logs<R>(m, field.raw().data());
    fl.require();
    PlaquetteCurvature out;
    out.curvature.reserve(m.num_faces());
    out.holonomy.reserve(m.num_faces());
    for (std::size_t f = 0; f < m.num_faces(); ++f) {
      const auto& lg = fl.logs[f];
      const Eigen::MatrixXcd h =
          lg.vecs * (lg.angles / m.face_areas()[f]).template cast<Complex>().asDiagonal() * lg.vecs.adjoint();
      out.curvature.emplace_back(h);
      out.holonomy.emplace_back(engine::face_holonomy<R>(m, field.raw().data(), f));
    }
    return out;
  });
}

Eigen::MatrixXd face_eigenvalues(const GaugeField& field) {
  return dispatch_rank(field.rank(), [&]<int R>() {
    const auto& m = field.mesh();
    const auto fl = engine::compute_logs<R>(m, field.raw().data());
    fl.require();
    Eigen::MatrixXd out(m.num_faces(), R);
    for (std::size_t f = 0; f < m.num_faces(); ++f) out.row(f) = fl.logs[f].angles.transpose() / m.face_areas()[f];
    return out;
  });
}

double ym_energy(const GaugeField& field) {
  return dispatch_rank(field.rank(), [&]<int R>() {
    const auto fl = engine::compute_logs<R>(field.mesh(), field.raw().data());
    fl.require();
    return engine::energy<R>(field.mesh(), fl);
  });
}

LinkBlocks energy_differential(const GaugeField& field) {
  return dispatch_rank(field.rank(), [&]<int R>() {
    const auto fl = engine::compute_logs<R>(field.mesh(), field.raw().data());
    fl.require();
    return LinkBlocks{R, engine::differential<R>(field.mesh(), field.raw().data(), fl)};
  });
}

LinkBlocks ym_gradient(const GaugeField& field) {
  return dispatch_rank(field.rank(), [&]<int R>() {
    const auto fl = engine::compute_logs<R>(field.mesh(), field.raw().data());
    fl.require();
    return LinkBlocks{R, engine::flow_gradient<R>(field.mesh(), field.raw().data(), fl)};
  });
}

double gradient_norm(const GaugeField& field, const LinkBlocks& gradient) {
  if (gradient.rank != field.rank() || gradient.size() != field.num_links())
    throw DimensionError("gradient does not match the field");
  return dispatch_rank(field.rank(),
                       [&]<int R>() { return engine::weighted_norm<R>(field.mesh(), gradient.data); });
}

namespace {

template <class F>
Eigen::MatrixXcd with_log(const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& x, F&& op) {
  if (u.rows() != u.cols() || x.rows() != u.rows() || x.cols() != u.cols())
    throw DimensionError("square matrices of equal size expected");
  return dispatch_rank(static_cast<int>(u.rows()), [&]<int R>() -> Eigen::MatrixXcd {
    const auto lg = detail::unitary_log<R>(detail::Mat<R>(u), kBranchMargin);
    if (!lg.ok) throw CurvatureExtractionError(0, lg.worst_angle);
    return op.template operator()<R>(lg, detail::Mat<R>(x));
  });
}

}  // namespace

Eigen::MatrixXcd log_frechet(const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& e) {
  return with_log(u, e, []<int R>(const auto& lg, const detail::Mat<R>& x) { return detail::log_frechet<R>(lg, x); });
}

Eigen::MatrixXcd log_frechet_adjoint(const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& g) {
  return with_log(u, g,
                  []<int R>(const auto& lg, const detail::Mat<R>& x) { return detail::log_frechet_adjoint<R>(lg, x); });
}

}  // namespace curvflow::ym
