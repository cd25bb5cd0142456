#include "cli/reports.hpp"

#include <cmath>

namespace curvflow::cli {

namespace {

// JSON has no NaN; rank-1 traces carry NaN lambda12.
Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace

Json to_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number(v[i]));
  return a;
}

Json to_json(const quadric::HoloTangent& u) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index i = 0; i < u.coords().size(); ++i) {
    re.push_back(u.coords()[i].real());
    im.push_back(u.coords()[i].imag());
  }
  return Json{{"re", re}, {"im", im}};
}

Json to_json(const quadric::CertifyResult& r) {
  return Json{{"min_lambda12", r.min_lambda12},
              {"argmin", to_json(r.argmin)},
              {"spectrum_at_argmin", to_json(r.spectrum)},
              {"converged_restarts", r.converged_restarts},
              {"line_search_failures", r.line_search_failures},
              {"failures", r.failures},
              {"certified", r.certified}};
}

Json to_json(const pseudoindex::DegreeCertificate& c) {
  Json j{{"n", c.n},
         {"k", c.k},
         {"splitting", c.splitting.degrees},
         {"checks",
          {{"eps_positivity", c.eps_positivity},
           {"a2_at_least_one", c.second_at_least_one},
           {"top_degree", c.top_degree},
           {"total", c.total}}},
         {"degree_sum", c.degree_sum},
         {"implied_bound", c.n},
         {"verdict", c.pass ? "pass" : "fail"}};
  j["first_failure"] = c.first_failure ? Json(pseudoindex::to_string(*c.first_failure)) : Json(nullptr);
  return j;
}

Json to_json(const ym::FlowRecord& r) {
  return Json{{"step", r.step},
              {"time", r.time},
              {"energy", r.energy},
              {"grad_norm", r.grad_norm},
              {"min_lambda12", number(r.min_lambda12)},
              {"eig_variance", r.eig_variance},
              {"degree", r.degree}};
}

Json to_json(const ym::SplittingReport& s) {
  return Json{{"splitting_type", s.splitting_type},
              {"integrality_residual", s.integrality_residual},
              {"max_std", s.max_std},
              {"mesh_size", s.mesh_size},
              {"certified", s.certified}};
}

Json to_json(const ym::MaxPrinVerdict& v, const ym::MaxPrinTolerance& tol) {
  Json j{{"tolerance", {{"c", tol.c}, {"c_prime", tol.c_prime}, {"roundoff", tol.roundoff}, {"tol_mp", v.tol_mp}}},
         {"verdict1", {{"pass", v.v1_pass}, {"initial_min_lambda12", number(v.initial_min_lambda12)},
                       {"worst_drop", number(v.worst_drop)}}}};
  if (v.v2_applicable) {
    j["verdict2"] = {{"applicable", true},
                     {"pass", v.v2_pass},
                     {"t_check_time", v.t_check_time},
                     {"min_lambda12_after_check", number(v.min_lambda12_after_check)}};
  } else {
    j["verdict2"] = {{"applicable", false}};
  }
  return j;
}

Json eigenvalue_summary(const Eigen::MatrixXd& eig, const std::vector<double>& areas) {
  const Eigen::Index r = eig.cols();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(r), sd = Eigen::VectorXd::Zero(r);
  double total = 0.0;
  for (Eigen::Index f = 0; f < eig.rows(); ++f) {
    mean += areas[f] * eig.row(f).transpose();
    total += areas[f];
  }
  mean /= total;
  for (Eigen::Index f = 0; f < eig.rows(); ++f) sd += areas[f] * (eig.row(f).transpose() - mean).cwiseAbs2();
  sd = (sd / total).cwiseSqrt();
  return Json{{"mean", to_json(mean)},
              {"std", to_json(sd)},
              {"min", to_json(eig.colwise().minCoeff().transpose())},
              {"max", to_json(eig.colwise().maxCoeff().transpose())}};
}

}  // namespace curvflow::cli
