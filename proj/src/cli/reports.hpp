#pragma once

#include "curvflow/pseudoindex.hpp"
#include "curvflow/quadric.hpp"
#include "curvflow/ym_lattice.hpp"
#include "json.hpp"

namespace curvflow::cli {

using Json = nlohmann::ordered_json;

Json to_json(const Eigen::VectorXd& v);
Json to_json(const quadric::HoloTangent& u);
Json to_json(const quadric::CertifyResult& r);
Json to_json(const pseudoindex::DegreeCertificate& c);
Json to_json(const ym::FlowRecord& r);
Json to_json(const ym::SplittingReport& s);
Json to_json(const ym::MaxPrinVerdict& v, const ym::MaxPrinTolerance& tol);

/// Per-slot mean, standard deviation, min and max of the face eigenvalues.
Json eigenvalue_summary(const Eigen::MatrixXd& face_eigs, const std::vector<double>& areas);

}  // namespace curvflow::cli
