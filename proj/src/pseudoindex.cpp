#include "curvflow/pseudoindex.hpp"

#include <algorithm>
#include <numeric>

#include "curvflow/error.hpp"

namespace curvflow::pseudoindex {

SplittingType SplittingType::from(std::vector<int> degrees) {
  std::sort(degrees.begin(), degrees.end());
  return SplittingType{std::move(degrees)};
}

long long SplittingType::sum() const { return std::accumulate(degrees.begin(), degrees.end(), 0LL); }

std::string to_string(Check check) {
  switch (check) {
    case Check::kEpsPositivity: return "eps_positivity";
    case Check::kTopDegree: return "top_degree";
    case Check::kTotal: return "total";
  }
  return "unknown";
}

DegreeCertificate check_certificate(const SplittingType& splitting, int k, int n) {
  if (n < 3) throw OutOfScopeError("the degree chain needs n >= 3");
  if (splitting.n() != n) throw DomainError("splitting type must have n entries");
  if (k < 0) throw DomainError("vanishing order k must be nonnegative");
  if (!std::is_sorted(splitting.degrees.begin(), splitting.degrees.end()))
    throw DomainError("splitting type must be sorted");

  DegreeCertificate c;
  c.splitting = splitting;
  c.k = k;
  c.n = n;
  const auto& a = splitting.degrees;
  c.eps_positivity = static_cast<long long>(a[0]) + a[1] >= 1;
  c.second_at_least_one = a[1] >= 1;
  c.top_degree = static_cast<long long>(a[n - 1]) >= 2LL + k;
  c.degree_sum = splitting.sum();
  c.total = c.degree_sum >= n;
  if (!c.eps_positivity)
    c.first_failure = Check::kEpsPositivity;
  else if (!c.top_degree)
    c.first_failure = Check::kTopDegree;
  else if (!c.total)
    c.first_failure = Check::kTotal;
  c.pass = !c.first_failure.has_value();
  return c;
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::kProjectiveSpaceOrQuadric: return "PROJECTIVE_SPACE_OR_QUADRIC";
    case Classification::kDelPezzo: return "DEL_PEZZO";
    case Classification::kUndetermined: return "UNDETERMINED";
  }
  return "UNDETERMINED";
}

Classification classify_by_pseudoindex(int i, int n) {
  if (n < 1 || i < 1) throw DomainError("need n >= 1 and i >= 1");
  if (n == 2) return Classification::kDelPezzo;
  if (n >= 3 && i >= n) return Classification::kProjectiveSpaceOrQuadric;
  return Classification::kUndetermined;
}

int m_positivity_bound(int n, int m) {
  if (m < 1 || m >= n) throw OutOfScopeError("m-positivity bound needs 1 <= m < n");
  return n - m + 2;
}

}  // namespace curvflow::pseudoindex
