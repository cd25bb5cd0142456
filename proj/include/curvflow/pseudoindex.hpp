#pragma once

#include <optional>
#include <string>
#include <vector>

namespace curvflow::pseudoindex {

/// Splitting type a_1 <= ... <= a_n of a bundle on the projective line.
struct SplittingType {
  std::vector<int> degrees;

  /// Sorts the degrees; a splitting type is an unordered multiset.
  static SplittingType from(std::vector<int> degrees);
  int n() const noexcept { return static_cast<int>(degrees.size()); }
  long long sum() const;
};

enum class Check { kEpsPositivity, kTopDegree, kTotal };
std::string to_string(Check check);

struct DegreeCertificate {
  SplittingType splitting;
  int k = 0;
  int n = 0;
  bool eps_positivity = false;     // a_1 + a_2 >= 1
  bool second_at_least_one = false;  // a_2 >= 1, implied by the above for sorted integers
  bool top_degree = false;         // a_n >= 2 + k
  bool total = false;              // sum a_i >= n
  long long degree_sum = 0;
  bool pass = false;
  std::optional<Check> first_failure;
};

/// Throws OutOfScopeError for n < 3 and DomainError for a length mismatch or
/// negative k.
DegreeCertificate check_certificate(const SplittingType& splitting, int k, int n);

enum class Classification { kProjectiveSpaceOrQuadric, kDelPezzo, kUndetermined };
std::string to_string(Classification c);

Classification classify_by_pseudoindex(int i, int n);

/// n - m + 2; OutOfScopeError unless 1 <= m < n.
int m_positivity_bound(int n, int m);

}  // namespace curvflow::pseudoindex
