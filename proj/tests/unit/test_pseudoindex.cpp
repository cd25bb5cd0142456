#include <functional>

#include "curvflow/error.hpp"
#include "curvflow/pseudoindex.hpp"
#include "doctest.h"

using namespace curvflow;
using namespace curvflow::pseudoindex;

namespace {

// All sorted tuples of length n with entries in [lo, hi].
void for_each_sorted(int n, int lo, int hi, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> a(n, lo);
  std::function<void(int, int)> rec = [&](int pos, int from) {
    if (pos == n) {
      fn(a);
      return;
    }
    for (int v = from; v <= hi; ++v) {
      a[pos] = v;
      rec(pos + 1, v);
    }
  };
  rec(0, lo);
}

}  // namespace

TEST_CASE("certificate examples") {
  auto c = check_certificate(SplittingType::from({-1, 2, 2}), 0, 3);
  CHECK(c.pass);
  CHECK(c.degree_sum == 3);
  CHECK(c.second_at_least_one);

  c = check_certificate(SplittingType::from({0, 1, 1, 2}), 0, 4);
  CHECK(c.pass);
  CHECK(c.degree_sum == 4);

  c = check_certificate(SplittingType::from({0, 0, 2}), 0, 3);
  CHECK_FALSE(c.pass);
  REQUIRE(c.first_failure.has_value());
  CHECK(*c.first_failure == Check::kEpsPositivity);
  CHECK(to_string(*c.first_failure) == "eps_positivity");

  c = check_certificate(SplittingType::from({1, 1, 2}), 1, 3);
  CHECK_FALSE(c.pass);
  CHECK(*c.first_failure == Check::kTopDegree);
}

TEST_CASE("certificate preconditions") {
  CHECK_THROWS_AS(check_certificate(SplittingType::from({1, 1}), 0, 2), OutOfScopeError);
  CHECK_THROWS_AS(check_certificate(SplittingType::from({1, 1, 2}), 0, 4), DomainError);
  CHECK_THROWS_AS(check_certificate(SplittingType::from({1, 1, 2}), -1, 3), DomainError);
  CHECK(SplittingType::from({2, -1, 0}).degrees == std::vector<int>{-1, 0, 2});
}

TEST_CASE("exhaustive soundness and tightness of the chain") {
  for (int n = 3; n <= 5; ++n) {
    bool tight = false;
    long long checked = 0;
    for (int k = 0; k <= 2; ++k)
      for_each_sorted(n, -3, 6, [&](const std::vector<int>& a) {
        const auto c = check_certificate(SplittingType{a}, k, n);
        ++checked;
        CHECK(c.pass == (c.eps_positivity && c.top_degree && c.total));
        if (c.eps_positivity) CHECK(c.second_at_least_one);
        if (c.eps_positivity && c.top_degree) CHECK(c.degree_sum >= n);
        if (c.pass && c.degree_sum == n) tight = true;
      });
    CHECK(tight);
    CHECK(checked > 0);
  }
}

TEST_CASE("classification lookup") {
  CHECK(classify_by_pseudoindex(4, 4) == Classification::kProjectiveSpaceOrQuadric);
  CHECK(classify_by_pseudoindex(2, 2) == Classification::kDelPezzo);
  CHECK(classify_by_pseudoindex(2, 5) == Classification::kUndetermined);
  CHECK(to_string(Classification::kDelPezzo) == "DEL_PEZZO");
}

TEST_CASE("m-positivity bound") {
  CHECK(m_positivity_bound(5, 3) == 4);
  CHECK(m_positivity_bound(3, 2) == 3);
  CHECK(m_positivity_bound(4, 1) == 5);
  for (int n = 3; n <= 20; ++n) {
    CHECK(m_positivity_bound(n, 2) == n);
    CHECK(classify_by_pseudoindex(m_positivity_bound(n, 2), n) == Classification::kProjectiveSpaceOrQuadric);
  }
  CHECK_THROWS_AS(m_positivity_bound(3, 3), OutOfScopeError);
  CHECK_THROWS_AS(m_positivity_bound(3, 0), OutOfScopeError);
}
