#include <cmath>
#include <vector>

#include "doctest.h"
#include "mmn/errors.hpp"
#include "mmn/separable_search.hpp"

using namespace mmn;

TEST_CASE("separable search finds a known interior optimum") {
  // f = -sum (theta_i - c_i)^2 with c on the simplex: maximum 0 at c.
  const std::vector<double> c{0.2, 0.3, 0.5};
  SeparableObjective obj;
  obj.k = 3;
  obj.term = [&](std::size_t i, double t) { return -(t - c[i]) * (t - c[i]); };
  SearchSettings s;
  s.threads = 1;
  const auto r = maximize_separable(obj, 0.01, s);
  CHECK(r.value == doctest::Approx(0.0).epsilon(1e-12));
  for (int i = 0; i < 3; ++i) CHECK(r.argmax[i] == doctest::Approx(c[i]).epsilon(1e-5));
}

TEST_CASE("separable search finds a boundary optimum of a nonconcave objective") {
  // Symmetric convex terms: the maximum sits at a vertex of the truncated simplex.
  SeparableObjective obj;
  obj.k = 4;
  obj.symmetric = true;
  obj.term = [](std::size_t, double t) { return t * t; };
  SearchSettings s;
  s.threads = 2;
  const double eps = 0.05;
  const auto r = maximize_separable(obj, eps, s);
  const double top = 1.0 - 3 * eps;
  CHECK(r.value == doctest::Approx(top * top + 3 * eps * eps).epsilon(1e-13));
  // lexicographically smallest maximizer has the large coordinate last
  CHECK(r.argmax[3] == doctest::Approx(top));
}

TEST_CASE("search results do not depend on the thread count") {
  SeparableObjective obj;
  obj.k = 3;
  obj.term = [](std::size_t i, double t) { return std::sin(7.0 * t + static_cast<double>(i)) * t; };
  SearchSettings s1, s8;
  s1.threads = 1;
  s8.threads = 8;
  const auto a = maximize_separable(obj, 0.02, s1);
  const auto b = maximize_separable(obj, 0.02, s8);
  CHECK(a.value == b.value);
  CHECK(a.argmax == b.argmax);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    CHECK(a.trace[i].descriptor == b.trace[i].descriptor);
    CHECK(a.trace[i].value == b.trace[i].value);
  }
}

TEST_CASE("search preconditions") {
  SeparableObjective obj;
  obj.k = 2;
  obj.term = [](std::size_t, double t) { return t; };
  SearchSettings s;
  s.grid_size = 8;
  CHECK_THROWS_AS(maximize_separable(obj, 0.1, s), DomainError);
  s.grid_size = 64;
  CHECK_THROWS_AS(maximize_separable(obj, 0.5, s), DomainError);
  CHECK_THROWS_AS(maximize_separable(obj, 0.0, s), DomainError);
}
