#include <catch_amalgamated.hpp>

#include "lbcac/model.hpp"

using namespace lbcac;

namespace {

Matrix<int> pair_adj() {
  Matrix<int> a(2, 2, 0);
  a(0, 1) = a(1, 0) = 1;
  return a;
}

}  // namespace

TEST_CASE("minimal linked pair validates", "[model]") {
  const Topology t = validate_topology(pair_adj());
  CHECK(t.n == 2);
  CHECK(t.linked(0, 1));
  CHECK(t.degree(0) == 1);
}

TEST_CASE("asymmetric adjacency is rejected", "[model]") {
  Matrix<int> a(2, 2, 0);
  a(0, 1) = 1;
  CHECK_THROWS_MATCHES(validate_topology(a), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == Errc::NotSymmetric;
                       }));
}

TEST_CASE("diagonal, binary and emptiness checks", "[model]") {
  Matrix<int> diag(2, 2, 0);
  diag(0, 0) = 1;
  CHECK_THROWS_AS(validate_topology(diag), Error);

  Matrix<int> binary = pair_adj();
  binary(0, 1) = binary(1, 0) = 2;
  try {
    validate_topology(binary);
    FAIL("expected NonBinaryEntry");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NonBinaryEntry);
  }

  try {
    validate_topology(Matrix<int>{});
    FAIL("expected EmptyMatrix");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::EmptyMatrix);
  }
}

TEST_CASE("canonical 6-server topology", "[model]") {
  const Topology t = canonical6();
  CHECK(t.n == 6);
  int edges = 0;
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) edges += t.adj(i, j);
  CHECK(edges == 8);
  // contains both load-split paths 1-3-5-6 and 1-2-4-6 (1-based)
  CHECK((t.linked(0, 2) && t.linked(2, 4) && t.linked(4, 5)));
  CHECK((t.linked(0, 1) && t.linked(1, 3) && t.linked(3, 5)));
}

TEST_CASE("scenario validation happy path on the bundled shape", "[model]") {
  const Topology t = canonical6();
  Matrix<double> dem(6, 6, 1.0);
  const Scenario sc = validate_scenario(
      t, DemandMatrix{dem},
      ResourceCaps{std::vector<double>(6, 100.0), std::vector<double>(6, 512.0)},
      reference_coefficients(), ObjectiveWeights{1.0, 1.0});
  CHECK(sc.n() == 6);
  CHECK(sc.demand.total() == Catch::Approx(36.0));
}

TEST_CASE("scenario validation rejects bad inputs", "[model]") {
  const Topology t = validate_topology(pair_adj());
  const ResourceCaps caps{{100, 100}, {512, 512}};
  const CostCoefficients cc = reference_coefficients();

  SECTION("negative demand entry") {
    Matrix<double> dem(2, 2, 0.0);
    dem(0, 1) = -1.0;
    try {
      validate_scenario(t, DemandMatrix{dem}, caps, cc, {1, 1});
      FAIL("expected NegativeEntry");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::NegativeEntry);
    }
  }
  SECTION("degenerate weights") {
    try {
      validate_scenario(t, DemandMatrix{Matrix<double>(2, 2, 1.0)}, caps, cc,
                        {0, 0});
      FAIL("expected DegenerateWeights");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::DegenerateWeights);
    }
  }
  SECTION("dimension mismatch") {
    try {
      validate_scenario(t, DemandMatrix{Matrix<double>(3, 3, 0.0)}, caps, cc,
                        {1, 1});
      FAIL("expected DimensionMismatch");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::DimensionMismatch);
    }
  }
  SECTION("all-zero coefficients") {
    try {
      validate_scenario(t, DemandMatrix{Matrix<double>(2, 2, 1.0)}, caps,
                        CostCoefficients{0, 0, 0, 0}, {1, 1});
      FAIL("expected DegenerateCoefficients");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::DegenerateCoefficients);
    }
  }
}

TEST_CASE("validation is pure", "[model]") {
  Matrix<int> a = pair_adj();
  const Matrix<int> before = a;
  (void)validate_topology(a);
  CHECK(a == before);
  const Topology t1 = validate_topology(a);
  const Topology t2 = validate_topology(a);
  CHECK(t1.adj == t2.adj);
}

TEST_CASE("duty cycle timing must fill the slot", "[model]") {
  CHECK_NOTHROW(validate_timing(DutyCycleTiming{}));
  DutyCycleTiming bad;
  bad.t_idle = 0.7;
  CHECK_THROWS_AS(validate_timing(bad), Error);
}
