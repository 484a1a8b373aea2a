#include <catch_amalgamated.hpp>

#include <cmath>

#include "lbcac/admission.hpp"
#include "lbcac/rng.hpp"

using namespace lbcac;

namespace {

Scenario single_server(double demand, double P = 100.0, double M = 512.0,
                       double gamma = 1.0, double phi = 0.0) {
  return validate_scenario(validate_topology(Matrix<int>(1, 1, 0)),
                           DemandMatrix{Matrix<double>(1, 1, demand)},
                           ResourceCaps{{P}, {M}}, reference_coefficients(),
                           ObjectiveWeights{gamma, phi});
}

Scenario canonical_scenario(const Matrix<double>& demand, double gamma,
                            double phi) {
  return validate_scenario(
      canonical6(), DemandMatrix{demand},
      ResourceCaps{std::vector<double>(6, 100.0),
                   std::vector<double>(6, 512.0)},
      reference_coefficients(), ObjectiveWeights{gamma, phi});
}

Scenario random_scenario(SeededRng& rng, int n, double gamma, double phi) {
  // random connected sub-topology: spanning tree plus extra edges
  Matrix<int> adj(n, n, 0);
  for (int v = 1; v < n; ++v) {
    const int u = rng.uniform_int(0, v - 1);
    adj(u, v) = adj(v, u) = 1;
  }
  const int extra = rng.uniform_int(0, n);
  for (int e = 0; e < extra; ++e) {
    const int u = rng.uniform_int(0, n - 1);
    const int v = rng.uniform_int(0, n - 1);
    if (u != v) adj(u, v) = adj(v, u) = 1;
  }
  Matrix<double> dem(n, n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) dem(i, j) = rng.uniform(0.0, 50.0);
  return validate_scenario(
      validate_topology(adj), DemandMatrix{dem},
      ResourceCaps{std::vector<double>(n, 100.0),
                   std::vector<double>(n, 512.0)},
      reference_coefficients(), ObjectiveWeights{gamma, phi});
}

}  // namespace

TEST_CASE("single server LP shape", "[admission]") {
  const auto [lp, vi] = build_admission_lp(single_server(1000.0));
  CHECK(lp.num_vars() == 3);   // C11, p1, m1
  CHECK(lp.num_rows() == 5);   // demand cap, cpu, mem, cpu cap, mem cap
  CHECK(vi.num_relay_vars() == 0);
}

TEST_CASE("two servers, one commodity: relay variable elimination",
          "[admission]") {
  Matrix<int> adj(2, 2, 0);
  adj(0, 1) = adj(1, 0) = 1;
  Matrix<double> dem(2, 2, 0.0);
  dem(0, 1) = 10.0;
  const Scenario sc = validate_scenario(
      validate_topology(adj), DemandMatrix{dem}, ResourceCaps{{100, 100},
                                                              {512, 512}},
      reference_coefficients(), ObjectiveWeights{1.0, 0.0});
  const auto [lp, vi] = build_admission_lp(sc);
  CHECK(vi.num_relay_vars() == 1);  // only R(1,2,1,2); back-arc re-enters origin
  CHECK(lp.num_vars() == 9);        // 4 C + 1 R + 2 p + 2 m
  CHECK(vi.r_col.count(RelayKey{0, 1, 0, 1}) == 1);
  CHECK(vi.r_col.count(RelayKey{0, 1, 1, 0}) == 0);
}

TEST_CASE("canonical topology relay count regression", "[admission]") {
  // sum over the 30 commodities of (2|E| - deg(origin)) with |E| = 8
  const auto [lp, vi] = build_admission_lp(
      canonical_scenario(Matrix<double>(6, 6, 1.0), 1.0, 1.0));
  CHECK(vi.num_relay_vars() == 400);
  CHECK(lp.num_vars() == 448);
}

TEST_CASE("single server admits everything that fits", "[admission]") {
  const AdmissionPlan plan = solve_admission(single_server(1000.0));
  CHECK(plan.admitted(0, 0) == Catch::Approx(1000.0));
  CHECK(plan.cpu_use[0] == Catch::Approx(74.104));
  CHECK(plan.mem_use[0] == Catch::Approx(327.393));
  CHECK(verify_plan(plan, single_server(1000.0)).feasible);
}

TEST_CASE("single server: binding resource limits admission", "[admission]") {
  const AdmissionPlan plan = solve_admission(single_server(2000.0));
  CHECK(plan.admitted(0, 0) == Catch::Approx(100.0 / 0.074104).margin(1e-6));
}

TEST_CASE("single server closed form over a parameter grid", "[admission]") {
  // With phi = 0 the optimum is min(demand, P/alpha1, M/beta1).
  SeededRng rng(5150);
  for (int t = 0; t < 20; ++t) {
    const double demand = rng.uniform(0.0, 3000.0);
    const double P = rng.uniform(10.0, 200.0);
    const double M = rng.uniform(50.0, 1024.0);
    const Scenario sc = single_server(demand, P, M);
    const AdmissionPlan plan = solve_admission(sc);
    const double expect =
        std::min({demand, P / sc.coeffs.alpha1, M / sc.coeffs.beta1});
    CHECK(plan.admitted(0, 0) == Catch::Approx(expect).margin(1e-6));
  }
}

TEST_CASE("unrewarded admission yields the zero plan", "[admission]") {
  Matrix<double> dem(6, 6, 25.0);
  const AdmissionPlan plan = solve_admission(canonical_scenario(dem, 0.0, 1.0));
  CHECK(plan.total_admitted() == Catch::Approx(0.0).margin(1e-9));
  CHECK(plan.objective == Catch::Approx(0.0).margin(1e-12));
  for (double v : plan.cpu_use) CHECK(v == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("zero demand yields the zero plan", "[admission]") {
  const AdmissionPlan plan =
      solve_admission(canonical_scenario(Matrix<double>(6, 6, 0.0), 1.0, 1.0));
  CHECK(plan.total_admitted() == 0.0);
  CHECK(plan.relay.empty());
  CHECK(plan.objective == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("solver optima verify clean", "[admission]") {
  SeededRng rng(8080);
  for (int t = 0; t < 10; ++t) {
    const Scenario sc = random_scenario(rng, 3 + t % 3, 2.0, 0.5);
    const AdmissionPlan plan = solve_admission(sc);
    const VerificationReport rep = verify_plan(plan, sc, 1e-6);
    INFO("instance " << t);
    CHECK(rep.feasible);
    // objective stays inside the normalized band
    CHECK(plan.objective <= sc.weights.gamma + 1e-9);
    CHECK(plan.objective >= -2.0 * sc.weights.phi - 1e-9);
  }
}

TEST_CASE("verifier flags violations by family", "[admission]") {
  const Scenario sc = canonical_scenario(Matrix<double>(6, 6, 5.0), 1.0, 1.0);
  AdmissionPlan plan = solve_admission(sc);

  SECTION("over-admission violates family I") {
    plan.admitted(0, 0) = sc.demand.demand(0, 0) + 1.0;
    const VerificationReport rep = verify_plan(plan, sc, 1e-6);
    CHECK_FALSE(rep.feasible);
    CHECK(rep.family_violation.at("I") == Catch::Approx(1.0));
  }
  SECTION("same-origin-destination relay flow violates family V") {
    plan.relay[RelayKey{2, 2, 2, 4}] = 1.5;
    const VerificationReport rep = verify_plan(plan, sc, 1e-6);
    CHECK_FALSE(rep.feasible);
    CHECK(rep.family_violation.at("V") >= 1.5);
  }
  SECTION("flow re-entering its origin violates family VI") {
    plan.relay[RelayKey{1, 5, 0, 1}] = 2.0;
    const VerificationReport rep = verify_plan(plan, sc, 1e-6);
    CHECK_FALSE(rep.feasible);
    CHECK(rep.family_violation.at("VI") >= 2.0);
  }
  SECTION("flow on a missing arc is flagged as unsupported") {
    plan.relay[RelayKey{0, 5, 0, 5}] = 1.0;  // servers 1 and 6 are not linked
    const VerificationReport rep = verify_plan(plan, sc, 1e-6);
    CHECK_FALSE(rep.feasible);
    CHECK(rep.family_violation.at("support") >= 1.0);
  }
}

TEST_CASE("admission grows with the gamma/phi ratio", "[admission]") {
  SeededRng rng(31337);
  for (int t = 0; t < 4; ++t) {
    const int n = 3 + t;
    double prev_admitted = -1.0, prev_p = -1.0, prev_m = -1.0;
    Scenario base = random_scenario(rng, std::min(n, 5), 1.0, 1.0);
    for (const double gamma : {0.25, 1.0, 4.0, 16.0}) {
      const Scenario sc =
          validate_scenario(base.topology, base.demand, base.caps, base.coeffs,
                            ObjectiveWeights{gamma, 1.0});
      const AdmissionPlan plan = solve_admission(sc);
      double p = 0, m = 0;
      for (double v : plan.cpu_use) p += v;
      for (double v : plan.mem_use) m += v;
      CHECK(plan.total_admitted() >= prev_admitted - 1e-7);
      CHECK(p >= prev_p - 1e-7);
      CHECK(m >= prev_m - 1e-7);
      prev_admitted = plan.total_admitted();
      prev_p = p;
      prev_m = m;
    }
  }
}

TEST_CASE("enlarging demand never lowers the optimum", "[admission]") {
  SeededRng rng(2718);
  for (int t = 0; t < 5; ++t) {
    const Scenario sc = random_scenario(rng, 4, 2.0, 1.0);
    const double base_obj = solve_admission(sc).objective;
    Matrix<double> bigger = sc.demand.demand;
    for (double& v : bigger.data()) v *= 1.5;
    // same normalization so objectives are comparable: keep the weights but
    // rescale gamma by the demand-total ratio to cancel the denominator.
    const double scale = DemandMatrix{bigger}.total() / sc.demand.total();
    const Scenario grown = validate_scenario(
        sc.topology, DemandMatrix{bigger}, sc.caps, sc.coeffs,
        ObjectiveWeights{sc.weights.gamma * scale, sc.weights.phi});
    CHECK(solve_admission(grown).objective >= base_obj - 1e-7);
  }
}
