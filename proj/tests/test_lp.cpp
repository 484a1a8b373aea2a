#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "lbcac/lp.hpp"
#include "lbcac/rng.hpp"

using namespace lbcac;

TEST_CASE("bounded single variable maximization", "[lp]") {
  LinearProgram lp;
  const int x = lp.add_var("x", 1.0);
  lp.add_row(Rel::Le, 5.0, {{x, 1.0}});
  const LpSolution sol = solve(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.x[x] == Catch::Approx(5.0));
  CHECK(sol.objective_value == Catch::Approx(5.0));
}

TEST_CASE("negative cap makes the program infeasible", "[lp]") {
  LinearProgram lp;
  const int x = lp.add_var("x", 1.0);
  lp.add_row(Rel::Le, -1.0, {{x, 1.0}});
  CHECK(solve(lp).status == LpStatus::Infeasible);
}

TEST_CASE("missing cap makes the program unbounded", "[lp]") {
  LinearProgram lp;
  lp.add_var("x", 1.0);
  CHECK(solve(lp).status == LpStatus::Unbounded);
}

TEST_CASE("two-constraint vertex optimum", "[lp]") {
  // max 3a+2b st a+b<=4, a+3b<=6. Vertices (4,0) and (3,1) score 12 and 11.
  LinearProgram lp;
  const int a = lp.add_var("a", 3.0);
  const int b = lp.add_var("b", 2.0);
  lp.add_row(Rel::Le, 4.0, {{a, 1.0}, {b, 1.0}});
  lp.add_row(Rel::Le, 6.0, {{a, 1.0}, {b, 3.0}});
  const LpSolution sol = solve(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.x[a] == Catch::Approx(4.0));
  CHECK(sol.x[b] == Catch::Approx(0.0).margin(1e-12));
  CHECK(sol.objective_value == Catch::Approx(12.0));
}

TEST_CASE("equality rows and minimization", "[lp]") {
  LinearProgram lp;
  lp.sense = Sense::Minimize;
  const int x = lp.add_var("x", 1.0);
  const int y = lp.add_var("y", 2.0);
  lp.add_row(Rel::Eq, 10.0, {{x, 1.0}, {y, 1.0}});
  lp.add_row(Rel::Ge, 3.0, {{y, 1.0}});
  const LpSolution sol = solve(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.x[x] == Catch::Approx(7.0));
  CHECK(sol.x[y] == Catch::Approx(3.0));
  CHECK(sol.objective_value == Catch::Approx(13.0));
}

TEST_CASE("general bounds: shifted, mirrored and free variables", "[lp]") {
  // max x + y - z with x in [2,7], y <= 3 (no lower bound), z free,
  // x + y + z = 9, z >= ... nothing: z free absorbs the slack.
  LinearProgram lp;
  const int x = lp.add_var("x", 1.0, 2.0, 7.0);
  const int y = lp.add_var("y", 1.0, -kInf, 3.0);
  const int z = lp.add_var("z", -1.0, -kInf, kInf);
  lp.add_row(Rel::Eq, 9.0, {{x, 1.0}, {y, 1.0}, {z, 1.0}});
  const LpSolution sol = solve(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.x[x] == Catch::Approx(7.0));
  CHECK(sol.x[y] == Catch::Approx(3.0));
  CHECK(sol.x[z] == Catch::Approx(-1.0));
  CHECK(sol.objective_value == Catch::Approx(11.0));
  CHECK(max_violation(lp, sol.x) <= 1e-9);
}

TEST_CASE("weak duality spot check", "[lp]") {
  // Primal: max 3a+2b st a+b<=4, a+3b<=6. Dual: min 4u+6v st u+v>=3,
  // u+3v>=2. Any dual-feasible point bounds the primal optimum from above;
  // any primal-feasible point bounds it from below.
  LinearProgram lp;
  const int a = lp.add_var("a", 3.0);
  const int b = lp.add_var("b", 2.0);
  lp.add_row(Rel::Le, 4.0, {{a, 1.0}, {b, 1.0}});
  lp.add_row(Rel::Le, 6.0, {{a, 1.0}, {b, 3.0}});
  const LpSolution sol = solve(lp);
  REQUIRE(sol.status == LpStatus::Optimal);

  const double dual_points[][2] = {{3.0, 0.0}, {4.0, 1.0}, {3.5, 2.0}};
  for (const auto& d : dual_points) {
    REQUIRE(d[0] + d[1] >= 3.0);
    REQUIRE(d[0] + 3 * d[1] >= 2.0);
    CHECK(sol.objective_value <= 4 * d[0] + 6 * d[1] + 1e-7);
  }
  const double primal_points[][2] = {{0.0, 0.0}, {3.0, 1.0}, {0.0, 2.0}};
  for (const auto& p : primal_points)
    CHECK(sol.objective_value >= 3 * p[0] + 2 * p[1] - 1e-7);
}

namespace {

LinearProgram random_feasible_lp(SeededRng& rng) {
  LinearProgram lp;
  const int nv = rng.uniform_int(2, 6);
  const int nr = rng.uniform_int(1, 6);
  for (int v = 0; v < nv; ++v)
    lp.add_var("x" + std::to_string(v),
               static_cast<double>(rng.uniform_int(-5, 5)));
  for (int r = 0; r < nr; ++r) {
    std::vector<std::pair<int, double>> terms;
    for (int v = 0; v < nv; ++v) {
      const int c = rng.uniform_int(-3, 5);
      if (c != 0) terms.emplace_back(v, static_cast<double>(c));
    }
    if (terms.empty()) terms.emplace_back(0, 1.0);
    // nonnegative rhs keeps the origin feasible, so status is never
    // Infeasible; Unbounded stays possible and is skipped below.
    lp.add_row(Rel::Le, static_cast<double>(rng.uniform_int(0, 10)),
               std::move(terms));
  }
  return lp;
}

}  // namespace

TEST_CASE("scaling the objective preserves the argmax", "[lp]") {
  SeededRng rng(20240811);
  int checked = 0;
  for (int t = 0; t < 60; ++t) {
    LinearProgram lp = random_feasible_lp(rng);
    const LpSolution base = solve(lp);
    if (base.status != LpStatus::Optimal) continue;
    ++checked;
    for (const double c : {0.5, 2.0, 8.0}) {  // powers of two scale exactly
      LinearProgram scaled = lp;
      for (double& v : scaled.objective) v *= c;
      const LpSolution s = solve(scaled);
      REQUIRE(s.status == LpStatus::Optimal);
      CHECK(max_violation(scaled, s.x) <= 1e-9);
      for (int v = 0; v < lp.num_vars(); ++v)
        CHECK(s.x[v] == Catch::Approx(base.x[v]).margin(1e-9));
      CHECK(s.objective_value ==
            Catch::Approx(c * base.objective_value)
                .epsilon(1e-7)
                .margin(1e-12));
    }
  }
  CHECK(checked >= 20);
}

TEST_CASE("optimal solutions satisfy all rows and bounds", "[lp]") {
  SeededRng rng(77);
  for (int t = 0; t < 80; ++t) {
    const LinearProgram lp = random_feasible_lp(rng);
    const LpSolution sol = solve(lp);
    if (sol.status != LpStatus::Optimal) continue;
    CHECK(max_violation(lp, sol.x) <= 1e-9);
  }
}

TEST_CASE("solving is deterministic", "[lp]") {
  SeededRng rng(991);
  for (int t = 0; t < 20; ++t) {
    const LinearProgram lp = random_feasible_lp(rng);
    const LpSolution a = solve(lp);
    const LpSolution b = solve(lp);
    REQUIRE(a.status == b.status);
    if (a.status != LpStatus::Optimal) continue;
    CHECK(a.objective_value == b.objective_value);
    for (int v = 0; v < lp.num_vars(); ++v) CHECK(a.x[v] == b.x[v]);
  }
}

TEST_CASE("degenerate ties terminate under the anti-cycling rule", "[lp]") {
  // A classic cycling-prone instance (Beale). Bland's rule must finish.
  LinearProgram lp;
  const int x1 = lp.add_var("x1", 0.75);
  const int x2 = lp.add_var("x2", -150.0);
  const int x3 = lp.add_var("x3", 0.02);
  const int x4 = lp.add_var("x4", -6.0);
  lp.add_row(Rel::Le, 0.0, {{x1, 0.25}, {x2, -60.0}, {x3, -0.04}, {x4, 9.0}});
  lp.add_row(Rel::Le, 0.0, {{x1, 0.5}, {x2, -90.0}, {x3, -0.02}, {x4, 3.0}});
  lp.add_row(Rel::Le, 1.0, {{x3, 1.0}});
  const LpSolution sol = solve(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective_value == Catch::Approx(0.05));
}

TEST_CASE("debug dump lists objective, rows and bounds", "[lp]") {
  LinearProgram lp;
  const int a = lp.add_var("alpha", 3.0);
  lp.add_var("beta", -2.0, 0.0, 7.5);
  lp.add_row(Rel::Le, 4.0, {{a, 1.0}}, "cap");
  std::ostringstream os;
  dump_lp(lp, os);
  const std::string text = os.str();
  CHECK(text.find("Maximize") != std::string::npos);
  CHECK(text.find("alpha") != std::string::npos);
  CHECK(text.find("cap:") != std::string::npos);
  CHECK(text.find("<= 4") != std::string::npos);
  CHECK(text.find("7.5") != std::string::npos);
}
