#pragma once

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lbcac/error.hpp"
#include "lbcac/lp.hpp"
#include "lbcac/model.hpp"

namespace lbcac {

// ---------------------------------------------------------------------------
// Variable layout of the arc-flow admission LP.
//
// Columns, in order: C(i,j) for all pairs (row-major); R(i,j,k,l) for every
// admissible relay key; p(l); m(l). A relay key is admissible iff the
// commodity has positive demand, i != j, arc (k,l) exists in the topology,
// and l != i (flow may never re-enter its origin, which kills source loops
// by construction). Keys over nonexistent arcs and same-origin-destination
// keys are never created, so those zero-flow constraint families hold by
// variable elimination.
// ---------------------------------------------------------------------------
struct VariableIndex {
  int n = 0;
  Matrix<int> c_col;               // (i,j) -> column
  std::map<RelayKey, int> r_col;   // admissible relay keys -> column
  std::vector<int> p_col, m_col;   // per-node usage columns
  int num_vars = 0;

  int num_relay_vars() const { return static_cast<int>(r_col.size()); }
};

inline std::pair<LinearProgram, VariableIndex> build_admission_lp(
    const Scenario& sc) {
  const int n = sc.n();
  const Matrix<double>& dem = sc.demand.demand;
  const Topology& topo = sc.topology;

  const double total_demand = sc.demand.total();
  const double cpu_total = sc.caps.cpu_total();
  const double mem_total = sc.caps.mem_total();
  // Normalized objective: gamma * (admitted / demanded) minus phi times the
  // used fraction of each resource pool. Degenerate pools contribute nothing
  // (their usages are forced to zero by the cap rows anyway).
  const double admit_coef =
      total_demand > 0 ? sc.weights.gamma / total_demand : 0.0;
  const double cpu_coef = cpu_total > 0 ? -sc.weights.phi / cpu_total : 0.0;
  const double mem_coef = mem_total > 0 ? -sc.weights.phi / mem_total : 0.0;

  LinearProgram lp;
  lp.sense = Sense::Maximize;
  VariableIndex vi;
  vi.n = n;
  vi.c_col = Matrix<int>(n, n, -1);

  auto node = [](int v) { return std::to_string(v + 1); };

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      vi.c_col(i, j) = lp.add_var("C_" + node(i) + "_" + node(j), admit_coef);

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j || dem(i, j) <= 0) continue;
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
          if (!topo.linked(k, l) || l == i) continue;
          vi.r_col[RelayKey{i, j, k, l}] =
              lp.add_var("R_" + node(i) + "_" + node(j) + "_" + node(k) + "_" +
                         node(l));
        }
      }
    }
  }

  vi.p_col.resize(n);
  vi.m_col.resize(n);
  for (int l = 0; l < n; ++l) vi.p_col[l] = lp.add_var("p_" + node(l), cpu_coef);
  for (int l = 0; l < n; ++l) vi.m_col[l] = lp.add_var("m_" + node(l), mem_coef);
  vi.num_vars = lp.num_vars();

  // (I) admitted <= demanded, every pair.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      lp.add_row(Rel::Le, dem(i, j), {{vi.c_col(i, j), 1.0}},
                 "cap_" + node(i) + "_" + node(j));

  auto arc_var = [&](int i, int j, int k, int l) -> int {
    auto it = vi.r_col.find(RelayKey{i, j, k, l});
    return it == vi.r_col.end() ? -1 : it->second;
  };

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j || dem(i, j) <= 0) continue;
      // (II) transit conservation: inflow == outflow at every l not in {i,j}.
      for (int l = 0; l < n; ++l) {
        if (l == i || l == j) continue;
        std::vector<std::pair<int, double>> terms;
        for (int k = 0; k < n; ++k) {
          if (int v = arc_var(i, j, k, l); v >= 0) terms.emplace_back(v, 1.0);
        }
        for (int e = 0; e < n; ++e) {
          if (int v = arc_var(i, j, l, e); v >= 0) terms.emplace_back(v, -1.0);
        }
        if (!terms.empty())
          lp.add_row(Rel::Eq, 0.0, std::move(terms),
                     "flow_" + node(i) + "_" + node(j) + "_at_" + node(l));
      }
      // (III) inflow at the destination equals the admitted count.
      {
        std::vector<std::pair<int, double>> terms{{vi.c_col(i, j), -1.0}};
        for (int k = 0; k < n; ++k)
          if (int v = arc_var(i, j, k, j); v >= 0) terms.emplace_back(v, 1.0);
        lp.add_row(Rel::Eq, 0.0, std::move(terms),
                   "dest_" + node(i) + "_" + node(j));
      }
      // (IV) outflow at the origin equals the admitted count.
      {
        std::vector<std::pair<int, double>> terms{{vi.c_col(i, j), -1.0}};
        for (int e = 0; e < n; ++e)
          if (int v = arc_var(i, j, i, e); v >= 0) terms.emplace_back(v, 1.0);
        lp.add_row(Rel::Eq, 0.0, std::move(terms),
                   "orig_" + node(i) + "_" + node(j));
      }
    }
  }

  // (VII)/(VIII) per-node usage lower bounds: local calls cost *1 each;
  // every relayed unit costs *2 on each incident arc end, so a transit node
  // is charged twice (in + out) and endpoints once.
  for (int l = 0; l < n; ++l) {
    std::vector<std::pair<int, double>> cpu_terms{{vi.c_col(l, l),
                                                   sc.coeffs.alpha1}};
    std::vector<std::pair<int, double>> mem_terms{{vi.c_col(l, l),
                                                   sc.coeffs.beta1}};
    for (const auto& [key, col] : vi.r_col) {
      if (key.k == l || key.l == l) {
        cpu_terms.emplace_back(col, sc.coeffs.alpha2);
        mem_terms.emplace_back(col, sc.coeffs.beta2);
      }
    }
    cpu_terms.emplace_back(vi.p_col[l], -1.0);
    mem_terms.emplace_back(vi.m_col[l], -1.0);
    lp.add_row(Rel::Le, 0.0, std::move(cpu_terms), "cpu_" + node(l));
    lp.add_row(Rel::Le, 0.0, std::move(mem_terms), "mem_" + node(l));
  }
  // (IX)/(X) usage caps.
  for (int l = 0; l < n; ++l)
    lp.add_row(Rel::Le, sc.caps.cpu[l], {{vi.p_col[l], 1.0}},
               "cpu_cap_" + node(l));
  for (int l = 0; l < n; ++l)
    lp.add_row(Rel::Le, sc.caps.mem[l], {{vi.m_col[l], 1.0}},
               "mem_cap_" + node(l));

  return {std::move(lp), std::move(vi)};
}

// ---------------------------------------------------------------------------
// Plan helpers shared with the rounding and simulation code paths.
// ---------------------------------------------------------------------------

/// Recompute p_l / m_l from a plan's admitted diagonal and relay flows.
inline void recompute_usage(AdmissionPlan& plan, const Scenario& sc) {
  const int n = sc.n();
  std::vector<double> arc_load(n, 0.0);  // incident relayed flow per node
  for (const auto& [key, flow] : plan.relay) {
    arc_load[key.k] += flow;
    arc_load[key.l] += flow;
  }
  plan.cpu_use.assign(n, 0.0);
  plan.mem_use.assign(n, 0.0);
  for (int l = 0; l < n; ++l) {
    plan.cpu_use[l] =
        sc.coeffs.alpha1 * plan.admitted(l, l) + sc.coeffs.alpha2 * arc_load[l];
    plan.mem_use[l] =
        sc.coeffs.beta1 * plan.admitted(l, l) + sc.coeffs.beta2 * arc_load[l];
  }
}

/// Objective value of a plan under a scenario's weights (same normalization
/// as the LP objective).
inline double plan_objective(const AdmissionPlan& plan, const Scenario& sc) {
  const double total_demand = sc.demand.total();
  const double cpu_total = sc.caps.cpu_total();
  const double mem_total = sc.caps.mem_total();
  double p_sum = 0, m_sum = 0;
  for (double v : plan.cpu_use) p_sum += v;
  for (double v : plan.mem_use) m_sum += v;
  double obj = 0.0;
  if (total_demand > 0)
    obj += sc.weights.gamma * plan.total_admitted() / total_demand;
  if (cpu_total > 0) obj -= sc.weights.phi * p_sum / cpu_total;
  if (mem_total > 0) obj -= sc.weights.phi * m_sum / mem_total;
  return obj;
}

/// Solve the admission LP and extract the plan. The relay map keeps only
/// strictly positive flows.
inline AdmissionPlan solve_admission(const Scenario& sc) {
  auto [lp, vi] = build_admission_lp(sc);
  const LpSolution sol = solve(lp);
  if (sol.status == LpStatus::Infeasible)
    fail(Errc::InfeasibleModel,
         "admission LP reported infeasible; the all-zero plan is always "
         "feasible, so this is an internal error");
  if (sol.status != LpStatus::Optimal)
    fail(Errc::SolverFailure, "admission LP did not reach an optimum");

  const int n = sc.n();
  AdmissionPlan plan;
  plan.admitted = Matrix<double>(n, n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      plan.admitted(i, j) = std::max(0.0, sol.x[vi.c_col(i, j)]);
  for (const auto& [key, col] : vi.r_col) {
    if (sol.x[col] > 1e-11) plan.relay[key] = sol.x[col];
  }
  plan.cpu_use.resize(n);
  plan.mem_use.resize(n);
  for (int l = 0; l < n; ++l) {
    plan.cpu_use[l] = std::max(0.0, sol.x[vi.p_col[l]]);
    plan.mem_use[l] = std::max(0.0, sol.x[vi.m_col[l]]);
  }
  plan.objective = sol.objective_value;
  return plan;
}

// ---------------------------------------------------------------------------
// Constraint-family verification
// ---------------------------------------------------------------------------

/// Per-family maximum violation of a plan against a scenario. Families map
/// to the admission model's constraint groups; "nonneg" covers variable
/// signs and "support" flags relay keys on arcs missing from the topology.
struct VerificationReport {
  std::map<std::string, double> family_violation;
  double tol = 1e-6;
  bool feasible = false;

  double worst() const {
    double w = 0;
    for (const auto& [_, v] : family_violation) w = std::max(w, v);
    return w;
  }
};

inline VerificationReport verify_plan(const AdmissionPlan& plan,
                                      const Scenario& sc, double tol = 1e-6) {
  const int n = sc.n();
  if (plan.admitted.rows() != n || plan.admitted.cols() != n ||
      static_cast<int>(plan.cpu_use.size()) != n ||
      static_cast<int>(plan.mem_use.size()) != n)
    fail(Errc::DimensionMismatch, "plan dimensions do not match scenario");

  VerificationReport rep;
  rep.tol = tol;
  auto& fam = rep.family_violation;
  for (const char* f : {"I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX",
                        "X", "nonneg", "support"})
    fam[f] = 0.0;
  auto bump = [&](const char* f, double v) {
    if (v > fam[f]) fam[f] = v;
  };

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      bump("I", plan.admitted(i, j) - sc.demand.demand(i, j));
      bump("nonneg", -plan.admitted(i, j));
    }
  }

  // Per-commodity node flow balances.
  std::map<std::pair<int, int>, std::vector<double>> inflow, outflow;
  for (const auto& [key, flow] : plan.relay) {
    bump("nonneg", -flow);
    if (key.i == key.j) bump("V", std::abs(flow));
    if (key.l == key.i) bump("VI", std::abs(flow));
    if (!sc.topology.linked(key.k, key.l)) bump("support", std::abs(flow));
    auto& in = inflow[{key.i, key.j}];
    auto& out = outflow[{key.i, key.j}];
    if (in.empty()) in.assign(n, 0.0);
    if (out.empty()) out.assign(n, 0.0);
    in[key.l] += flow;
    out[key.k] += flow;
  }

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      auto it_in = inflow.find({i, j});
      auto it_out = outflow.find({i, j});
      const std::vector<double>* in =
          it_in == inflow.end() ? nullptr : &it_in->second;
      const std::vector<double>* out =
          it_out == outflow.end() ? nullptr : &it_out->second;
      auto in_at = [&](int l) { return in ? (*in)[l] : 0.0; };
      auto out_at = [&](int l) { return out ? (*out)[l] : 0.0; };
      for (int l = 0; l < n; ++l) {
        if (l == i || l == j) continue;
        bump("II", std::abs(in_at(l) - out_at(l)));
      }
      bump("III", std::abs(in_at(j) - plan.admitted(i, j)));
      bump("IV", std::abs(out_at(i) - plan.admitted(i, j)));
    }
  }

  std::vector<double> arc_load(n, 0.0);
  for (const auto& [key, flow] : plan.relay) {
    arc_load[key.k] += flow;
    arc_load[key.l] += flow;
  }
  for (int l = 0; l < n; ++l) {
    const double cpu_lhs = sc.coeffs.alpha1 * plan.admitted(l, l) +
                           sc.coeffs.alpha2 * arc_load[l];
    const double mem_lhs = sc.coeffs.beta1 * plan.admitted(l, l) +
                           sc.coeffs.beta2 * arc_load[l];
    bump("VII", cpu_lhs - plan.cpu_use[l]);
    bump("VIII", mem_lhs - plan.mem_use[l]);
    bump("IX", plan.cpu_use[l] - sc.caps.cpu[l]);
    bump("X", plan.mem_use[l] - sc.caps.mem[l]);
    bump("nonneg", -plan.cpu_use[l]);
    bump("nonneg", -plan.mem_use[l]);
  }

  rep.feasible = rep.worst() <= tol;
  return rep;
}

}  // namespace lbcac
