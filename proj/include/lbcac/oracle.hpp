#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "lbcac/admission.hpp"
#include "lbcac/error.hpp"
#include "lbcac/lp.hpp"
#include "lbcac/model.hpp"

namespace lbcac {

/// All simple paths from `origin` to `dest` using at most `max_hops` arcs,
/// ordered by hop count and then lexicographically by node sequence.
inline std::vector<std::vector<int>> enumerate_simple_paths(
    const Topology& topo, int origin, int dest, int max_hops) {
  if (origin == dest)
    fail(Errc::InvalidArgument, "origin and destination must differ");
  if (max_hops < 1) fail(Errc::InvalidArgument, "max_hops must be >= 1");

  std::vector<std::vector<int>> out;
  std::vector<int> path{origin};
  std::vector<char> visited(topo.n, 0);
  visited[origin] = 1;

  auto dfs = [&](auto&& self, int v) -> void {
    if (v == dest) {
      out.push_back(path);
      return;
    }
    if (static_cast<int>(path.size()) > max_hops) return;
    for (int u = 0; u < topo.n; ++u) {
      if (!topo.linked(v, u) || visited[u]) continue;
      visited[u] = 1;
      path.push_back(u);
      self(self, u);
      path.pop_back();
      visited[u] = 0;
    }
  };
  dfs(dfs, origin);

  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

struct PathFlow {
  int origin = 0, dest = 0;
  std::vector<int> nodes;
  double flow = 0.0;
};

struct PathLpResult {
  double objective = 0.0;
  std::vector<PathFlow> flows;           // enumeration order, zeros included
  std::vector<double> local_admitted;    // per-node local calls
  std::vector<double> cpu_use, mem_use;  // p_l, m_l
  std::size_t num_paths = 0;
};

/// Loop-free reference optimum: the admission objective restated over
/// explicit simple-path variables. Resource accounting matches the arc
/// model exactly (a path is charged once per arc end incident to a node,
/// i.e. endpoints pay single and interior nodes pay double), so for
/// max_hops >= n-1 the optimal value equals the arc LP's: any arc solution
/// with loops is weakly dominated because loops consume resources without
/// admitting anything.
inline PathLpResult solve_path_lp(const Scenario& sc, int max_hops,
                                  std::size_t path_cap = 1000000) {
  const int n = sc.n();
  const Matrix<double>& dem = sc.demand.demand;

  const double total_demand = sc.demand.total();
  const double cpu_total = sc.caps.cpu_total();
  const double mem_total = sc.caps.mem_total();
  const double admit_coef =
      total_demand > 0 ? sc.weights.gamma / total_demand : 0.0;
  const double cpu_coef = cpu_total > 0 ? -sc.weights.phi / cpu_total : 0.0;
  const double mem_coef = mem_total > 0 ? -sc.weights.phi / mem_total : 0.0;

  LinearProgram lp;
  lp.sense = Sense::Maximize;

  struct Commodity {
    int i, j;
    std::vector<std::vector<int>> paths;
    int first_var;
  };
  std::vector<Commodity> commodities;
  std::size_t total_paths = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j || dem(i, j) <= 0) continue;
      auto paths = enumerate_simple_paths(sc.topology, i, j, max_hops);
      total_paths += paths.size();
      if (total_paths > path_cap)
        fail(Errc::PathExplosion,
             "simple-path count exceeds cap of " + std::to_string(path_cap));
      commodities.push_back(Commodity{i, j, std::move(paths), -1});
    }
  }

  for (Commodity& c : commodities) {
    c.first_var = lp.num_vars();
    for (std::size_t p = 0; p < c.paths.size(); ++p)
      lp.add_var("f_" + std::to_string(c.i + 1) + "_" + std::to_string(c.j + 1) +
                     "_" + std::to_string(p),
                 admit_coef);
  }
  std::vector<int> local_col(n), p_col(n), m_col(n);
  for (int l = 0; l < n; ++l)
    local_col[l] = lp.add_var("C_" + std::to_string(l + 1), admit_coef);
  for (int l = 0; l < n; ++l)
    p_col[l] = lp.add_var("p_" + std::to_string(l + 1), cpu_coef);
  for (int l = 0; l < n; ++l)
    m_col[l] = lp.add_var("m_" + std::to_string(l + 1), mem_coef);

  // Admitted <= demanded, per commodity and per local diagonal.
  for (const Commodity& c : commodities) {
    std::vector<std::pair<int, double>> terms;
    for (std::size_t p = 0; p < c.paths.size(); ++p)
      terms.emplace_back(c.first_var + static_cast<int>(p), 1.0);
    lp.add_row(Rel::Le, dem(c.i, c.j), std::move(terms), "cap");
  }
  for (int l = 0; l < n; ++l)
    lp.add_row(Rel::Le, dem(l, l), {{local_col[l], 1.0}}, "cap_local");

  // Node usage: endpoints of a path pay one arc end, interior nodes two.
  for (int l = 0; l < n; ++l) {
    std::vector<std::pair<int, double>> cpu_terms{{local_col[l],
                                                   sc.coeffs.alpha1}};
    std::vector<std::pair<int, double>> mem_terms{{local_col[l],
                                                   sc.coeffs.beta1}};
    for (const Commodity& c : commodities) {
      for (std::size_t p = 0; p < c.paths.size(); ++p) {
        const std::vector<int>& nodes = c.paths[p];
        int ends = 0;
        for (std::size_t h = 0; h < nodes.size(); ++h) {
          if (nodes[h] != l) continue;
          ends += (h == 0 || h + 1 == nodes.size()) ? 1 : 2;
        }
        if (ends > 0) {
          const int var = c.first_var + static_cast<int>(p);
          cpu_terms.emplace_back(var, sc.coeffs.alpha2 * ends);
          mem_terms.emplace_back(var, sc.coeffs.beta2 * ends);
        }
      }
    }
    cpu_terms.emplace_back(p_col[l], -1.0);
    mem_terms.emplace_back(m_col[l], -1.0);
    lp.add_row(Rel::Le, 0.0, std::move(cpu_terms), "cpu");
    lp.add_row(Rel::Le, 0.0, std::move(mem_terms), "mem");
  }
  for (int l = 0; l < n; ++l)
    lp.add_row(Rel::Le, sc.caps.cpu[l], {{p_col[l], 1.0}}, "cpu_cap");
  for (int l = 0; l < n; ++l)
    lp.add_row(Rel::Le, sc.caps.mem[l], {{m_col[l], 1.0}}, "mem_cap");

  const LpSolution sol = solve(lp);
  if (sol.status != LpStatus::Optimal)
    fail(Errc::SolverFailure, "path LP did not reach an optimum");

  PathLpResult res;
  res.objective = sol.objective_value;
  res.num_paths = total_paths;
  for (const Commodity& c : commodities) {
    for (std::size_t p = 0; p < c.paths.size(); ++p) {
      res.flows.push_back(PathFlow{
          c.i, c.j, c.paths[p],
          std::max(0.0, sol.x[c.first_var + static_cast<int>(p)])});
    }
  }
  res.local_admitted.resize(n);
  res.cpu_use.resize(n);
  res.mem_use.resize(n);
  for (int l = 0; l < n; ++l) {
    res.local_admitted[l] = std::max(0.0, sol.x[local_col[l]]);
    res.cpu_use[l] = std::max(0.0, sol.x[p_col[l]]);
    res.mem_use[l] = std::max(0.0, sol.x[m_col[l]]);
  }
  return res;
}

/// Aggregate a path-LP solution back to an arc-form plan (used to cross
/// check the decomposer and the verifier against an independent route).
inline AdmissionPlan plan_from_path_flows(const PathLpResult& res,
                                          const Scenario& sc) {
  const int n = sc.n();
  AdmissionPlan plan;
  plan.admitted = Matrix<double>(n, n, 0.0);
  for (int l = 0; l < n; ++l) plan.admitted(l, l) = res.local_admitted[l];
  for (const PathFlow& pf : res.flows) {
    if (pf.flow <= 1e-11) continue;
    plan.admitted(pf.origin, pf.dest) += pf.flow;
    for (std::size_t h = 0; h + 1 < pf.nodes.size(); ++h)
      plan.relay[RelayKey{pf.origin, pf.dest, pf.nodes[h], pf.nodes[h + 1]}] +=
          pf.flow;
  }
  recompute_usage(plan, sc);
  plan.objective = plan_objective(plan, sc);
  return plan;
}

}  // namespace lbcac
