#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "lbcac/admission.hpp"
#include "lbcac/error.hpp"
#include "lbcac/model.hpp"

namespace lbcac {

/// One signaling path carrying part of a commodity's admitted flow.
struct SignalingPath {
  int origin = 0, dest = 0;
  std::vector<int> nodes;  // origin ... dest, all distinct, arcs adjacent
  double flow = 0.0;
};

/// A routing cycle found in a relay flow. `nodes` starts and ends on the
/// same server. A source loop passes through the commodity's origin; every
/// other cycle is a non-source loop.
struct Loop {
  int origin = 0, dest = 0;  // owning commodity
  std::vector<int> nodes;    // first == last
  double flow = 0.0;
};

struct LoopReport {
  std::vector<Loop> source_loops;
  std::vector<Loop> non_source_loops;
  // Flow that no origin->destination simple path can carry: the sum of
  // extracted loop flows plus any conservation-violating remainder.
  double residual_flow = 0.0;
};

struct Decomposition {
  std::vector<SignalingPath> paths;
  LoopReport loops;

  double path_flow_total() const {
    double s = 0;
    for (const SignalingPath& p : paths) s += p.flow;
    return s;
  }
};

namespace detail {

constexpr double kFlowTol = 1e-9;

using ArcMap = std::map<std::pair<int, int>, double>;

inline void strip(ArcMap& arcs, const std::vector<int>& nodes, double amount) {
  for (std::size_t h = 0; h + 1 < nodes.size(); ++h) {
    auto it = arcs.find({nodes[h], nodes[h + 1]});
    it->second -= amount;
    if (it->second <= kFlowTol) arcs.erase(it);
  }
}

inline double bottleneck(const ArcMap& arcs, const std::vector<int>& nodes) {
  double b = kInf;
  for (std::size_t h = 0; h + 1 < nodes.size(); ++h)
    b = std::min(b, arcs.at({nodes[h], nodes[h + 1]}));
  return b;
}

// Lowest-index-first depth-first search for a simple origin->dest path over
// positive arcs. Returns an empty vector when none exists.
inline bool find_simple_path(const ArcMap& arcs, int v, int dest,
                             std::vector<char>& visited,
                             std::vector<int>& path) {
  if (v == dest) return true;
  // Arc keys are ordered, so the range scan visits next hops ascending.
  for (auto it = arcs.lower_bound({v, 0}); it != arcs.end() && it->first.first == v;
       ++it) {
    const int next = it->first.second;
    if (visited[next]) continue;
    visited[next] = 1;
    path.push_back(next);
    if (find_simple_path(arcs, next, dest, visited, path)) return true;
    path.pop_back();
    visited[next] = 0;
  }
  return false;
}

inline void decompose_commodity(int origin, int dest, ArcMap arcs, int n,
                                Decomposition& out) {
  // Pass 1: strip simple origin->dest paths at their bottleneck flow.
  for (;;) {
    std::vector<char> visited(n, 0);
    std::vector<int> nodes{origin};
    visited[origin] = 1;
    if (!find_simple_path(arcs, origin, dest, visited, nodes)) break;
    const double f = bottleneck(arcs, nodes);
    strip(arcs, nodes, f);
    out.paths.push_back(SignalingPath{origin, dest, std::move(nodes), f});
  }

  // Pass 2: whatever remains is loop flow. Walk lowest-index positive arcs
  // until a node repeats, extract that cycle, repeat. A dead end can only
  // appear when the input violated flow conservation; that arc is dropped
  // into the residual as stuck flow.
  while (!arcs.empty()) {
    const int start = arcs.begin()->first.first;
    std::vector<int> seq{start};
    std::vector<int> pos(n, -1);
    pos[start] = 0;
    for (;;) {
      const int cur = seq.back();
      auto it = arcs.lower_bound({cur, 0});
      if (it == arcs.end() || it->first.first != cur) {
        // stuck: remove the arc we arrived by
        const double f = arcs.at({seq[seq.size() - 2], cur});
        out.loops.residual_flow += f;
        arcs.erase({seq[seq.size() - 2], cur});
        break;
      }
      const int next = it->first.second;
      if (pos[next] >= 0) {
        std::vector<int> cycle(seq.begin() + pos[next], seq.end());
        cycle.push_back(next);
        const double f = bottleneck(arcs, cycle);
        strip(arcs, cycle, f);
        const bool through_origin =
            std::find(cycle.begin(), cycle.end(), origin) != cycle.end();
        out.loops.residual_flow += f;
        Loop loop{origin, dest, std::move(cycle), f};
        (through_origin ? out.loops.source_loops : out.loops.non_source_loops)
            .push_back(std::move(loop));
        break;
      }
      pos[next] = static_cast<int>(seq.size());
      seq.push_back(next);
    }
  }
}

}  // namespace detail

/// Decompose a plan's relay flows into simple signaling paths plus a loop
/// report, one commodity at a time. Deterministic: ties are always broken
/// toward the lowest server index.
inline Decomposition decompose(const AdmissionPlan& plan,
                               const Topology& topology) {
  const int n = topology.n;
  std::map<std::pair<int, int>, detail::ArcMap> per_commodity;
  for (const auto& [key, flow] : plan.relay) {
    if (flow < -detail::kFlowTol)
      fail(Errc::NegativeFlow, "relay flow for commodity (" +
                                   std::to_string(key.i + 1) + "," +
                                   std::to_string(key.j + 1) + ") arc (" +
                                   std::to_string(key.k + 1) + "," +
                                   std::to_string(key.l + 1) + ") is negative");
    if (flow <= detail::kFlowTol) continue;
    per_commodity[{key.i, key.j}][{key.k, key.l}] += flow;
  }

  Decomposition out;
  for (auto& [commodity, arcs] : per_commodity)
    detail::decompose_commodity(commodity.first, commodity.second,
                                std::move(arcs), n, out);
  return out;
}

/// Round a fractional plan down to integers without leaving the feasible
/// set: each decomposed path is floored individually and re-aggregated, so
/// per-node conservation survives (flooring arcs independently does not).
/// Local calls are floored directly; usages and the objective are
/// recomputed from the rounded values.
inline AdmissionPlan round_plan(const AdmissionPlan& plan, const Scenario& sc) {
  const Decomposition dec = decompose(plan, sc.topology);
  if (dec.loops.residual_flow > 1e-9)
    fail(Errc::UndecomposableResidual,
         "plan contains " + std::to_string(dec.loops.residual_flow) +
             " units of loop flow; inspect the loop report before rounding");

  const int n = sc.n();
  AdmissionPlan out;
  out.admitted = Matrix<double>(n, n, 0.0);
  for (int i = 0; i < n; ++i)
    out.admitted(i, i) = std::floor(plan.admitted(i, i) + 1e-9);
  for (const SignalingPath& p : dec.paths) {
    const double f = std::floor(p.flow + 1e-9);
    if (f <= 0) continue;
    out.admitted(p.origin, p.dest) += f;
    for (std::size_t h = 0; h + 1 < p.nodes.size(); ++h)
      out.relay[RelayKey{p.origin, p.dest, p.nodes[h], p.nodes[h + 1]}] += f;
  }
  recompute_usage(out, sc);
  out.objective = plan_objective(out, sc);
  return out;
}

}  // namespace lbcac
