#pragma once

#include <cmath>
#include <compare>
#include <map>
#include <string>
#include <vector>

#include "lbcac/error.hpp"
#include "lbcac/matrix.hpp"

namespace lbcac {

// ---------------------------------------------------------------------------
// Domain types. Everything is a plain value object; invariants are enforced
// by the validate_* functions and, for plans, re-checkable via verify_plan.
// Node indices are 0-based internally; file formats and reports are 1-based.
// ---------------------------------------------------------------------------

/// Server topology: symmetric 0/1 adjacency with a zero diagonal.
struct Topology {
  int n = 0;
  Matrix<int> adj;

  bool linked(int k, int l) const { return adj(k, l) != 0; }

  int degree(int v) const {
    int d = 0;
    for (int u = 0; u < n; ++u) d += adj(v, u);
    return d;
  }
};

/// Requested calls per slot. Diagonal entries are local calls, off-diagonal
/// entries are outbound calls from row-server to column-server.
struct DemandMatrix {
  Matrix<double> demand;

  double total() const {
    double s = 0;
    for (double v : demand.data()) s += v;
    return s;
  }
};

/// Remaining CPU and memory per server.
struct ResourceCaps {
  std::vector<double> cpu;
  std::vector<double> mem;

  double cpu_total() const {
    double s = 0;
    for (double v : cpu) s += v;
    return s;
  }
  double mem_total() const {
    double s = 0;
    for (double v : mem) s += v;
    return s;
  }
};

/// Per-call resource cost: *1 applies to a server's local calls, *2 to every
/// unit of relayed flow touching the server (once per incident arc).
struct CostCoefficients {
  double alpha1 = 0, alpha2 = 0;  // CPU
  double beta1 = 0, beta2 = 0;    // memory
};

/// Trade-off between admitting calls (gamma) and preserving resources (phi).
struct ObjectiveWeights {
  double gamma = 1.0;
  double phi = 1.0;
};

/// Relay variable key: flow of commodity (i -> j) carried over arc (k -> l).
struct RelayKey {
  int i = 0, j = 0, k = 0, l = 0;
  auto operator<=>(const RelayKey&) const = default;
};

/// Decision variables of a solved admission problem. `relay` is sparse and
/// holds only strictly positive flows on admissible arcs.
struct AdmissionPlan {
  Matrix<double> admitted;             // n x n
  std::map<RelayKey, double> relay;    // (i,j,k,l) -> flow
  std::vector<double> cpu_use;         // p_l
  std::vector<double> mem_use;         // m_l
  double objective = 0.0;

  double total_admitted() const {
    double s = 0;
    for (double v : admitted.data()) s += v;
    return s;
  }
};

/// One row of a calibration dataset.
struct MeasurementSample {
  double local_calls = 0;    // local calls established during the probe
  double relayed_calls = 0;  // outbound/relayed calls during the probe
  double cpu_used = 0;
  double mem_used = 0;
};

/// Controller duty-cycle phase durations. gather + compute + notify + idle
/// must equal the slot length tau.
struct DutyCycleTiming {
  double tau = 3.0;
  double t_gather = 0.5;
  double t_compute = 1.0;
  double t_notify = 0.5;
  double t_idle = 1.0;
};

/// A validated problem instance: everything the planner needs for one slot.
struct Scenario {
  Topology topology;
  DemandMatrix demand;
  ResourceCaps caps;
  CostCoefficients coeffs;
  ObjectiveWeights weights;

  int n() const { return topology.n; }
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

inline Topology validate_topology(const Matrix<int>& adj) {
  if (adj.empty()) fail(Errc::EmptyMatrix, "adjacency matrix is empty");
  if (!adj.square())
    fail(Errc::DimensionMismatch, "adjacency matrix is not square");
  const int n = adj.rows();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int v = adj(i, j);
      if (v != 0 && v != 1)
        fail(Errc::NonBinaryEntry, "adjacency[" + std::to_string(i + 1) + "][" +
                                       std::to_string(j + 1) + "] = " +
                                       std::to_string(v));
      if (i == j && v != 0)
        fail(Errc::NonZeroDiagonal,
             "adjacency[" + std::to_string(i + 1) + "][" +
                 std::to_string(i + 1) + "] must be 0");
      if (adj(i, j) != adj(j, i))
        fail(Errc::NotSymmetric, "adjacency[" + std::to_string(i + 1) + "][" +
                                     std::to_string(j + 1) +
                                     "] != adjacency[" + std::to_string(j + 1) +
                                     "][" + std::to_string(i + 1) + "]");
    }
  }
  return Topology{n, adj};
}

inline Scenario validate_scenario(const Topology& topology,
                                  const DemandMatrix& demand,
                                  const ResourceCaps& caps,
                                  const CostCoefficients& coeffs,
                                  const ObjectiveWeights& weights) {
  const int n = topology.n;
  if (demand.demand.rows() != n || demand.demand.cols() != n)
    fail(Errc::DimensionMismatch, "demand matrix must be " +
                                      std::to_string(n) + "x" +
                                      std::to_string(n));
  if (static_cast<int>(caps.cpu.size()) != n ||
      static_cast<int>(caps.mem.size()) != n)
    fail(Errc::DimensionMismatch,
         "resource cap vectors must have length " + std::to_string(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (demand.demand(i, j) < 0)
        fail(Errc::NegativeEntry, "demand[" + std::to_string(i + 1) + "][" +
                                      std::to_string(j + 1) + "] is negative");
    }
  }
  for (int l = 0; l < n; ++l) {
    if (caps.cpu[l] < 0)
      fail(Errc::NegativeEntry,
           "cpu_caps[" + std::to_string(l + 1) + "] is negative");
    if (caps.mem[l] < 0)
      fail(Errc::NegativeEntry,
           "mem_caps[" + std::to_string(l + 1) + "] is negative");
  }
  if (coeffs.alpha1 < 0 || coeffs.alpha2 < 0 || coeffs.beta1 < 0 ||
      coeffs.beta2 < 0)
    fail(Errc::NegativeEntry, "cost coefficients must be nonnegative");
  if (coeffs.alpha1 + coeffs.alpha2 <= 0 && coeffs.beta1 + coeffs.beta2 <= 0)
    fail(Errc::DegenerateCoefficients,
         "all cost coefficients are zero; calls would be free");
  if (weights.gamma < 0 || weights.phi < 0)
    fail(Errc::NegativeEntry, "objective weights must be nonnegative");
  if (weights.gamma + weights.phi <= 0)
    fail(Errc::DegenerateWeights, "gamma + phi must be positive");
  return Scenario{topology, demand, caps, coeffs, weights};
}

inline DutyCycleTiming validate_timing(const DutyCycleTiming& t) {
  if (t.tau < 0 || t.t_gather < 0 || t.t_compute < 0 || t.t_notify < 0 ||
      t.t_idle < 0)
    fail(Errc::NegativeEntry, "duty-cycle durations must be nonnegative");
  const double sum = t.t_gather + t.t_compute + t.t_notify + t.t_idle;
  if (std::abs(sum - t.tau) > 1e-9)
    fail(Errc::InvalidArgument,
         "duty-cycle phases must sum to tau (got " + std::to_string(sum) +
             " vs tau = " + std::to_string(t.tau) + ")");
  return t;
}

// ---------------------------------------------------------------------------
// Bundled constants
// ---------------------------------------------------------------------------

/// The 6-server topology used by the bundled scenario fixtures. Undirected
/// edges (1-based): 1-2, 1-3, 2-3, 2-4, 3-5, 4-5, 4-6, 5-6.
inline Topology canonical6() {
  Matrix<int> adj(6, 6, 0);
  const int edges[8][2] = {{0, 1}, {0, 2}, {1, 2}, {1, 3},
                           {2, 4}, {3, 4}, {3, 5}, {4, 5}};
  for (auto& e : edges) {
    adj(e[0], e[1]) = 1;
    adj(e[1], e[0]) = 1;
  }
  return validate_topology(adj);
}

/// Cost coefficients calibrated against the bundled reference dataset
/// (Intel dual-core / 512 MB class servers); used as fixture defaults.
inline CostCoefficients reference_coefficients() {
  return CostCoefficients{0.074104, 0.025896, 0.327393, 0.184607};
}

}  // namespace lbcac
