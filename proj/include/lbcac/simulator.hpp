#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <vector>

#include "lbcac/admission.hpp"
#include "lbcac/error.hpp"
#include "lbcac/flowpaths.hpp"
#include "lbcac/model.hpp"
#include "lbcac/rng.hpp"

namespace lbcac {

/// Bookkeeping for one controller slot. All call counts are integers
/// (demands are floored on observation, plans are rounded before they are
/// applied). serviced + blocked == observed, entrywise.
struct SlotRecord {
  int slot = 0;
  Matrix<double> observed;   // gathered demand, integer-valued
  AdmissionPlan plan;        // rounded plan applied this slot
  Matrix<long long> serviced;
  Matrix<long long> blocked;
  Matrix<long long> held_next;  // blocked calls re-queued to the next slot
  std::vector<double> cpu_used, mem_used;  // recomputed from serviced calls
  double compute_time = 0.0;  // seconds spent planning this slot (t_c)
  long long queue_in = 0;     // held calls carried into this slot

  long long serviced_total() const {
    long long s = 0;
    for (long long v : serviced.data()) s += v;
    return s;
  }
  long long blocked_total() const {
    long long s = 0;
    for (long long v : blocked.data()) s += v;
    return s;
  }
  long long admitted_total() const {
    return static_cast<long long>(std::llround(plan.total_admitted()));
  }
};

struct SimOptions {
  // Expected fraction of admitted calls that fail in service anyway
  // (unmodeled per-call overhead on real servers). Applied as a seeded
  // Bernoulli thinning per admitted call.
  double overhead_factor = 0.0;
  // Re-queue blocked calls into the next slot's demand instead of dropping
  // them. The queue is unbounded and drains FIFO as capacity allows.
  bool hold_on = false;
  // Optional per-slot relative perturbation of the base demand, uniform in
  // [1-jitter, 1+jitter] per entry. Zero keeps the demand constant.
  double demand_jitter = 0.0;
};

/// Deterministic duty-cycle simulation: gather -> plan -> apply, once per
/// slot. The same (scenario, timing, slots, seed, options) always produces
/// identical records. Consecutive slots that gather identical demand reuse
/// the previous plan; the solve is deterministic so the result is the same,
/// and compute_time reports the work actually done in the slot.
inline std::vector<SlotRecord> run(const Scenario& sc,
                                   const DutyCycleTiming& timing,
                                   int num_slots, std::uint64_t seed,
                                   const SimOptions& opt = {}) {
  validate_timing(timing);
  if (num_slots < 1) fail(Errc::InvalidArgument, "num_slots must be >= 1");
  if (opt.overhead_factor < 0 || opt.overhead_factor > 1)
    fail(Errc::InvalidArgument, "overhead_factor must be in [0, 1]");
  if (opt.demand_jitter < 0)
    fail(Errc::InvalidArgument, "demand_jitter must be >= 0");

  const int n = sc.n();
  SeededRng rng(seed);
  Matrix<long long> held(n, n, 0);

  Matrix<double> cached_observed;
  AdmissionPlan cached_plan;
  bool have_cache = false;

  std::vector<SlotRecord> records;
  records.reserve(static_cast<std::size_t>(num_slots));

  for (int slot = 0; slot < num_slots; ++slot) {
    SlotRecord rec;
    rec.slot = slot;

    rec.observed = Matrix<double>(n, n, 0.0);
    rec.queue_in = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double base = sc.demand.demand(i, j);
        if (opt.demand_jitter > 0)
          base *= rng.uniform(1.0 - opt.demand_jitter, 1.0 + opt.demand_jitter);
        rec.observed(i, j) =
            std::floor(std::max(0.0, base) + 1e-9) + static_cast<double>(held(i, j));
        rec.queue_in += held(i, j);
      }
    }

    const auto t0 = std::chrono::steady_clock::now();
    if (!have_cache || !(cached_observed == rec.observed)) {
      Scenario slot_sc = sc;
      slot_sc.demand.demand = rec.observed;
      cached_plan = round_plan(solve_admission(slot_sc), slot_sc);
      cached_observed = rec.observed;
      have_cache = true;
    }
    rec.plan = cached_plan;
    rec.compute_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();

    rec.serviced = Matrix<long long>(n, n, 0);
    rec.blocked = Matrix<long long>(n, n, 0);
    rec.held_next = Matrix<long long>(n, n, 0);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const long long observed = static_cast<long long>(rec.observed(i, j));
        const long long admitted =
            static_cast<long long>(std::llround(rec.plan.admitted(i, j)));
        long long failures = 0;
        if (opt.overhead_factor > 0) {
          for (long long c = 0; c < admitted; ++c)
            failures += rng.bernoulli(opt.overhead_factor) ? 1 : 0;
        }
        rec.serviced(i, j) = admitted - failures;
        rec.blocked(i, j) = observed - rec.serviced(i, j);
        if (opt.hold_on) rec.held_next(i, j) = rec.blocked(i, j);
      }
    }

    // Resource usage caused by the calls actually serviced: relay flows are
    // scaled per commodity by serviced/admitted, local calls count directly.
    {
      AdmissionPlan srv;
      srv.admitted = Matrix<double>(n, n, 0.0);
      for (int i = 0; i < n; ++i)
        srv.admitted(i, i) = static_cast<double>(rec.serviced(i, i));
      for (const auto& [key, flow] : rec.plan.relay) {
        const double admitted = rec.plan.admitted(key.i, key.j);
        const double factor =
            admitted > 0
                ? static_cast<double>(rec.serviced(key.i, key.j)) / admitted
                : 0.0;
        if (flow * factor > 0) srv.relay[key] = flow * factor;
      }
      recompute_usage(srv, sc);
      rec.cpu_used = srv.cpu_use;
      rec.mem_used = srv.mem_use;
    }

    held = rec.held_next;
    records.push_back(std::move(rec));
  }
  return records;
}

inline std::vector<SlotRecord> run(const Scenario& sc,
                                   const DutyCycleTiming& timing,
                                   int num_slots, std::uint64_t seed,
                                   double overhead_factor) {
  SimOptions opt;
  opt.overhead_factor = overhead_factor;
  return run(sc, timing, num_slots, seed, opt);
}

/// Calls this record re-queues into the next slot under the hold-on policy
/// (zero when the policy is off or nothing was blocked).
inline long long hold_on_accounting(const SlotRecord& rec) {
  long long held = 0;
  for (long long v : rec.held_next.data()) held += v;
  return held;
}

}  // namespace lbcac
