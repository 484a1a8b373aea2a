#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

#include "lbcac/admission.hpp"
#include "lbcac/calibration.hpp"
#include "lbcac/error.hpp"
#include "lbcac/flowpaths.hpp"
#include "lbcac/io.hpp"
#include "lbcac/model.hpp"
#include "lbcac/oracle.hpp"
#include "lbcac/simulator.hpp"

namespace lbcac {

inline int exit_code_for(const Error& e) {
  switch (e.category()) {
    case ErrorCategory::Input: return 2;
    case ErrorCategory::Domain: return 3;
    case ErrorCategory::Solver: return 4;
  }
  return 4;
}

/// Default trade-off sweep shipped with the toolkit, labeled f1..f4 in
/// reports. These are repo defaults chosen to span the admit-nothing to
/// admit-everything range on the bundled fixtures; the reference study did
/// not publish its weight values.
inline std::vector<ObjectiveWeights> default_sweep_weights() {
  return {{0.25, 1.0}, {1.0, 1.0}, {4.0, 1.0}, {16.0, 1.0}};
}

namespace detail {

struct SweepPoint {
  ObjectiveWeights w;
  double admitted = 0, demanded = 0, p_sum = 0, m_sum = 0;
  AdmissionPlan plan;
};

inline double weight_ratio(const ObjectiveWeights& w) {
  return w.phi > 0 ? w.gamma / w.phi : kInf;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// calibrate
// ---------------------------------------------------------------------------

inline int cmd_calibrate(const std::filesystem::path& dataset_path,
                         const std::string& target,
                         const std::filesystem::path& out_dir,
                         std::ostream& out, std::ostream& err) {
  try {
    if (target != "cpu" && target != "mem" && target != "both")
      fail(Errc::InvalidArgument, "target must be cpu, mem or both");
    const auto data = load_dataset_csv(dataset_path);
    nlohmann::json summary;
    summary["samples"] = data.size();
    if (target == "cpu" || target == "both") {
      const CalibrationResult r = estimate_cpu_coeffs(data);
      out << "alpha1 = " << fmt_num(r.c1) << "\nalpha2 = " << fmt_num(r.c2)
          << "\ncpu residual sum = " << fmt_num(r.objective) << "\n";
      summary["alpha1"] = r.c1;
      summary["alpha2"] = r.c2;
      summary["cpu_residual_sum"] = r.objective;
    }
    if (target == "mem" || target == "both") {
      const CalibrationResult r = estimate_mem_coeffs(data);
      out << "beta1 = " << fmt_num(r.c1) << "\nbeta2 = " << fmt_num(r.c2)
          << "\nmem residual sum = " << fmt_num(r.objective) << "\n";
      summary["beta1"] = r.c1;
      summary["beta2"] = r.c2;
      summary["mem_residual_sum"] = r.objective;
    }
    if (!out_dir.empty())
      detail::open_output(out_dir / "coefficients.json")
          << summary.dump(2) << "\n";
    return 0;
  } catch (const Error& e) {
    err << "calibrate: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

// ---------------------------------------------------------------------------
// plan
// ---------------------------------------------------------------------------

inline int cmd_plan(const std::filesystem::path& scenario_path,
                    const std::filesystem::path& out_dir,
                    const ObjectiveWeights* weights_override, bool oracle_check,
                    int max_hops, std::ostream& out, std::ostream& err) {
  try {
    Scenario sc = load_scenario(scenario_path);
    if (weights_override)
      sc = validate_scenario(sc.topology, sc.demand, sc.caps, sc.coeffs,
                             *weights_override);

    const AdmissionPlan plan = solve_admission(sc);
    const Decomposition dec = decompose(plan, sc.topology);

    write_admitted_csv(sc, plan, out_dir / "admitted.csv");
    write_relay_csv(plan, out_dir / "relay.csv");
    write_resources_csv(sc, plan, out_dir / "resources.csv");
    write_paths_csv(dec, out_dir / "paths.csv");
    write_plan_summary(sc, plan, out_dir / "summary.json");

    const double demanded = sc.demand.total();
    const double rate = demanded > 0 ? plan.total_admitted() / demanded : 1.0;
    out << "admitted " << fmt_num(plan.total_admitted()) << " of "
        << fmt_num(demanded) << " requested calls (admission rate "
        << fmt_num(100.0 * rate) << "%)\n"
        << "objective " << fmt_num(plan.objective) << ", paths "
        << dec.paths.size() << ", loop residual "
        << fmt_num(dec.loops.residual_flow) << "\n";

    if (oracle_check) {
      const int hops = max_hops > 0 ? max_hops : sc.n() - 1;
      const PathLpResult ref = solve_path_lp(sc, hops);
      const double gap = std::abs(ref.objective - plan.objective);
      out << "oracle objective " << fmt_num(ref.objective) << " (gap "
          << fmt_num(gap) << ")\n";
      if (gap > 1e-6) {
        err << "plan: oracle cross-check failed: arc optimum "
            << fmt_num(plan.objective) << " vs path optimum "
            << fmt_num(ref.objective) << "\n";
        return 4;
      }
    }
    return 0;
  } catch (const Error& e) {
    err << "plan: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

inline int cmd_sweep(const std::filesystem::path& scenario_path,
                     const std::filesystem::path& out_dir,
                     std::vector<ObjectiveWeights> weights, std::ostream& out,
                     std::ostream& err) {
  try {
    if (weights.empty()) weights = default_sweep_weights();
    {
      std::vector<std::pair<double, double>> uniq;
      for (const auto& w : weights) uniq.emplace_back(w.gamma, w.phi);
      std::sort(uniq.begin(), uniq.end());
      uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
      if (uniq.size() < 2)
        fail(Errc::InvalidArgument,
             "sweep needs at least 2 distinct weight pairs");
    }
    std::stable_sort(weights.begin(), weights.end(),
                     [](const ObjectiveWeights& a, const ObjectiveWeights& b) {
                       return detail::weight_ratio(a) < detail::weight_ratio(b);
                     });

    const Scenario base = load_scenario(scenario_path);
    std::vector<detail::SweepPoint> points;
    for (const ObjectiveWeights& w : weights) {
      const Scenario sc = validate_scenario(base.topology, base.demand,
                                            base.caps, base.coeffs, w);
      detail::SweepPoint pt;
      pt.w = w;
      pt.plan = solve_admission(sc);
      pt.demanded = sc.demand.total();
      pt.admitted = pt.plan.total_admitted();
      for (double v : pt.plan.cpu_use) pt.p_sum += v;
      for (double v : pt.plan.mem_use) pt.m_sum += v;
      points.push_back(std::move(pt));
    }

    {
      auto adm = detail::open_output(out_dir / "sweep_admission.csv");
      adm << "case,gamma,phi,demanded,admitted,admission_rate,cpu_used_total,"
             "mem_used_total\n";
      for (std::size_t c = 0; c < points.size(); ++c) {
        const auto& pt = points[c];
        adm << "f" << (c + 1) << "," << fmt_num(pt.w.gamma) << ","
            << fmt_num(pt.w.phi) << "," << fmt_num(pt.demanded) << ","
            << fmt_num(pt.admitted) << ","
            << fmt_num(pt.demanded > 0 ? pt.admitted / pt.demanded : 1.0)
            << "," << fmt_num(pt.p_sum) << "," << fmt_num(pt.m_sum) << "\n";
      }
      auto res = detail::open_output(out_dir / "sweep_resources.csv");
      res << "case,gamma,phi,server,p,P,m,M\n";
      for (std::size_t c = 0; c < points.size(); ++c) {
        const auto& pt = points[c];
        for (int l = 0; l < base.n(); ++l)
          res << "f" << (c + 1) << "," << fmt_num(pt.w.gamma) << ","
              << fmt_num(pt.w.phi) << "," << (l + 1) << ","
              << fmt_num(pt.plan.cpu_use[l]) << "," << fmt_num(base.caps.cpu[l])
              << "," << fmt_num(pt.plan.mem_use[l]) << ","
              << fmt_num(base.caps.mem[l]) << "\n";
      }
    }

    out << "case  gamma/phi  admitted  rate%     sum_p     sum_m\n";
    for (std::size_t c = 0; c < points.size(); ++c) {
      const auto& pt = points[c];
      char line[160];
      std::snprintf(line, sizeof(line), "f%-4zu %9.4g %9.4g %6.2f %9.4g %9.4g\n",
                    c + 1, detail::weight_ratio(pt.w), pt.admitted,
                    pt.demanded > 0 ? 100.0 * pt.admitted / pt.demanded : 100.0,
                    pt.p_sum, pt.m_sum);
      out << line;
    }
    out << "reference results for the bundled demand fixtures (6-server\n"
           "deployment, P=100, M=512; reference weight values unpublished):\n"
           "  scenario1: admitted f3/f4 = 860 of 860 (rate 100%)\n"
           "  scenario2: admitted f1-f4 = 556, 1638, 2710, 2853 of 2853 "
           "(f2 rate 57.41%)\n"
           "  scenario3: admitted f1-f4 = 594, 1815, 2777, 2837 of 3188 "
           "(peak rate 89%)\n";

    // Trend assertion: total admitted and both resource sums must be
    // non-decreasing in gamma/phi (small slack for alternate optima).
    bool monotone = true;
    for (std::size_t c = 1; c < points.size(); ++c) {
      const double slack = 1e-7 * std::max(1.0, points[c].demanded);
      if (points[c].admitted < points[c - 1].admitted - slack ||
          points[c].p_sum < points[c - 1].p_sum - slack ||
          points[c].m_sum < points[c - 1].m_sum - slack)
        monotone = false;
    }
    out << "trend (admitted, sum_p, sum_m non-decreasing in gamma/phi): "
        << (monotone ? "holds" : "VIOLATED") << "\n";
    if (!monotone) {
      err << "sweep: monotone trend violated\n";
      return 3;
    }
    return 0;
  } catch (const Error& e) {
    err << "sweep: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

inline int cmd_simulate(const std::filesystem::path& scenario_path,
                        const std::filesystem::path& out_dir, int slots,
                        std::uint64_t seed, double overhead, bool hold_on,
                        const ObjectiveWeights* weights_override,
                        std::ostream& out, std::ostream& err) {
  try {
    Scenario sc = load_scenario(scenario_path);
    if (weights_override)
      sc = validate_scenario(sc.topology, sc.demand, sc.caps, sc.coeffs,
                             *weights_override);
    SimOptions opt;
    opt.overhead_factor = overhead;
    opt.hold_on = hold_on;
    const auto records = run(sc, DutyCycleTiming{}, slots, seed, opt);

    write_runlog_csv(records, out_dir / "runlog.csv");
    for (const SlotRecord& r : records) {
      char dir[32];
      std::snprintf(dir, sizeof(dir), "slot_%04d", r.slot);
      const auto slot_dir = out_dir / dir;
      Scenario slot_sc = sc;
      slot_sc.demand.demand = r.observed;
      write_admitted_csv(slot_sc, r.plan, slot_dir / "admitted.csv");
      write_relay_csv(r.plan, slot_dir / "relay.csv");
      write_resources_csv(slot_sc, r.plan, slot_dir / "resources.csv");
    }

    long long admitted = 0, serviced = 0;
    for (const SlotRecord& r : records) {
      admitted += r.admitted_total();
      serviced += r.serviced_total();
    }
    out << "                     " << slots << " slot(s), seed " << seed
        << ", overhead " << fmt_num(overhead) << "\n"
        << "admitted by planner  " << admitted << "\n"
        << "serviced             " << serviced << "\n";
    return 0;
  } catch (const Error& e) {
    err << "simulate: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

}  // namespace lbcac
