#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "lbcac/error.hpp"
#include "lbcac/lp.hpp"
#include "lbcac/model.hpp"
#include "lbcac/rng.hpp"

namespace lbcac {

/// Result of fitting one coefficient pair (alpha or beta) to a dataset.
struct CalibrationResult {
  double c1 = 0.0;            // per-local-call cost
  double c2 = 0.0;            // per-relayed-call cost
  std::vector<double> residuals;  // one-sided slack per sample
  double objective = 0.0;     // sum of residuals
};

namespace detail {

// Shared fit: minimize sum of one-sided residuals
//     usage_q - (c1 * local_q + c2 * relayed_q) <= x_q,   x_q, c1, c2 >= 0
// with the pair pinned by c1 + c2 = max(usage) / max(local). Only
// under-prediction costs anything; a fit above a measured point is free.
inline CalibrationResult fit_pair(const std::vector<MeasurementSample>& data,
                                  double MeasurementSample::*usage,
                                  const char* what) {
  if (data.empty()) fail(Errc::EmptyDataset, "calibration dataset is empty");
  double max_local = 0.0, max_usage = 0.0;
  for (const MeasurementSample& s : data) {
    if (s.local_calls < 0 || s.relayed_calls < 0 || s.*usage < 0)
      fail(Errc::NegativeEntry, "negative measurement in dataset");
    max_local = std::max(max_local, s.local_calls);
    max_usage = std::max(max_usage, s.*usage);
  }
  if (max_local <= 0.0)
    fail(Errc::ZeroLocalCalls,
         std::string("cannot normalize ") + what +
             " fit: no sample has local calls > 0");
  const double pinned_sum = max_usage / max_local;

  LinearProgram lp;
  lp.sense = Sense::Minimize;
  const int c1 = lp.add_var("c1");
  const int c2 = lp.add_var("c2");
  std::vector<int> xs(data.size());
  for (std::size_t q = 0; q < data.size(); ++q)
    xs[q] = lp.add_var("x" + std::to_string(q + 1), 1.0);
  for (std::size_t q = 0; q < data.size(); ++q) {
    const MeasurementSample& s = data[q];
    lp.add_row(Rel::Le, -(s.*usage),
               {{c1, -s.local_calls}, {c2, -s.relayed_calls}, {xs[q], -1.0}},
               "fit" + std::to_string(q + 1));
  }
  lp.add_row(Rel::Eq, pinned_sum, {{c1, 1.0}, {c2, 1.0}}, "norm");

  const LpSolution sol = solve(lp);
  if (sol.status != LpStatus::Optimal)
    fail(Errc::SolverFailure, std::string("calibration LP for ") + what +
                                  " did not reach an optimum");

  CalibrationResult res;
  res.c1 = std::max(0.0, sol.x[c1]);
  res.c2 = std::max(0.0, sol.x[c2]);
  res.residuals.resize(data.size());
  res.objective = 0.0;
  for (std::size_t q = 0; q < data.size(); ++q) {
    res.residuals[q] = std::max(0.0, sol.x[xs[q]]);
    res.objective += res.residuals[q];
  }
  return res;
}

}  // namespace detail

/// Fit (alpha1, alpha2) to measured CPU usage.
inline CalibrationResult estimate_cpu_coeffs(
    const std::vector<MeasurementSample>& data) {
  return detail::fit_pair(data, &MeasurementSample::cpu_used, "cpu");
}

/// Fit (beta1, beta2) to measured memory usage.
inline CalibrationResult estimate_mem_coeffs(
    const std::vector<MeasurementSample>& data) {
  return detail::fit_pair(data, &MeasurementSample::mem_used, "mem");
}

/// Deterministic stand-in for a measured dataset. The first sample is an
/// anchor with local == relayed == 256 and exact usages, which makes the
/// normalization ratio of the fit equal the true coefficient sum (256 is a
/// power of two, so the ratio computes exactly). Two fixed samples with
/// local > relayed and relayed > local pin the split between c1 and c2;
/// the rest are uniform draws. One-sided noise (uniform in
/// [0, noise_level]) is added to every non-anchor usage.
inline std::vector<MeasurementSample> generate_synthetic_dataset(
    const CostCoefficients& truth, int h, std::uint64_t seed,
    double noise_level) {
  if (h < 1) fail(Errc::InvalidArgument, "sample count must be >= 1");
  if (noise_level < 0) fail(Errc::InvalidNoise, "noise_level must be >= 0");
  if (truth.alpha1 < 0 || truth.alpha2 < 0 || truth.beta1 < 0 ||
      truth.beta2 < 0)
    fail(Errc::NegativeEntry, "true coefficients must be nonnegative");

  constexpr double kAnchor = 256.0;
  auto usage = [&](double local, double relayed, double a, double b) {
    return a * local + b * relayed;
  };

  SeededRng rng(seed);
  std::vector<MeasurementSample> data;
  data.reserve(static_cast<std::size_t>(h));

  data.push_back({kAnchor, kAnchor,
                  usage(kAnchor, kAnchor, truth.alpha1, truth.alpha2),
                  usage(kAnchor, kAnchor, truth.beta1, truth.beta2)});

  auto push_noisy = [&](double local, double relayed) {
    const double eps_p = noise_level > 0 ? rng.uniform(0.0, noise_level) : 0.0;
    const double eps_m = noise_level > 0 ? rng.uniform(0.0, noise_level) : 0.0;
    data.push_back({local, relayed,
                    usage(local, relayed, truth.alpha1, truth.alpha2) + eps_p,
                    usage(local, relayed, truth.beta1, truth.beta2) + eps_m});
  };

  if (h >= 2) push_noisy(kAnchor, 0.0);       // local-heavy
  if (h >= 3) push_noisy(kAnchor / 2, kAnchor);  // relay-heavy
  for (int q = 3; q < h; ++q)
    push_noisy(rng.uniform(1.0, kAnchor), rng.uniform(0.0, kAnchor));
  return data;
}

}  // namespace lbcac
