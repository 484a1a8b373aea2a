// lbcac — plan, calibrate, sweep and simulate call admission over a SIP
// server topology. See README.md for file formats and examples.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lbcac/lbcac.hpp"

namespace {

// "gamma:phi[,gamma:phi...]"
std::vector<lbcac::ObjectiveWeights> parse_weight_list(const std::string& s) {
  std::vector<lbcac::ObjectiveWeights> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t comma = s.find(',', pos);
    const std::string item =
        s.substr(pos, comma == std::string::npos ? std::string::npos
                                                 : comma - pos);
    const std::size_t colon = item.find(':');
    if (item.empty() || colon == std::string::npos)
      lbcac::fail(lbcac::Errc::InvalidArgument,
                  "weights must look like gamma:phi[,gamma:phi...], got '" +
                      s + "'");
    try {
      out.push_back(lbcac::ObjectiveWeights{std::stod(item.substr(0, colon)),
                                            std::stod(item.substr(colon + 1))});
    } catch (const std::exception&) {
      lbcac::fail(lbcac::Errc::InvalidArgument,
                  "cannot parse weight pair '" + item + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"load-balanced call admission control toolkit"};
  app.require_subcommand(1);

  std::string scenario, dataset, out_dir = "out", weights_arg, target = "both";
  int slots = 10, max_hops = 0;
  std::uint64_t seed = 1;
  double overhead = 0.0;
  bool hold_on = false, oracle_check = false;

  auto* calibrate = app.add_subcommand(
      "calibrate", "fit per-call cost coefficients to a measurement dataset");
  calibrate->add_option("--dataset", dataset, "measurement CSV")->required();
  calibrate->add_option("--target", target, "cpu, mem or both");
  calibrate->add_option("--out", out_dir, "output directory (optional)");

  auto* plan = app.add_subcommand(
      "plan", "solve one admission problem and write the plan reports");
  plan->add_option("--scenario", scenario, "scenario JSON file")->required();
  plan->add_option("--out", out_dir, "output directory");
  plan->add_option("--weights", weights_arg, "gamma:phi override");
  plan->add_option("--max-hops", max_hops,
                   "path length cap for --oracle-check (default n-1)");
  plan->add_flag("--oracle-check", oracle_check,
                 "cross-check the optimum against the path-enumeration "
                 "reference and fail on mismatch");

  auto* sweep = app.add_subcommand(
      "sweep", "solve the scenario across a list of weight pairs");
  sweep->add_option("--scenario", scenario, "scenario JSON file")->required();
  sweep->add_option("--out", out_dir, "output directory");
  sweep->add_option("--weights", weights_arg,
                    "gamma:phi,gamma:phi,... (default 0.25:1,1:1,4:1,16:1)");

  auto* simulate = app.add_subcommand(
      "simulate", "run the duty-cycle simulation and write the slot log");
  simulate->add_option("--scenario", scenario, "scenario JSON file")
      ->required();
  simulate->add_option("--out", out_dir, "output directory");
  simulate->add_option("--slots", slots, "number of slots");
  simulate->add_option("--seed", seed, "RNG seed");
  simulate->add_option("--overhead", overhead,
                       "expected service-failure fraction of admitted calls");
  simulate->add_flag("--hold-on", hold_on,
                     "re-queue blocked calls into the next slot");
  simulate->add_option("--weights", weights_arg, "gamma:phi override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    std::optional<lbcac::ObjectiveWeights> override_w;
    std::vector<lbcac::ObjectiveWeights> weight_list;
    if (!weights_arg.empty()) {
      weight_list = parse_weight_list(weights_arg);
      if (weight_list.size() == 1) override_w = weight_list.front();
    }

    if (calibrate->parsed())
      return lbcac::cmd_calibrate(dataset, target,
                                  calibrate->count("--out") ? out_dir : "",
                                  std::cout, std::cerr);
    if (plan->parsed()) {
      if (weight_list.size() > 1)
        lbcac::fail(lbcac::Errc::InvalidArgument,
                    "plan takes a single gamma:phi pair");
      return lbcac::cmd_plan(scenario, out_dir,
                             override_w ? &*override_w : nullptr, oracle_check,
                             max_hops, std::cout, std::cerr);
    }
    if (sweep->parsed())
      return lbcac::cmd_sweep(scenario, out_dir, weight_list, std::cout,
                              std::cerr);
    if (simulate->parsed()) {
      if (weight_list.size() > 1)
        lbcac::fail(lbcac::Errc::InvalidArgument,
                    "simulate takes a single gamma:phi pair");
      return lbcac::cmd_simulate(scenario, out_dir, slots, seed, overhead,
                                 hold_on, override_w ? &*override_w : nullptr,
                                 std::cout, std::cerr);
    }
  } catch (const lbcac::Error& e) {
    std::cerr << "lbcac: " << e.what() << "\n";
    return lbcac::exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "lbcac: unexpected error: " << e.what() << "\n";
    return 4;
  }
  return 2;
}
