#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lbcac/error.hpp"
#include "lbcac/flowpaths.hpp"
#include "lbcac/model.hpp"
#include "lbcac/simulator.hpp"

namespace lbcac {

// All file formats index servers 1-based to match the report conventions;
// the in-memory model is 0-based.

/// Compact decimal rendering, stable across platforms (what keeps reruns
/// byte-identical).
inline std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

namespace detail {

inline std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::ParseError, "cannot open " + path.string());
  return in;
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) fail(Errc::ParseError, "cannot write " + path.string());
  return out;
}

inline Matrix<double> read_square(const nlohmann::json& j, const char* key,
                                  int n) {
  const auto& arr = j.at(key);
  if (!arr.is_array() || static_cast<int>(arr.size()) != n * n)
    fail(Errc::ParseError, std::string(key) + " must be a row-major array of " +
                               std::to_string(n * n) + " numbers");
  Matrix<double> m(n, n, 0.0);
  for (int idx = 0; idx < n * n; ++idx) {
    const auto& v = arr[idx];
    if (!v.is_number())
      fail(Errc::ParseError,
           std::string(key) + "[" + std::to_string(idx / n + 1) + "][" +
               std::to_string(idx % n + 1) + "] is not a number");
    m(idx / n, idx % n) = v.get<double>();
  }
  return m;
}

inline std::vector<double> read_vector(const nlohmann::json& j,
                                       const char* key, int n) {
  const auto& arr = j.at(key);
  if (!arr.is_array() || static_cast<int>(arr.size()) != n)
    fail(Errc::ParseError, std::string(key) + " must be an array of " +
                               std::to_string(n) + " numbers");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int idx = 0; idx < n; ++idx) {
    const auto& v = arr[idx];
    if (!v.is_number())
      fail(Errc::ParseError, std::string(key) + "[" + std::to_string(idx + 1) +
                                 "] is not a number");
    out[static_cast<std::size_t>(idx)] = v.get<double>();
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Scenario files (JSON)
// ---------------------------------------------------------------------------

inline Scenario parse_scenario(const nlohmann::json& j) {
  if (!j.contains("n") || !j.at("n").is_number_integer())
    fail(Errc::ParseError, "scenario key 'n' (server count) is missing");
  const int n = j.at("n").get<int>();
  if (n < 1) fail(Errc::ParseError, "'n' must be >= 1");

  const Matrix<double> adj_raw = detail::read_square(j, "adjacency", n);
  Matrix<int> adj(n, n, 0);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      const double v = adj_raw(i, k);
      if (v != 0.0 && v != 1.0)
        fail(Errc::ParseError, "adjacency[" + std::to_string(i + 1) + "][" +
                                   std::to_string(k + 1) + "] must be 0 or 1");
      adj(i, k) = static_cast<int>(v);
    }
  }

  DemandMatrix demand{detail::read_square(j, "demand", n)};
  ResourceCaps caps{detail::read_vector(j, "cpu_caps", n),
                    detail::read_vector(j, "mem_caps", n)};

  const auto& jc = j.at("coeffs");
  CostCoefficients coeffs{jc.at("alpha1").get<double>(),
                          jc.at("alpha2").get<double>(),
                          jc.at("beta1").get<double>(),
                          jc.at("beta2").get<double>()};
  const auto& jw = j.at("weights");
  ObjectiveWeights weights{jw.at("gamma").get<double>(),
                           jw.at("phi").get<double>()};

  return validate_scenario(validate_topology(adj), demand, caps, coeffs,
                           weights);
}

inline Scenario load_scenario(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::ParseError, path.string() + ": " + e.what());
  }
  try {
    return parse_scenario(j);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::ParseError, path.string() + ": " + e.what());
  }
}

inline void save_scenario(const Scenario& sc,
                          const std::filesystem::path& path) {
  const int n = sc.n();
  nlohmann::json j;
  j["n"] = n;
  std::vector<int> adj;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) adj.push_back(sc.topology.adj(i, k));
  j["adjacency"] = adj;
  j["demand"] = sc.demand.demand.data();
  j["cpu_caps"] = sc.caps.cpu;
  j["mem_caps"] = sc.caps.mem;
  j["coeffs"] = {{"alpha1", sc.coeffs.alpha1},
                 {"alpha2", sc.coeffs.alpha2},
                 {"beta1", sc.coeffs.beta1},
                 {"beta2", sc.coeffs.beta2}};
  j["weights"] = {{"gamma", sc.weights.gamma}, {"phi", sc.weights.phi}};
  detail::open_output(path) << j.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// Calibration dataset files (CSV)
// ---------------------------------------------------------------------------

inline std::vector<MeasurementSample> load_dataset_csv(
    const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  std::string line;
  if (!std::getline(in, line))
    fail(Errc::EmptyDataset, path.string() + " is empty");
  // tolerate a UTF-8 BOM and trailing CR
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0)
    line.erase(0, 3);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "local_calls,relayed_calls,cpu_used,mem_used")
    fail(Errc::ParseError,
         path.string() + ": expected header "
                         "'local_calls,relayed_calls,cpu_used,mem_used'");

  std::vector<MeasurementSample> data;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    MeasurementSample s;
    double* fields[4] = {&s.local_calls, &s.relayed_calls, &s.cpu_used,
                         &s.mem_used};
    std::stringstream ss(line);
    std::string cell;
    for (int f = 0; f < 4; ++f) {
      if (!std::getline(ss, cell, ','))
        fail(Errc::ParseError, path.string() + ":" + std::to_string(line_no) +
                                   ": expected 4 comma-separated fields");
      try {
        *fields[f] = std::stod(cell);
      } catch (const std::exception&) {
        fail(Errc::ParseError, path.string() + ":" + std::to_string(line_no) +
                                   ": '" + cell + "' is not a number");
      }
    }
    data.push_back(s);
  }
  if (data.empty())
    fail(Errc::EmptyDataset, path.string() + " contains no samples");
  return data;
}

inline void save_dataset_csv(const std::vector<MeasurementSample>& data,
                             const std::filesystem::path& path) {
  auto out = detail::open_output(path);
  out << "local_calls,relayed_calls,cpu_used,mem_used\n";
  for (const MeasurementSample& s : data)
    out << fmt_num(s.local_calls) << "," << fmt_num(s.relayed_calls) << ","
        << fmt_num(s.cpu_used) << "," << fmt_num(s.mem_used) << "\n";
}

// ---------------------------------------------------------------------------
// Plan reports (CSV + JSON summary)
// ---------------------------------------------------------------------------

inline void write_admitted_csv(const Scenario& sc, const AdmissionPlan& plan,
                               const std::filesystem::path& path) {
  auto out = detail::open_output(path);
  out << "i,j,demanded,admitted\n";
  for (int i = 0; i < sc.n(); ++i)
    for (int j = 0; j < sc.n(); ++j)
      out << (i + 1) << "," << (j + 1) << "," << fmt_num(sc.demand.demand(i, j))
          << "," << fmt_num(plan.admitted(i, j)) << "\n";
}

inline void write_relay_csv(const AdmissionPlan& plan,
                            const std::filesystem::path& path) {
  auto out = detail::open_output(path);
  out << "i,j,k,l,flow\n";
  for (const auto& [key, flow] : plan.relay)
    out << (key.i + 1) << "," << (key.j + 1) << "," << (key.k + 1) << ","
        << (key.l + 1) << "," << fmt_num(flow) << "\n";
}

inline void write_resources_csv(const Scenario& sc, const AdmissionPlan& plan,
                                const std::filesystem::path& path) {
  auto out = detail::open_output(path);
  out << "l,p,P,m,M\n";
  for (int l = 0; l < sc.n(); ++l)
    out << (l + 1) << "," << fmt_num(plan.cpu_use[l]) << ","
        << fmt_num(sc.caps.cpu[l]) << "," << fmt_num(plan.mem_use[l]) << ","
        << fmt_num(sc.caps.mem[l]) << "\n";
}

inline std::string path_to_string(const std::vector<int>& nodes) {
  std::string s;
  for (std::size_t h = 0; h < nodes.size(); ++h) {
    if (h) s += '-';
    s += std::to_string(nodes[h] + 1);
  }
  return s;
}

inline void write_paths_csv(const Decomposition& dec,
                            const std::filesystem::path& path) {
  auto out = detail::open_output(path);
  out << "origin,destination,path,flow\n";
  for (const SignalingPath& p : dec.paths)
    out << (p.origin + 1) << "," << (p.dest + 1) << ","
        << path_to_string(p.nodes) << "," << fmt_num(p.flow) << "\n";
}

inline nlohmann::json plan_summary_json(const Scenario& sc,
                                        const AdmissionPlan& plan) {
  const double demanded = sc.demand.total();
  const double admitted = plan.total_admitted();
  double p_sum = 0, m_sum = 0;
  for (double v : plan.cpu_use) p_sum += v;
  for (double v : plan.mem_use) m_sum += v;
  nlohmann::json j;
  j["objective"] = plan.objective;
  j["weights"] = {{"gamma", sc.weights.gamma}, {"phi", sc.weights.phi}};
  j["total_demanded"] = demanded;
  j["total_admitted"] = admitted;
  j["admission_rate"] = demanded > 0 ? admitted / demanded : 1.0;
  j["cpu_used_total"] = p_sum;
  j["mem_used_total"] = m_sum;
  return j;
}

inline void write_plan_summary(const Scenario& sc, const AdmissionPlan& plan,
                               const std::filesystem::path& path) {
  detail::open_output(path) << plan_summary_json(sc, plan).dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// Simulation run log (CSV, one row per slot)
// ---------------------------------------------------------------------------

inline void write_runlog_csv(const std::vector<SlotRecord>& records,
                             const std::filesystem::path& path) {
  auto out = detail::open_output(path);
  out << "slot,observed,admitted,serviced,blocked,held_next,queue_in,"
         "cpu_used,mem_used,compute_time\n";
  for (const SlotRecord& r : records) {
    double observed = 0;
    for (double v : r.observed.data()) observed += v;
    double cpu = 0, mem = 0;
    for (double v : r.cpu_used) cpu += v;
    for (double v : r.mem_used) mem += v;
    out << r.slot << "," << fmt_num(observed) << "," << r.admitted_total()
        << "," << r.serviced_total() << "," << r.blocked_total() << ","
        << hold_on_accounting(r) << "," << r.queue_in << "," << fmt_num(cpu)
        << "," << fmt_num(mem) << "," << fmt_num(r.compute_time) << "\n";
  }
}

}  // namespace lbcac
