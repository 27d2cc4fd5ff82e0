#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "xcs/errors.hpp"
#include "xcs/harness.hpp"
#include "xcs/serialization.hpp"

namespace {

// Exit codes: 0 success, 2 config error, 3 capacity error, 4 numeric failure.
constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitCapacity = 3;
constexpr int kExitNumeric = 4;

// Accepts plain radians plus the forms "pi", "pi/K", and "K*pi".
double parse_angle(const std::string& raw) {
  const auto pi_pos = raw.find("pi");
  if (pi_pos == std::string::npos) {
    std::size_t used = 0;
    const double v = std::stod(raw, &used);
    if (used != raw.size()) throw xcs::ConfigError("bad angle: " + raw);
    return v;
  }
  constexpr double kPi = 3.141592653589793238462643383279502884;
  double coeff = 1.0;
  std::string head = raw.substr(0, pi_pos);
  if (!head.empty()) {
    if (head.back() == '*') head.pop_back();
    if (!head.empty()) coeff = std::stod(head);
  }
  std::string tail = raw.substr(pi_pos + 2);
  if (!tail.empty()) {
    if (tail.front() != '/') throw xcs::ConfigError("bad angle: " + raw);
    coeff /= std::stod(tail.substr(1));
  }
  return coeff * kPi;
}

void parse_grid(const std::string& spec, xcs::ScanConfig& config) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : spec) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  if (parts.size() == 1) {
    config.step = parse_angle(parts[0]);  // step over the default [0, pi/2]
  } else if (parts.size() == 3) {
    config.start = parse_angle(parts[0]);
    config.stop = parse_angle(parts[1]);
    config.step = parse_angle(parts[2]);
  } else {
    throw xcs::ConfigError("--grid expects STEP or START:STOP:STEP");
  }
}

std::vector<int> parse_sizes(const std::string& spec) {
  std::vector<int> out;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    out.push_back(std::stoi(cur));
    cur.clear();
  };
  for (char c : spec) {
    if (c == ',') flush();
    else cur.push_back(c);
  }
  flush();
  if (out.empty()) throw xcs::ConfigError("--sizes expects N[,N...]");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exciton-condensate signature toolkit"};
  app.require_subcommand(1);

  // scan ------------------------------------------------------------------
  auto* scan = app.add_subcommand(
      "scan", "Three-qubit preparation-angle scan (polytope + lambda_G)");
  std::string scan_grid, scan_noise, scan_out, scan_fix;
  long long scan_shots = 0;
  std::uint64_t scan_seed = 0;
  bool scan_mitigate = false;
  int scan_workers = 1;
  scan->add_option("--grid", scan_grid,
                   "STEP or START:STOP:STEP in radians (pi/K accepted); "
                   "default 0:pi/2:pi/6");
  scan->add_option("--fix-theta1", scan_fix,
                   "restrict theta1 to a single value (radians)");
  scan->add_option("--shots", scan_shots, "shots per setting (0 = exact)");
  scan->add_option("--noise", scan_noise, "noise model JSON file");
  scan->add_flag("--mitigate", scan_mitigate,
                 "apply tensored-calibration mitigation to sampled counts");
  scan->add_option("--seed", scan_seed, "master RNG seed");
  scan->add_option("--out", scan_out, "output CSV path (JSON mirror beside)");
  scan->add_option("--workers", scan_workers, "worker thread count");

  // ghz-sweep -------------------------------------------------------------
  auto* sweep = app.add_subcommand(
      "ghz-sweep", "GHZ system-size sweep of lambda_G, lambda_D, sum(l>1)");
  std::string sweep_sizes, sweep_backend = "dense", sweep_noise, sweep_out;
  long long sweep_shots = 0;
  std::uint64_t sweep_seed = 0;
  bool sweep_mitigate = false;
  int sweep_workers = 1;
  sweep->add_option("--sizes", sweep_sizes,
                    "comma-separated N list; default 3..16,22,28,34,39,47,53");
  sweep->add_option("--backend", sweep_backend, "dense | analytic")
      ->check(CLI::IsMember({"dense", "analytic"}));
  sweep->add_option("--shots", sweep_shots, "shots per setting (0 = exact)");
  sweep->add_option("--noise", sweep_noise, "noise model JSON file");
  sweep->add_flag("--mitigate", sweep_mitigate,
                  "apply tensored-calibration mitigation to sampled counts");
  sweep->add_option("--seed", sweep_seed, "master RNG seed");
  sweep->add_option("--out", sweep_out, "output CSV path (JSON mirror beside)");
  sweep->add_option("--workers", sweep_workers, "worker thread count");

  // calibrate -------------------------------------------------------------
  auto* calibrate = app.add_subcommand(
      "calibrate", "Fit a tensored readout-mitigation filter");
  std::string cal_noise, cal_out;
  long long cal_shots = 8192;
  std::uint64_t cal_seed = 0;
  int cal_qubits = 0;
  calibrate->add_option("--noise", cal_noise, "noise model JSON file")
      ->required();
  calibrate->add_option("--qubits", cal_qubits,
                        "qubit count (defaults to the noise readout length)");
  calibrate->add_option("--shots", cal_shots, "calibration shots per circuit");
  calibrate->add_option("--seed", cal_seed, "master RNG seed");
  calibrate->add_option("--out", cal_out, "filter JSON output path")
      ->required();

  // report ----------------------------------------------------------------
  auto* report = app.add_subcommand(
      "report", "Merge sweep CSVs into a table keyed by N");
  std::vector<std::string> report_inputs;
  std::string report_out;
  report->add_option("inputs", report_inputs, "sweep CSV files");
  report->add_option("--out", report_out, "summary JSON path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (scan->parsed()) {
      xcs::ScanConfig config;
      if (!scan_grid.empty()) parse_grid(scan_grid, config);
      if (!scan_fix.empty()) config.fix_theta1 = parse_angle(scan_fix);
      config.shots = scan_shots;
      if (!scan_noise.empty()) config.noise = xcs::load_noise_model(scan_noise);
      config.mitigate = scan_mitigate;
      config.seed = scan_seed;
      config.out = scan_out;
      config.workers = scan_workers;
      const auto rows = xcs::run_scan(config);
      if (scan_out.empty()) {
        std::cout << xcs::scan_csv_header() << '\n';
        for (const auto& r : rows) std::cout << xcs::scan_row_csv(r) << '\n';
      }
    } else if (sweep->parsed()) {
      xcs::SweepConfig config;
      if (!sweep_sizes.empty()) config.sizes = parse_sizes(sweep_sizes);
      config.backend = sweep_backend == "analytic" ? xcs::SweepBackend::Analytic
                                                   : xcs::SweepBackend::Dense;
      config.shots = sweep_shots;
      if (!sweep_noise.empty())
        config.noise = xcs::load_noise_model(sweep_noise);
      config.mitigate = sweep_mitigate;
      config.seed = sweep_seed;
      config.out = sweep_out;
      config.workers = sweep_workers;
      const auto rows = xcs::run_sweep(config);
      if (sweep_out.empty()) {
        std::cout << xcs::sweep_csv_header() << '\n';
        for (const auto& r : rows) std::cout << xcs::sweep_row_csv(r) << '\n';
      }
    } else if (calibrate->parsed()) {
      const xcs::NoiseModel model = xcs::load_noise_model(cal_noise);
      int n = cal_qubits;
      if (n == 0) n = static_cast<int>(model.readout.size());
      if (n < 1)
        throw xcs::ConfigError(
            "pass --qubits when the noise model has no per-qubit readout list");
      const xcs::MitigationFilter filter =
          xcs::calibrate_tensored(n, model, cal_shots, cal_seed);
      xcs::write_text_file(cal_out, xcs::filter_to_json(filter) + "\n");
    } else if (report->parsed()) {
      const std::string summary = xcs::report_json(report_inputs);
      if (report_out.empty())
        std::cout << summary;
      else
        xcs::write_text_file(report_out, summary);
    }
  } catch (const xcs::CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << '\n';
    return kExitCapacity;
  } catch (const xcs::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const xcs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}
