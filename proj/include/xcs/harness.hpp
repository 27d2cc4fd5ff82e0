#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "xcs/gates.hpp"
#include "xcs/noise.hpp"
#include "xcs/polytope.hpp"
#include "xcs/rdm.hpp"

namespace xcs {

// Output conventions shared by every verb:
//  - CSV with an explicit header and fixed column order; a JSON mirror with
//    the same rows is written next to it (same path, .json extension).
//  - Numbers are printed with shortest-roundtrip formatting, so identical
//    config + seed gives byte-identical files.
//  - Runs are resumable: rows already present in the output CSV are kept and
//    skipped; missing rows are appended in grid order.  Per-row RNG streams
//    are derived from (master seed, row index), so worker count and resume
//    state never change results.

struct ScanConfig {
  double start = 0.0;
  double stop = 1.5707963267948966;  // pi/2
  double step = 0.5235987755982988;  // pi/6
  std::optional<double> fix_theta1;  // restrict the theta1 axis to one value
  long long shots = 0;               // 0 = exact expectations
  std::optional<NoiseModel> noise;
  bool mitigate = false;
  std::uint64_t seed = 0;
  std::string out;  // empty = no files written
  int workers = 1;

  void validate() const;
  std::vector<double> axis_values() const;
};

struct ScanRow {
  PrepAngles angles;
  double n4 = 0.0, n5 = 0.0, n6 = 0.0;
  double lambda_g = 0.0, lambda_d = 0.0, slack = 0.0;
};

ScanRow compute_scan_row(const PrepAngles& angles, const ScanConfig& config,
                         std::uint64_t row_seed);
std::vector<ScanRow> run_scan(const ScanConfig& config);

enum class SweepBackend { Dense, Analytic };

struct SweepConfig {
  std::vector<int> sizes;  // empty = the default sweep set
  SweepBackend backend = SweepBackend::Dense;
  long long shots = 0;
  std::optional<NoiseModel> noise;
  bool mitigate = false;
  std::uint64_t seed = 0;
  std::string out;
  int workers = 1;

  void validate() const;
  /// Data series the rows belong to: "sim" (noiseless), "exp" (noisy,
  /// unmitigated), or "mit" (noisy, mitigated).
  std::string series() const;
};

/// Table-style sweep set: {3..16, 22, 28, 34, 39, 47, 53}.
const std::vector<int>& default_sweep_sizes();

struct SweepRow {
  int n = 0;
  std::string series;
  double lambda_g = 0.0, lambda_d = 0.0, sum_above_one = 0.0;
};

SweepRow compute_sweep_row(int n, const SweepConfig& config,
                           std::uint64_t row_seed);
std::vector<SweepRow> run_sweep(const SweepConfig& config);

/// Merges sweep CSVs into a Table-1-shaped JSON keyed by N with one lambda_g
/// column per series present in the inputs.
std::string report_json(const std::vector<std::string>& csv_paths);

std::string scan_csv_header();
std::string scan_row_csv(const ScanRow& row);
std::string sweep_csv_header();
std::string sweep_row_csv(const SweepRow& row);

}  // namespace xcs
