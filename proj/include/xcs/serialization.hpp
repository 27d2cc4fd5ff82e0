#pragma once

#include <Eigen/Dense>
#include <string>

#include "xcs/noise.hpp"
#include "xcs/tomography.hpp"

namespace xcs {

// JSON formats:
//   CountTable   {"setting": "XZZ", "shots": n, "counts": {"010": k, ...},
//                 "seed": s}
//   NoiseModel   {"readout": [[e01, e10], ...] | scalar, "depol1": p,
//                 "depol2": p, "seed": s}; a scalar readout value eps means a
//                 single broadcast entry [eps, eps]
//   Filter       {"qubits": n, "calibration_shots": n, "residual": r,
//                 "confusion": [[[m00, m01], [m10, m11]], ...]}

std::string count_table_to_json(const CountTable& t);
CountTable count_table_from_json(const std::string& text);

std::string noise_model_to_json(const NoiseModel& m);
NoiseModel noise_model_from_json(const std::string& text);
NoiseModel load_noise_model(const std::string& path);

std::string filter_to_json(const MitigationFilter& f);
MitigationFilter filter_from_json(const std::string& text);
MitigationFilter load_filter(const std::string& path);

/// Complex matrix dumps for cross-implementation diffing.  Rows follow the
/// documented composite-index order of the matrix being dumped; each cell is
/// the pair (re, im).
std::string matrix_to_csv(const Eigen::MatrixXcd& m);
std::string matrix_to_json(const Eigen::MatrixXcd& m);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

/// Fixed shortest-roundtrip numeric formatting used by every emitter, so
/// outputs are byte-stable across runs and platforms.
std::string format_double(double v);

}  // namespace xcs
