#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "xcs/tomography.hpp"

namespace xcs {

struct NoiseModel {
  // Per-qubit readout flip probabilities {e01, e10} with e01 = P(read 1 |
  // true 0).  A single entry broadcasts to every qubit; empty means ideal
  // readout.  Column-stochastic confusion matrix: [[1-e01, e10], [e01, 1-e10]].
  std::vector<std::array<double, 2>> readout;
  double depol1 = 0.0;  // depolarizing probability after each 1-qubit gate
  double depol2 = 0.0;  // depolarizing probability after each CNOT
  std::uint64_t seed = 0;

  std::pair<double, double> readout_for(int q) const;
  Eigen::Matrix2d confusion_for(int q) const;
  bool has_readout() const;
  void validate(int qubit_count) const;
};

/// Re-samples each shot's bits through the confusion matrices.
CountTable apply_readout_noise(const CountTable& counts,
                               const NoiseModel& model, std::uint64_t seed);

/// Damps expectations by the exact effect of per-qubit readout confusion on
/// measured parities (infinite-shot limit of apply_readout_noise).
ExpectationSet fold_readout(const ExpectationSet& es, const NoiseModel& model);

inline constexpr int kDensityQubitLimit = 10;

/// Density-matrix evolution with per-gate depolarizing channels.
class DensityMatrix {
 public:
  explicit DensityMatrix(int n);  // |0...0><0...0|

  static DensityMatrix evolve(const Circuit& circuit, const NoiseModel& model,
                              int limit = kDensityQubitLimit);

  int qubit_count() const { return n_; }
  const Eigen::MatrixXcd& rho() const { return rho_; }

  void apply_unitary_gate(const Gate& gate);
  void apply_depol1(int qubit, double p);
  void apply_depol2(int a, int b, double p);

  Eigen::Matrix2cd marginal1(int q) const;
  Eigen::Matrix4cd marginal2(int p, int q) const;

  /// Measurement probabilities in a rotated basis (no readout noise).
  std::vector<double> probabilities(const MeasurementSetting& setting) const;

 private:
  void conj_unitary1q(int qubit, const Eigen::Matrix2cd& u);
  void conj_cnot(int control, int target);

  int n_;
  Eigen::MatrixXcd rho_;
};

ExpectationSet density_expectations(const DensityMatrix& dm,
                                    const TomographyPlan& plan);

/// Exact <Z_p Z_q> of the noisy GHZ chain (H + CNOT ladder with a
/// depolarizing channel after every gate), from Heisenberg pullback: every
/// channel between the pair (and the one just after qubit q's CNOT, when it
/// exists) damps the correlator by (1 - depol2).  All other one- and
/// two-qubit Pauli expectations of the noisy GHZ state vanish for n >= 3.
double noisy_ghz_zz(int n, int p, int q, const NoiseModel& model);

/// Analytic-backend expectations for GHZ_n (n >= 3) under gate noise,
/// before any readout folding.
ExpectationSet noisy_ghz_expectations(int n, const NoiseModel& model,
                                      TomographyMode mode,
                                      const std::vector<std::pair<int, int>>& pairs);

/// Shot-sampled analytic backend: each single and pair label is estimated
/// from `shots` outcomes drawn from its exact (noisy) marginal distribution,
/// with readout flips applied per shot.
ExpectationSet ghz_sampled_expectations(
    int n, const NoiseModel& model, TomographyMode mode,
    const std::vector<std::pair<int, int>>& pairs, long long shots,
    std::uint64_t seed);

struct MitigationFilter {
  std::vector<Eigen::Matrix2d> confusion;  // estimated, column-stochastic
  long long calibration_shots = 0;
  double residual = 0.0;  // max binomial standard error of the estimates

  int qubit_count() const { return static_cast<int>(confusion.size()); }
};

/// Samples the |0...0> or |1...1> calibration circuit.
using CalibrationSampler =
    std::function<CountTable(bool ones, long long shots, std::uint64_t seed)>;

/// Tensored calibration: per-qubit confusion estimated from the marginal
/// flip frequencies of the two calibration runs.  Rejects shots < 100.
MitigationFilter calibrate_tensored(const CalibrationSampler& sampler, int n,
                                    long long shots, std::uint64_t seed);

/// Convenience overload sampling the calibration circuits under `model`.
MitigationFilter calibrate_tensored(int n, const NoiseModel& model,
                                    long long shots, std::uint64_t seed);

/// Constrained least squares min ||A x - c||, x >= 0, sum x = sum c, with
/// A the tensored confusion operator applied factor-by-factor (never
/// materialized).  Projected gradient; throws NumericError at the iteration
/// cap.
std::vector<double> mitigate_probs(const std::vector<double>& c,
                                   const MitigationFilter& filter,
                                   int max_iter = 10000, double tol = 1e-10);

/// Mitigates a count table into real-valued frequencies.
FreqTable mitigate(const CountTable& counts, const MitigationFilter& filter,
                   int max_iter = 10000, double tol = 1e-10);

}  // namespace xcs
