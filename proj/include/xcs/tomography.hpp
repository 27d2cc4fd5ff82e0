#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "xcs/statevector.hpp"

namespace xcs {

enum class Axis : int { X = 0, Y = 1, Z = 2 };

enum class TomographyMode {
  RealOnly,  // per-pair labels {XX, YY, ZZ, XZ, ZX}; the rest treated as zero
  Full,      // all nine two-qubit labels
};

/// One measurement basis letter per qubit.
using MeasurementSetting = std::vector<Axis>;

std::string setting_to_string(const MeasurementSetting& s);
MeasurementSetting setting_from_string(const std::string& s);

struct CountTable {
  MeasurementSetting setting;
  long long shots = 0;
  std::map<std::string, long long> counts;  // bitstring (qubit 0 first) -> n
  std::uint64_t seed = 0;
};

/// Real-valued variant produced by measurement mitigation.
struct FreqTable {
  MeasurementSetting setting;
  double weight = 0.0;                // effective shots for pooling
  std::map<std::string, double> freqs;  // bitstring -> probability mass
};

FreqTable to_freq_table(const CountTable& t);

struct TomographyPlan {
  int qubit_count = 0;
  TomographyMode mode = TomographyMode::Full;
  std::vector<std::pair<int, int>> pairs;  // p < q
  std::vector<MeasurementSetting> settings;
};

/// All distinct pairs p < q.
std::vector<std::pair<int, int>> all_pairs(int n);

/// Greedy set cover over uniform and bit-pattern candidate settings; the
/// returned plan measures every single-qubit axis and every required pair
/// label from at least one setting.
TomographyPlan plan_settings(int n, const std::vector<std::pair<int, int>>& pairs,
                             TomographyMode mode);

bool setting_covers_single(const MeasurementSetting& s, int q, Axis a);
bool setting_covers_pair(const MeasurementSetting& s, int p, Axis a, int q,
                         Axis b);

class ExpectationSet {
 public:
  int qubit_count = 0;
  TomographyMode mode = TomographyMode::Full;
  long long shots = 0;  // 0 = exact

  struct PairData {
    std::array<double, 9> value{};   // index a*3+b for <a_p b_q>, p < q
    std::array<bool, 9> present{};
  };

  std::vector<std::array<double, 3>> singles;  // [qubit][axis]
  std::map<std::pair<int, int>, PairData> pair_data;  // keyed p < q

  double single(int q, Axis a) const;
  bool has_pair(int p, int q) const;

  /// <A_p B_q> for any ordering of p, q.  Labels outside the real-only set
  /// read as zero in RealOnly mode; genuinely unmeasured labels throw
  /// MissingExpectationError.
  double pair_value(int p, Axis a, int q, Axis b) const;

  void set_single(int q, Axis a, double v);
  void set_pair(int p, Axis a, int q, Axis b, double v);
};

/// Labels stored per pair for a mode.
const std::vector<std::pair<Axis, Axis>>& pair_labels(TomographyMode mode);

/// Noise-free expectations straight from a dense state.
ExpectationSet exact_expectations(const PureState& state,
                                  const TomographyPlan& plan);

/// Expectations from explicit 1-/2-qubit marginals (analytic or noisy
/// backends supply the callables).
ExpectationSet expectations_from_marginals(
    int n, TomographyMode mode, const std::vector<std::pair<int, int>>& pairs,
    const std::function<Eigen::Matrix2cd(int)>& single_marginal,
    const std::function<Eigen::Matrix4cd(int, int)>& pair_marginal_fn);

struct NoiseModel;  // noise.hpp

/// Shot sampling in a rotated basis.  Readout confusion is applied per shot
/// and per qubit when a noise model is given.  Deterministic under `seed`.
CountTable sample_counts(const PureState& state,
                         const MeasurementSetting& setting, long long shots,
                         const NoiseModel* noise, std::uint64_t seed);

/// Same, from an explicit probability vector over basis outcomes.
CountTable sample_counts_from_probs(const std::vector<double>& probs, int n,
                                    const MeasurementSetting& setting,
                                    long long shots, const NoiseModel* noise,
                                    std::uint64_t seed);

/// Pools parity estimates over every table that exposes a label, weighted by
/// shots.  Throws MissingExpectationError when a required label is uncovered.
ExpectationSet expectations_from_counts(const std::vector<CountTable>& tables,
                                        const TomographyPlan& plan);
ExpectationSet expectations_from_freq_tables(
    const std::vector<FreqTable>& tables, const TomographyPlan& plan);

// Constant Pauli matrices (I, X, Y, Z).
const Eigen::Matrix2cd& pauli_matrix(Axis a);
const Eigen::Matrix2cd& identity2();

}  // namespace xcs
