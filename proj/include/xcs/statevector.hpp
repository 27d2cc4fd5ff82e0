#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "xcs/gates.hpp"

namespace xcs {

using cplx = std::complex<double>;

inline constexpr int kDenseQubitLimit = 20;

struct PureState {
  int qubit_count = 0;
  std::vector<cplx> amps;  // length 2^qubit_count, qubit 0 most significant

  std::size_t dim() const { return amps.size(); }
  double norm() const;

  /// Stride of the bit owned by `qubit` within an amplitude index.
  std::size_t stride_of(int qubit) const {
    return std::size_t{1} << (qubit_count - 1 - qubit);
  }
};

PureState zero_state(int n);

/// Dense statevector simulation.  Throws CapacityError when the circuit has
/// more than `dense_limit` qubits.
PureState simulate(const Circuit& circuit, int dense_limit = kDenseQubitLimit);

void apply_gate(PureState& state, const Gate& gate);

/// Apply an arbitrary 2x2 matrix (row-major) to one qubit.  Used by the
/// tomography basis rotations; circuit gates go through apply_gate.
void apply_matrix1q(PureState& state, int qubit, const cplx m[4]);

/// Single-qubit reduced density matrix.
Eigen::Matrix2cd qubit_marginal(const PureState& state, int qubit);

/// Two-qubit reduced density matrix, basis |q_p q_q> in {00,01,10,11}.
Eigen::Matrix4cd pair_marginal(const PureState& state, int p, int q);

struct PairMarginal {
  int p = 0, q = 0;
  Eigen::Matrix4cd matrix;
};

/// Exact two-qubit reduced state of GHZ_n for n >= 3: the equal classical
/// mixture of |00> and |11>.  All coherences vanish once a third qubit is
/// traced out, which is what makes the analytic backend exact at any n.
PairMarginal ghz_marginals(int n, int p, int q);

/// Exact single-qubit reduced state of GHZ_n (n >= 2): diag(1/2, 1/2).
Eigen::Matrix2cd ghz_single_marginal(int n, int qubit);

}  // namespace xcs
