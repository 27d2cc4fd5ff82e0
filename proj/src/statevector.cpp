#include "xcs/statevector.hpp"

#include <cmath>
#include <string>

#include "xcs/errors.hpp"
#include "xcs/kernels.hpp"

namespace xcs {

double PureState::norm() const {
  double s = 0.0;
  for (const cplx& a : amps) s += std::norm(a);
  return std::sqrt(s);
}

PureState zero_state(int n) {
  if (n <= 0) throw ConfigError("state needs at least one qubit");
  PureState st;
  st.qubit_count = n;
  st.amps.assign(std::size_t{1} << n, cplx{0.0, 0.0});
  st.amps[0] = cplx{1.0, 0.0};
  return st;
}

void apply_matrix1q(PureState& state, int qubit, const cplx m[4]) {
  kernels::active().apply_matrix1q(state.amps.data(), state.dim(),
                                   state.stride_of(qubit), m);
}

void apply_gate(PureState& state, const Gate& gate) {
  const auto& ks = kernels::active();
  switch (gate.kind) {
    case GateKind::RotY: {
      const double c = std::cos(gate.angle / 2.0);
      const double s = std::sin(gate.angle / 2.0);
      const cplx m[4] = {c, -s, s, c};
      ks.apply_matrix1q(state.amps.data(), state.dim(),
                        state.stride_of(gate.target), m);
      break;
    }
    case GateKind::Hadamard: {
      const double r = 1.0 / std::sqrt(2.0);
      const cplx m[4] = {r, r, r, -r};
      ks.apply_matrix1q(state.amps.data(), state.dim(),
                        state.stride_of(gate.target), m);
      break;
    }
    case GateKind::PauliX:
      ks.apply_x(state.amps.data(), state.dim(), state.stride_of(gate.target));
      break;
    case GateKind::Cnot:
      ks.apply_cnot(state.amps.data(), state.dim(),
                    state.stride_of(gate.control),
                    state.stride_of(gate.target));
      break;
  }
}

PureState simulate(const Circuit& circuit, int dense_limit) {
  circuit.validate();
  if (circuit.qubit_count > dense_limit)
    throw CapacityError(
        "dense backend limited to " + std::to_string(dense_limit) +
        " qubits (requested " + std::to_string(circuit.qubit_count) +
        "); use the analytic GHZ backend for larger systems");
  PureState st = zero_state(circuit.qubit_count);
  for (const Gate& g : circuit.gates) apply_gate(st, g);
  return st;
}

Eigen::Matrix2cd qubit_marginal(const PureState& state, int qubit) {
  const std::size_t stride = state.stride_of(qubit);
  Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
  for (std::size_t base = 0; base < state.dim(); base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const cplx a0 = state.amps[i];
      const cplx a1 = state.amps[i + stride];
      rho(0, 0) += a0 * std::conj(a0);
      rho(0, 1) += a0 * std::conj(a1);
      rho(1, 0) += a1 * std::conj(a0);
      rho(1, 1) += a1 * std::conj(a1);
    }
  }
  return rho;
}

Eigen::Matrix4cd pair_marginal(const PureState& state, int p, int q) {
  if (p == q) throw ConfigError("pair marginal needs two distinct qubits");
  const std::size_t sp = state.stride_of(p);
  const std::size_t sq = state.stride_of(q);
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  for (std::size_t i = 0; i < state.dim(); ++i) {
    if ((i & sp) || (i & sq)) continue;
    cplx a[4] = {state.amps[i], state.amps[i | sq], state.amps[i | sp],
                 state.amps[i | sp | sq]};
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) rho(r, c) += a[r] * std::conj(a[c]);
  }
  return rho;
}

PairMarginal ghz_marginals(int n, int p, int q) {
  if (n < 3)
    throw ConfigError(
        "analytic GHZ marginals need n >= 3 (the n = 2 marginal retains "
        "coherence; use the dense backend)");
  if (p == q) throw ConfigError("pair marginal needs two distinct qubits");
  if (p < 0 || p >= n || q < 0 || q >= n)
    throw ConfigError("pair marginal qubit out of range");
  PairMarginal m;
  m.p = p;
  m.q = q;
  m.matrix = Eigen::Matrix4cd::Zero();
  m.matrix(0, 0) = 0.5;
  m.matrix(3, 3) = 0.5;
  return m;
}

Eigen::Matrix2cd ghz_single_marginal(int n, int qubit) {
  if (n < 2) throw ConfigError("GHZ single marginal needs n >= 2");
  if (qubit < 0 || qubit >= n) throw ConfigError("qubit out of range");
  return 0.5 * Eigen::Matrix2cd::Identity();
}

}  // namespace xcs
