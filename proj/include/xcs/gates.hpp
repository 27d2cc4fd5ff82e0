#pragma once

#include <vector>

namespace xcs {

// Qubit convention used throughout: qubit indices are 0-based and qubit 0 is
// the most significant bit of a computational basis index.  A basis string
// "q0 q1 ... q(n-1)" therefore reads left to right exactly like the binary
// expansion of the amplitude index.

enum class GateKind { RotY, Hadamard, Cnot, PauliX };

struct Gate {
  GateKind kind;
  int target = 0;
  int control = -1;     // CNOT only
  double angle = 0.0;   // RotY only; RotY(theta) rotates by theta/2 on the
                        // Bloch sphere: [[cos(t/2), -sin(t/2)], [sin(t/2), cos(t/2)]]
};

Gate roty(int qubit, double angle);
Gate hadamard(int qubit);
Gate cnot(int control, int target);
Gate pauli_x(int qubit);

struct Circuit {
  int qubit_count = 0;
  std::vector<Gate> gates;

  /// Throws ConfigError if any gate index is out of range, a CNOT has
  /// control == target, or an angle is not finite.
  void validate() const;
};

struct PrepAngles {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double theta3 = 0.0;
};

/// Three-qubit scanning preparation: Ry(q0,t1), CNOT(0->2), Ry(q0,t2),
/// CNOT(0->1), Ry(q2,t3), CNOT(2->1), in application order.  The prepared
/// state is supported on {|000>, |011>, |101>, |110>} for every angle triple.
Circuit build_min3_prep(const PrepAngles& angles);

/// GHZ preparation: H on qubit 0 followed by the CNOT chain
/// CNOT(0->1), CNOT(1->2), ..., CNOT(n-2 -> n-1).
Circuit build_ghz(int n);

}  // namespace xcs
