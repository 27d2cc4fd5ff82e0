#include "xcs/gates.hpp"

#include <cmath>
#include <string>

#include "xcs/errors.hpp"

namespace xcs {

Gate roty(int qubit, double angle) {
  return Gate{GateKind::RotY, qubit, -1, angle};
}

Gate hadamard(int qubit) { return Gate{GateKind::Hadamard, qubit, -1, 0.0}; }

Gate cnot(int control, int target) {
  return Gate{GateKind::Cnot, target, control, 0.0};
}

Gate pauli_x(int qubit) { return Gate{GateKind::PauliX, qubit, -1, 0.0}; }

void Circuit::validate() const {
  if (qubit_count <= 0) throw ConfigError("circuit needs at least one qubit");
  for (const Gate& g : gates) {
    if (g.target < 0 || g.target >= qubit_count)
      throw ConfigError("gate target out of range: " + std::to_string(g.target));
    if (g.kind == GateKind::Cnot) {
      if (g.control < 0 || g.control >= qubit_count)
        throw ConfigError("CNOT control out of range: " +
                          std::to_string(g.control));
      if (g.control == g.target)
        throw ConfigError("CNOT control equals target");
    }
    if (g.kind == GateKind::RotY && !std::isfinite(g.angle))
      throw ConfigError("RotY angle is not finite");
  }
}

Circuit build_min3_prep(const PrepAngles& a) {
  Circuit c;
  c.qubit_count = 3;
  c.gates = {
      roty(0, a.theta1), cnot(0, 2), roty(0, a.theta2),
      cnot(0, 1),        roty(2, a.theta3), cnot(2, 1),
  };
  c.validate();
  return c;
}

Circuit build_ghz(int n) {
  if (n < 1) throw ConfigError("GHZ preparation needs n >= 1");
  Circuit c;
  c.qubit_count = n;
  c.gates.push_back(hadamard(0));
  for (int k = 0; k + 1 < n; ++k) c.gates.push_back(cnot(k, k + 1));
  c.validate();
  return c;
}

}  // namespace xcs
