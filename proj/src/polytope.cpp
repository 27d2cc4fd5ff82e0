#include "xcs/polytope.hpp"

#include <algorithm>
#include <cmath>

#include "xcs/errors.hpp"

namespace xcs {

OccupationVector occupations(const std::vector<OneRdm>& rdms) {
  OccupationVector out;
  out.occ.reserve(2 * rdms.size());
  for (const OneRdm& d : rdms) {
    // Closed-form eigenvalues of the 2x2 Hermitian site RDM.
    const double a = d.matrix(0, 0).real();
    const double b = d.matrix(1, 1).real();
    const double off = std::abs(d.matrix(0, 1));
    const double mid = 0.5 * (a + b);
    const double rad = std::sqrt(0.25 * (a - b) * (a - b) + off * off);
    out.occ.push_back(mid + rad);
    out.occ.push_back(mid - rad);
  }
  std::stable_sort(out.occ.begin(), out.occ.end(), std::greater<double>());
  return out;
}

bool pauli_bound_ok(const OccupationVector& occ, double tol) {
  for (double n : occ.occ)
    if (n < -tol || n > 1.0 + tol) return false;
  return true;
}

PolytopeVerdict check_constraints(const OccupationVector& occ, double tol) {
  PolytopeVerdict v;
  v.pauli_ok = pauli_bound_ok(occ, tol);
  if (occ.occ.size() != 6)
    throw ConfigError(
        "generalized Pauli checks need a three-qubit occupation vector "
        "(six entries)");
  const auto& n = occ.occ;
  v.slack = n[4] + n[5] - n[3];
  v.generalized_ok = v.slack >= -tol;
  v.residuals = {std::abs(n[0] + n[5] - 1.0), std::abs(n[1] + n[4] - 1.0),
                 std::abs(n[2] + n[3] - 1.0)};
  return v;
}

}  // namespace xcs
