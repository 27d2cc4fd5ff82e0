#pragma once

#include <array>
#include <vector>

#include "xcs/rdm.hpp"

namespace xcs {

struct OccupationVector {
  std::vector<double> occ;  // natural-orbital occupations, descending
};

/// Concatenated eigenvalues of the per-site 1-RDMs, sorted descending.
OccupationVector occupations(const std::vector<OneRdm>& rdms);

struct PolytopeVerdict {
  bool pauli_ok = false;
  bool generalized_ok = false;
  double slack = 0.0;                     // n5 + n6 - n4
  std::array<double, 3> residuals{};      // |n1+n6-1|, |n2+n5-1|, |n3+n4-1|
};

/// Pauli bound 0 <= n_i <= 1; works for any length.
bool pauli_bound_ok(const OccupationVector& occ, double tol = 1e-8);

/// Full verdict.  The generalized three-qubit constraint and complementarity
/// residuals require exactly six occupations; other lengths throw.
PolytopeVerdict check_constraints(const OccupationVector& occ,
                                  double tol = 1e-8);

}  // namespace xcs
