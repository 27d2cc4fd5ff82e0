#pragma once

#include <Eigen/Dense>
#include <vector>

#include "xcs/tomography.hpp"

namespace xcs {

// Qubit-as-site model: qubit p carries two orbitals (p,0) and (p,1) occupied
// by one fermion; qubit |0> means orbital 0 occupied.  Transition operators
// per site are indexed s in {0,1,2,3} in the fixed order
//   0: a0^ a0   1: a0^ a1   2: a1^ a0   3: a1^ a1,
// i.e. s = (x, y) encodes a_x^ a_y = |x><y| on the qubit.  The composite
// index of the 4N x 4N particle-hole matrices is 4 p + s.

struct OneRdm {
  int qubit = 0;
  Eigen::Matrix2cd matrix;  // <a_a^ a_b> for orbitals a, b of the site
};

/// 1-RDM of one site from its Pauli expectations.  In real-only mode the
/// Y-sourced imaginary parts are zero.
OneRdm one_rdm(const ExpectationSet& es, int qubit);

/// Particle-hole block: B[s][t] = < T(s)_p T(t)^dag_q >, contracted from
/// measured one- and two-qubit Pauli expectations (same-site products are
/// reduced to a single operator first when p == q).
Eigen::Matrix4cd g_block(const ExpectationSet& es, int p, int q);

struct GTilde {
  int qubit_count = 0;
  Eigen::MatrixXcd matrix;  // 4N x 4N
};

/// Modified particle-hole matrix: each block of g_block minus the dyadic
/// ground-state-resolution term 1D_p[s] * conj(1D_q[t]).
GTilde assemble_g_tilde(const ExpectationSet& es);

struct TwoParticleRdm {
  int qubit_count = 0;
  Eigen::MatrixXcd matrix;  // pairs (i < j) over 2N spin-orbitals,
                            // same-site pair rows structurally zero
};

TwoParticleRdm assemble_two_particle_rdm(const ExpectationSet& es);

/// Largest eigenvalue of the particle-particle RDM.  Works blockwise per
/// site pair, so it scales to the analytic-backend qubit counts.
double lambda_d(const ExpectationSet& es);

/// Descending eigenvalues of a Hermitian matrix.  The input is symmetrized
/// by averaging with its adjoint; a residual beyond `herm_tol` (relative to
/// the matrix max-norm) throws NumericError.  When `vectors` is non-null it
/// receives the eigenvectors as columns in the same order.
std::vector<double> eigensolve_hermitian(const Eigen::MatrixXcd& m,
                                         double herm_tol = 1e-8,
                                         Eigen::MatrixXcd* vectors = nullptr);

struct SignatureReport {
  int qubit_count = 0;
  double lambda_g = 0.0;
  double lambda_d = 0.0;
  std::vector<double> g_spectrum;  // descending
  double sum_above_one = 0.0;      // sum of G~ eigenvalues exceeding 1
};

SignatureReport signature_report(const ExpectationSet& es,
                                 double herm_tol = 1e-8);

/// Pair index of spin-orbitals i < j among ordered pairs over 2N orbitals.
int orbital_pair_index(int i, int j, int n_orbitals);

}  // namespace xcs
