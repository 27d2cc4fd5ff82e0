#include "xcs/rdm.hpp"

#include <array>
#include <cmath>

#include "xcs/errors.hpp"

namespace xcs {

namespace {

// |x><y| for the transition index s = 2x + y.
const Eigen::Matrix2cd& transition_op(int s) {
  static const std::array<Eigen::Matrix2cd, 4> ops = [] {
    std::array<Eigen::Matrix2cd, 4> t;
    for (int s = 0; s < 4; ++s) {
      t[s] = Eigen::Matrix2cd::Zero();
      t[s](s >> 1, s & 1) = 1.0;
    }
    return t;
  }();
  return ops[s];
}

// Coefficients of M in the {I, X, Y, Z} basis.
std::array<cplx, 4> pauli_decompose(const Eigen::Matrix2cd& m) {
  std::array<cplx, 4> c;
  c[0] = 0.5 * m.trace();
  for (int a = 0; a < 3; ++a)
    c[a + 1] = 0.5 * (pauli_matrix(static_cast<Axis>(a)) * m).trace();
  return c;
}

cplx same_site_expval(const ExpectationSet& es, int p,
                      const Eigen::Matrix2cd& m) {
  const auto c = pauli_decompose(m);
  cplx v = c[0];
  for (int a = 0; a < 3; ++a) {
    double ea = es.single(p, static_cast<Axis>(a));
    if (es.mode == TomographyMode::RealOnly && static_cast<Axis>(a) == Axis::Y)
      ea = 0.0;
    v += c[a + 1] * ea;
  }
  return v;
}

cplx cross_expval(const ExpectationSet& es, int p, const Eigen::Matrix2cd& mp,
                  int q, const Eigen::Matrix2cd& mq) {
  const auto cp = pauli_decompose(mp);
  const auto cq = pauli_decompose(mq);
  cplx v = cp[0] * cq[0];
  for (int a = 0; a < 3; ++a) {
    double ea = es.single(p, static_cast<Axis>(a));
    double eb = es.single(q, static_cast<Axis>(a));
    if (es.mode == TomographyMode::RealOnly && static_cast<Axis>(a) == Axis::Y)
      ea = eb = 0.0;
    v += cp[a + 1] * cq[0] * ea;
    v += cp[0] * cq[a + 1] * eb;
  }
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      v += cp[a + 1] * cq[b + 1] *
           es.pair_value(p, static_cast<Axis>(a), q, static_cast<Axis>(b));
  return v;
}

}  // namespace

OneRdm one_rdm(const ExpectationSet& es, int qubit) {
  if (qubit < 0 || qubit >= es.qubit_count ||
      static_cast<int>(es.singles.size()) <= qubit)
    throw MissingExpectationError("no single-qubit expectations for qubit");
  const double x = es.single(qubit, Axis::X);
  const double y =
      es.mode == TomographyMode::RealOnly ? 0.0 : es.single(qubit, Axis::Y);
  const double z = es.single(qubit, Axis::Z);
  OneRdm d;
  d.qubit = qubit;
  d.matrix << 0.5 * (1.0 + z), 0.5 * cplx(x, y), 0.5 * cplx(x, -y),
      0.5 * (1.0 - z);
  return d;
}

Eigen::Matrix4cd g_block(const ExpectationSet& es, int p, int q) {
  Eigen::Matrix4cd b;
  for (int s = 0; s < 4; ++s) {
    for (int t = 0; t < 4; ++t) {
      const Eigen::Matrix2cd td = transition_op(t).adjoint();
      if (p == q)
        b(s, t) = same_site_expval(es, p, transition_op(s) * td);
      else
        b(s, t) = cross_expval(es, p, transition_op(s), q, td);
    }
  }
  return b;
}

GTilde assemble_g_tilde(const ExpectationSet& es) {
  const int n = es.qubit_count;
  GTilde g;
  g.qubit_count = n;
  g.matrix.resize(4 * n, 4 * n);

  // d[p][s] = <T(s)_p> read off the 1-RDM.
  std::vector<std::array<cplx, 4>> d(n);
  for (int p = 0; p < n; ++p) {
    const Eigen::Matrix2cd m = one_rdm(es, p).matrix;
    d[p] = {m(0, 0), m(0, 1), m(1, 0), m(1, 1)};
  }
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      Eigen::Matrix4cd b = g_block(es, p, q);
      for (int s = 0; s < 4; ++s)
        for (int t = 0; t < 4; ++t)
          b(s, t) -= d[p][s] * std::conj(d[q][t]);
      g.matrix.block<4, 4>(4 * p, 4 * q) = b;
    }
  }
  return g;
}

int orbital_pair_index(int i, int j, int n_orbitals) {
  // Lexicographic rank of (i, j), i < j.
  return i * n_orbitals - i * (i + 1) / 2 + (j - i - 1);
}

namespace {

// Cross-site 4x4 block of 2D for sites p < q:
//   B[(x,y),(u,v)] = <a_{p,x}^ a_{q,y}^ a_{q,v} a_{p,u}>
//                  = <T((x,u))_p T((y,v))_q>,
// the reordering sign being +1 because the q-site operators commute past the
// p-site pair.
Eigen::Matrix4cd d_block(const ExpectationSet& es, int p, int q) {
  Eigen::Matrix4cd b;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int u = 0; u < 2; ++u)
        for (int v = 0; v < 2; ++v)
          b(2 * x + y, 2 * u + v) = cross_expval(
              es, p, transition_op(2 * x + u), q, transition_op(2 * y + v));
  return b;
}

}  // namespace

TwoParticleRdm assemble_two_particle_rdm(const ExpectationSet& es) {
  const int n = es.qubit_count;
  const int orbitals = 2 * n;
  const int dim = orbitals * (orbitals - 1) / 2;
  TwoParticleRdm d;
  d.qubit_count = n;
  d.matrix = Eigen::MatrixXcd::Zero(dim, dim);
  for (int p = 0; p < n; ++p) {
    for (int q = p + 1; q < n; ++q) {
      const Eigen::Matrix4cd b = d_block(es, p, q);
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
          for (int u = 0; u < 2; ++u)
            for (int v = 0; v < 2; ++v) {
              const int row = orbital_pair_index(2 * p + x, 2 * q + y, orbitals);
              const int col = orbital_pair_index(2 * p + u, 2 * q + v, orbitals);
              d.matrix(row, col) = b(2 * x + y, 2 * u + v);
            }
    }
  }
  return d;
}

double lambda_d(const ExpectationSet& es) {
  const int n = es.qubit_count;
  double best = 0.0;  // same-site pair rows contribute eigenvalue 0
  for (int p = 0; p < n; ++p) {
    for (int q = p + 1; q < n; ++q) {
      const Eigen::Matrix4cd b = d_block(es, p, q);
      const auto ev = eigensolve_hermitian(b, 1e-6);
      if (!ev.empty() && ev.front() > best) best = ev.front();
    }
  }
  return best;
}

std::vector<double> eigensolve_hermitian(const Eigen::MatrixXcd& m,
                                         double herm_tol,
                                         Eigen::MatrixXcd* vectors) {
  if (m.rows() != m.cols()) throw NumericError("eigensolve needs a square matrix");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double resid = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (resid > herm_tol * scale)
    throw NumericError("matrix is not Hermitian within tolerance");
  const Eigen::MatrixXcd sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
      sym, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericError("eigensolver failed to converge");
  const auto& vals = solver.eigenvalues();
  std::vector<double> out(vals.size());
  for (int i = 0; i < vals.size(); ++i) out[i] = vals(vals.size() - 1 - i);
  if (vectors) {
    vectors->resize(m.rows(), m.cols());
    for (int i = 0; i < vals.size(); ++i)
      vectors->col(i) = solver.eigenvectors().col(vals.size() - 1 - i);
  }
  return out;
}

SignatureReport signature_report(const ExpectationSet& es, double herm_tol) {
  SignatureReport r;
  r.qubit_count = es.qubit_count;
  const GTilde g = assemble_g_tilde(es);
  r.g_spectrum = eigensolve_hermitian(g.matrix, herm_tol);
  r.lambda_g = r.g_spectrum.empty() ? 0.0 : r.g_spectrum.front();
  r.lambda_d = lambda_d(es);
  r.sum_above_one = 0.0;
  for (double v : r.g_spectrum)
    if (v > 1.0 + 1e-9) r.sum_above_one += v;
  return r;
}

}  // namespace xcs
