#include "xcs/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "xcs/errors.hpp"
#include "xcs/rng.hpp"

namespace xcs {

namespace {

std::string index_to_bits(std::size_t i, int n) {
  std::string s(n, '0');
  for (int q = 0; q < n; ++q)
    if (i & (std::size_t{1} << (n - 1 - q))) s[q] = '1';
  return s;
}

std::size_t bits_to_index(const std::string& s) {
  std::size_t i = 0;
  for (char c : s) i = (i << 1) | (c == '1' ? 1 : 0);
  return i;
}

}  // namespace

std::pair<double, double> NoiseModel::readout_for(int q) const {
  if (readout.empty()) return {0.0, 0.0};
  if (readout.size() == 1) return {readout[0][0], readout[0][1]};
  if (q < 0 || q >= static_cast<int>(readout.size()))
    throw ConfigError("readout table has no entry for the requested qubit");
  return {readout[q][0], readout[q][1]};
}

Eigen::Matrix2d NoiseModel::confusion_for(int q) const {
  const auto [e01, e10] = readout_for(q);
  Eigen::Matrix2d m;
  m << 1.0 - e01, e10, e01, 1.0 - e10;
  return m;
}

bool NoiseModel::has_readout() const {
  for (const auto& r : readout)
    if (r[0] != 0.0 || r[1] != 0.0) return true;
  return false;
}

void NoiseModel::validate(int qubit_count) const {
  for (const auto& r : readout)
    for (double e : r)
      if (!(e >= 0.0 && e <= 1.0))
        throw ConfigError("readout flip probabilities must lie in [0, 1]");
  if (readout.size() > 1 &&
      static_cast<int>(readout.size()) != qubit_count)
    throw ConfigError(
        "readout table must be empty, a single broadcast entry, or one entry "
        "per qubit");
  if (!(depol1 >= 0.0 && depol1 <= 1.0) || !(depol2 >= 0.0 && depol2 <= 1.0))
    throw ConfigError("depolarizing probabilities must lie in [0, 1]");
}

CountTable apply_readout_noise(const CountTable& counts,
                               const NoiseModel& model, std::uint64_t seed) {
  const int n = static_cast<int>(counts.setting.size());
  model.validate(n);
  CountTable out;
  out.setting = counts.setting;
  out.shots = counts.shots;
  out.seed = seed;
  std::mt19937_64 rng(mix_seed(seed, 0x9e3779b97f4a7c15ull));
  for (const auto& [bits, num] : counts.counts) {
    for (long long s = 0; s < num; ++s) {
      std::string flipped = bits;
      for (int q = 0; q < n; ++q) {
        const auto [e01, e10] = model.readout_for(q);
        const double flip_p = flipped[q] == '0' ? e01 : e10;
        if (uniform01(rng) < flip_p) flipped[q] = flipped[q] == '0' ? '1' : '0';
      }
      ++out.counts[flipped];
    }
  }
  return out;
}

ExpectationSet fold_readout(const ExpectationSet& es, const NoiseModel& model) {
  model.validate(es.qubit_count);
  ExpectationSet out = es;
  std::vector<double> alpha(es.qubit_count), shift(es.qubit_count);
  for (int q = 0; q < es.qubit_count; ++q) {
    const auto [e01, e10] = model.readout_for(q);
    alpha[q] = 1.0 - e01 - e10;  // parity damping
    shift[q] = e10 - e01;        // parity bias
  }
  // Pairs first: they fold through the *true* singles.
  for (auto& [key, data] : out.pair_data) {
    const auto [p, q] = key;
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        if (!data.present[a * 3 + b]) continue;
        const double sp = es.single(p, static_cast<Axis>(a));
        const double sq = es.single(q, static_cast<Axis>(b));
        const double v = data.value[a * 3 + b];
        data.value[a * 3 + b] = alpha[p] * alpha[q] * v +
                                alpha[p] * shift[q] * sp +
                                shift[p] * alpha[q] * sq + shift[p] * shift[q];
      }
    }
  }
  for (int q = 0; q < static_cast<int>(out.singles.size()); ++q)
    for (int a = 0; a < 3; ++a)
      out.singles[q][a] = alpha[q] * out.singles[q][a] + shift[q];
  return out;
}

namespace {

// U acting from the left on one qubit of a 2^n-dimensional operator.
Eigen::MatrixXcd lmult1q(const Eigen::MatrixXcd& m, int n, int qubit,
                         const Eigen::Matrix2cd& u) {
  Eigen::MatrixXcd out = m;
  const std::size_t dim = m.rows();
  const std::size_t stride = std::size_t{1} << (n - 1 - qubit);
  for (std::size_t col = 0; col < dim; ++col) {
    for (std::size_t base = 0; base < dim; ++base) {
      if (base & stride) continue;
      const cplx a = m(base, col);
      const cplx b = m(base + stride, col);
      out(base, col) = u(0, 0) * a + u(0, 1) * b;
      out(base + stride, col) = u(1, 0) * a + u(1, 1) * b;
    }
  }
  return out;
}

Eigen::MatrixXcd conj1q(const Eigen::MatrixXcd& m, int n, int qubit,
                        const Eigen::Matrix2cd& u) {
  const Eigen::MatrixXcd t = lmult1q(m, n, qubit, u);
  return lmult1q(t.adjoint(), n, qubit, u).adjoint();
}

Eigen::Matrix2cd gate_matrix1q(const Gate& gate) {
  Eigen::Matrix2cd m;
  switch (gate.kind) {
    case GateKind::RotY: {
      const double c = std::cos(0.5 * gate.angle);
      const double s = std::sin(0.5 * gate.angle);
      m << c, -s, s, c;
      return m;
    }
    case GateKind::Hadamard:
      m << 1, 1, 1, -1;
      return m / std::sqrt(2.0);
    case GateKind::PauliX:
      m << 0, 1, 1, 0;
      return m;
    default:
      throw ConfigError("not a one-qubit gate");
  }
}

}  // namespace

DensityMatrix::DensityMatrix(int n) : n_(n) {
  if (n < 1) throw ConfigError("density matrix needs at least one qubit");
  if (n > kDensityQubitLimit)
    throw CapacityError("density-matrix backend is capped at 10 qubits");
  const std::size_t dim = std::size_t{1} << n;
  rho_ = Eigen::MatrixXcd::Zero(dim, dim);
  rho_(0, 0) = 1.0;
}

DensityMatrix DensityMatrix::evolve(const Circuit& circuit,
                                    const NoiseModel& model, int limit) {
  circuit.validate();
  model.validate(circuit.qubit_count);
  if (circuit.qubit_count > limit)
    throw CapacityError("circuit exceeds the density-matrix qubit limit");
  DensityMatrix dm(circuit.qubit_count);
  for (const Gate& g : circuit.gates) {
    dm.apply_unitary_gate(g);
    if (g.kind == GateKind::Cnot)
      dm.apply_depol2(g.control, g.target, model.depol2);
    else
      dm.apply_depol1(g.target, model.depol1);
  }
  return dm;
}

void DensityMatrix::apply_unitary_gate(const Gate& gate) {
  if (gate.kind == GateKind::Cnot)
    conj_cnot(gate.control, gate.target);
  else
    conj_unitary1q(gate.target, gate_matrix1q(gate));
}

void DensityMatrix::conj_unitary1q(int qubit, const Eigen::Matrix2cd& u) {
  rho_ = conj1q(rho_, n_, qubit, u);
}

void DensityMatrix::conj_cnot(int control, int target) {
  const std::size_t dim = rho_.rows();
  const std::size_t cs = std::size_t{1} << (n_ - 1 - control);
  const std::size_t ts = std::size_t{1} << (n_ - 1 - target);
  auto permute_rows = [&](Eigen::MatrixXcd& m) {
    for (std::size_t col = 0; col < dim; ++col)
      for (std::size_t i = 0; i < dim; ++i)
        if ((i & cs) && !(i & ts)) std::swap(m(i, col), m(i + ts, col));
  };
  permute_rows(rho_);
  Eigen::MatrixXcd adj = rho_.adjoint();
  permute_rows(adj);
  rho_ = adj.adjoint();
}

void DensityMatrix::apply_depol1(int qubit, double p) {
  if (p <= 0.0) return;
  Eigen::MatrixXcd acc = (1.0 - p) * rho_;
  for (int a = 0; a < 3; ++a)
    acc += (p / 3.0) *
           conj1q(rho_, n_, qubit, pauli_matrix(static_cast<Axis>(a)));
  rho_ = std::move(acc);
}

void DensityMatrix::apply_depol2(int a, int b, double p) {
  if (p <= 0.0) return;
  Eigen::MatrixXcd acc = (1.0 - p) * rho_;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i == 0 && j == 0) continue;
      Eigen::MatrixXcd term = rho_;
      if (i != 0) term = conj1q(term, n_, a, pauli_matrix(static_cast<Axis>(i - 1)));
      if (j != 0) term = conj1q(term, n_, b, pauli_matrix(static_cast<Axis>(j - 1)));
      acc += (p / 15.0) * term;
    }
  }
  rho_ = std::move(acc);
}

Eigen::Matrix2cd DensityMatrix::marginal1(int q) const {
  const std::size_t dim = rho_.rows();
  const std::size_t stride = std::size_t{1} << (n_ - 1 - q);
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  for (std::size_t base = 0; base < dim; ++base) {
    if (base & stride) continue;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        m(a, b) += rho_(base + a * stride, base + b * stride);
  }
  return m;
}

Eigen::Matrix4cd DensityMatrix::marginal2(int p, int q) const {
  if (p == q) throw ConfigError("pair marginal needs two distinct qubits");
  const std::size_t dim = rho_.rows();
  const std::size_t sp = std::size_t{1} << (n_ - 1 - p);
  const std::size_t sq = std::size_t{1} << (n_ - 1 - q);
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  for (std::size_t base = 0; base < dim; ++base) {
    if ((base & sp) || (base & sq)) continue;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c)
        m(r, c) += rho_(base + (r >> 1) * sp + (r & 1) * sq,
                        base + (c >> 1) * sp + (c & 1) * sq);
  }
  return m;
}

std::vector<double> DensityMatrix::probabilities(
    const MeasurementSetting& setting) const {
  if (static_cast<int>(setting.size()) != n_)
    throw ConfigError("measurement setting length must match the qubit count");
  Eigen::MatrixXcd r = rho_;
  Eigen::Matrix2cd hsd;  // rotates the Y eigenbasis onto Z
  hsd << 1.0, cplx(0, -1.0), 1.0, cplx(0, 1.0);
  hsd /= std::sqrt(2.0);
  for (int q = 0; q < n_; ++q) {
    if (setting[q] == Axis::X)
      r = conj1q(r, n_, q, gate_matrix1q(hadamard(q)));
    else if (setting[q] == Axis::Y)
      r = conj1q(r, n_, q, hsd);
  }
  std::vector<double> probs(r.rows());
  for (std::size_t i = 0; i < probs.size(); ++i)
    probs[i] = std::max(0.0, r(i, i).real());
  return probs;
}

ExpectationSet density_expectations(const DensityMatrix& dm,
                                    const TomographyPlan& plan) {
  return expectations_from_marginals(
      dm.qubit_count(), plan.mode, plan.pairs,
      [&](int q) { return dm.marginal1(q); },
      [&](int p, int q) { return dm.marginal2(p, q); });
}

double noisy_ghz_zz(int n, int p, int q, const NoiseModel& model) {
  if (n < 2 || p == q || p < 0 || q < 0 || p >= n || q >= n)
    throw ConfigError("noisy_ghz_zz needs two distinct qubits of a chain");
  model.validate(n);
  // Damping eigenvalues of the depolarizing channels on non-identity Paulis.
  const double f1 = 1.0 - 4.0 * model.depol1 / 3.0;
  const double f2 = 1.0 - 16.0 * model.depol2 / 15.0;
  // Pull Z_p Z_q back through the CNOT ladder: CNOT(k -> k+1) maps
  // Z_{k+1} to Z_k Z_{k+1}; a channel damps the string iff it touches its
  // support.  The initial state after H is |+>|0...0>, so any surviving Z_0
  // kills the expectation.
  std::vector<char> support(n, 0);
  support[p] = support[q] = 1;
  double factor = 1.0;
  for (int k = n - 2; k >= 0; --k) {
    if (support[k] || support[k + 1]) factor *= f2;
    if (support[k + 1]) support[k] ^= 1;
  }
  if (support[0]) factor *= f1;
  return support[0] ? 0.0 : factor;
}

ExpectationSet noisy_ghz_expectations(
    int n, const NoiseModel& model, TomographyMode mode,
    const std::vector<std::pair<int, int>>& pairs) {
  if (n < 3)
    throw ConfigError("the analytic GHZ backend needs at least three qubits");
  model.validate(n);
  ExpectationSet es;
  es.qubit_count = n;
  es.mode = mode;
  es.shots = 0;
  es.singles.assign(n, {0.0, 0.0, 0.0});
  for (const auto& [p, q] : pairs) {
    for (const auto& [a, b] : pair_labels(mode)) {
      const double v = (a == Axis::Z && b == Axis::Z)
                           ? noisy_ghz_zz(n, p, q, model)
                           : 0.0;
      es.set_pair(p, a, q, b, v);
    }
  }
  return es;
}

ExpectationSet ghz_sampled_expectations(
    int n, const NoiseModel& model, TomographyMode mode,
    const std::vector<std::pair<int, int>>& pairs, long long shots,
    std::uint64_t seed) {
  if (shots <= 0) throw ConfigError("shots must be positive");
  const ExpectationSet exact = noisy_ghz_expectations(n, model, mode, pairs);
  ExpectationSet es;
  es.qubit_count = n;
  es.mode = mode;
  es.shots = shots;
  es.singles.assign(n, {0.0, 0.0, 0.0});

  auto sample_parity1 = [&](int q, std::uint64_t stream) {
    const auto [e01, e10] = model.readout_for(q);
    // True marginal of every GHZ qubit is maximally mixed in every basis.
    const double p1 = 0.5 * (e01 + 1.0 - e10);
    std::mt19937_64 rng(mix_seed(seed, stream));
    long long ones = 0;
    for (long long s = 0; s < shots; ++s)
      if (uniform01(rng) < p1) ++ones;
    return 1.0 - 2.0 * static_cast<double>(ones) / shots;
  };
  auto sample_parity2 = [&](int p, int q, double zz, std::uint64_t stream) {
    const auto [e01p, e10p] = model.readout_for(p);
    const auto [e01q, e10q] = model.readout_for(q);
    std::mt19937_64 rng(mix_seed(seed, stream));
    double parity = 0.0;
    for (long long s = 0; s < shots; ++s) {
      // Joint outcome from p(b1,b2) = (1 + (-1)^(b1+b2) zz) / 4.
      const double u = uniform01(rng);
      const double even = 0.25 * (1.0 + zz);
      int b1, b2;
      if (u < even) {
        b1 = b2 = 0;
      } else if (u < 2.0 * even) {
        b1 = b2 = 1;
      } else {
        b1 = u < even + 0.5 ? 0 : 1;
        b2 = 1 - b1;
      }
      if (uniform01(rng) < (b1 ? e10p : e01p)) b1 ^= 1;
      if (uniform01(rng) < (b2 ? e10q : e01q)) b2 ^= 1;
      parity += (b1 ^ b2) ? -1.0 : 1.0;
    }
    return parity / shots;
  };

  std::uint64_t stream = 1;
  const auto axes = mode == TomographyMode::RealOnly
                        ? std::vector<Axis>{Axis::X, Axis::Z}
                        : std::vector<Axis>{Axis::X, Axis::Y, Axis::Z};
  for (int q = 0; q < n; ++q)
    for (Axis a : axes) es.set_single(q, a, sample_parity1(q, stream++));
  for (const auto& [p, q] : pairs) {
    for (const auto& [a, b] : pair_labels(mode)) {
      const double zz = (a == Axis::Z && b == Axis::Z)
                            ? exact.pair_value(p, Axis::Z, q, Axis::Z)
                            : 0.0;
      es.set_pair(p, a, q, b, sample_parity2(p, q, zz, stream++));
    }
  }
  return es;
}

MitigationFilter calibrate_tensored(const CalibrationSampler& sampler, int n,
                                    long long shots, std::uint64_t seed) {
  if (shots < 100)
    throw ConfigError("calibration needs at least 100 shots per circuit");
  if (n < 1) throw ConfigError("calibration needs at least one qubit");
  const CountTable zeros = sampler(false, shots, mix_seed(seed, 1));
  const CountTable ones = sampler(true, shots, mix_seed(seed, 2));
  auto marginal_flips = [n](const CountTable& t, char bad) {
    std::vector<double> f(n, 0.0);
    long long total = 0;
    for (const auto& [bits, num] : t.counts) {
      total += num;
      for (int q = 0; q < n; ++q)
        if (bits[q] == bad) f[q] += static_cast<double>(num);
    }
    if (total <= 0) throw ConfigError("empty calibration table");
    for (double& v : f) v /= static_cast<double>(total);
    return f;
  };
  const std::vector<double> e01 = marginal_flips(zeros, '1');
  const std::vector<double> e10 = marginal_flips(ones, '0');
  MitigationFilter filter;
  filter.calibration_shots = shots;
  filter.confusion.resize(n);
  for (int q = 0; q < n; ++q) {
    filter.confusion[q] << 1.0 - e01[q], e10[q], e01[q], 1.0 - e10[q];
    for (double e : {e01[q], e10[q]})
      filter.residual = std::max(
          filter.residual, std::sqrt(e * (1.0 - e) / static_cast<double>(shots)));
  }
  return filter;
}

MitigationFilter calibrate_tensored(int n, const NoiseModel& model,
                                    long long shots, std::uint64_t seed) {
  if (n > kDenseQubitLimit)
    throw CapacityError("calibration sampling is capped at the dense limit");
  return calibrate_tensored(
      [&](bool ones, long long s, std::uint64_t sd) {
        PureState state = zero_state(n);
        if (ones) {
          Circuit c;
          c.qubit_count = n;
          for (int q = 0; q < n; ++q) c.gates.push_back(pauli_x(q));
          state = simulate(c);
        }
        const MeasurementSetting setting(n, Axis::Z);
        return sample_counts(state, setting, s, &model, sd);
      },
      n, shots, seed);
}

namespace {

// One tensored factor applied in place along the qubit's bit axis.
void apply_factor(std::vector<double>& v, int n, int q,
                  const Eigen::Matrix2d& m) {
  const std::size_t stride = std::size_t{1} << (n - 1 - q);
  for (std::size_t base = 0; base < v.size(); ++base) {
    if (base & stride) continue;
    const double a = v[base];
    const double b = v[base + stride];
    v[base] = m(0, 0) * a + m(0, 1) * b;
    v[base + stride] = m(1, 0) * a + m(1, 1) * b;
  }
}

void apply_tensored(std::vector<double>& v, const MitigationFilter& f,
                    bool transpose) {
  const int n = f.qubit_count();
  for (int q = 0; q < n; ++q) {
    const Eigen::Matrix2d m =
        transpose ? f.confusion[q].transpose() : f.confusion[q];
    apply_factor(v, n, q, m);
  }
}

// Euclidean projection onto {x >= 0, sum x = mass}.
std::vector<double> project_simplex(std::vector<double> v, double mass) {
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cum = 0.0, tau = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cum += u[j];
    const double t = (cum - mass) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0)
      tau = t;
    else
      break;
  }
  for (double& x : v) x = std::max(0.0, x - tau);
  return v;
}

}  // namespace

std::vector<double> mitigate_probs(const std::vector<double>& c,
                                   const MitigationFilter& filter,
                                   int max_iter, double tol) {
  const int n = filter.qubit_count();
  if (c.size() != (std::size_t{1} << n))
    throw ConfigError("distribution length must be 2^n for the filter");
  const double mass = std::accumulate(c.begin(), c.end(), 0.0);
  double lipschitz = 1.0;
  for (const auto& m : filter.confusion) {
    const double smax =
        Eigen::JacobiSVD<Eigen::Matrix2d>(m).singularValues()(0);
    lipschitz *= smax * smax;
  }
  const double step = 1.0 / lipschitz;
  std::vector<double> x = project_simplex(c, mass);
  for (int it = 0; it < max_iter; ++it) {
    std::vector<double> r = x;
    apply_tensored(r, filter, false);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= c[i];
    apply_tensored(r, filter, true);
    std::vector<double> next = x;
    for (std::size_t i = 0; i < x.size(); ++i) next[i] = x[i] - step * r[i];
    next = project_simplex(std::move(next), mass);
    double delta = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
      delta = std::max(delta, std::abs(next[i] - x[i]));
    x = std::move(next);
    if (delta < tol) return x;
  }
  throw NumericError("mitigation did not converge within the iteration cap");
}

FreqTable mitigate(const CountTable& counts, const MitigationFilter& filter,
                   int max_iter, double tol) {
  const int n = filter.qubit_count();
  if (static_cast<int>(counts.setting.size()) != n)
    throw ConfigError("count table and filter disagree on the qubit count");
  if (counts.shots <= 0) throw ConfigError("empty count table");
  std::vector<double> c(std::size_t{1} << n, 0.0);
  for (const auto& [bits, num] : counts.counts)
    c[bits_to_index(bits)] +=
        static_cast<double>(num) / static_cast<double>(counts.shots);
  const std::vector<double> x = mitigate_probs(c, filter, max_iter, tol);
  FreqTable out;
  out.setting = counts.setting;
  out.weight = static_cast<double>(counts.shots);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] > 0.0) out.freqs[index_to_bits(i, n)] = x[i];
  return out;
}

}  // namespace xcs
