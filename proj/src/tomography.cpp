#include "xcs/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "xcs/errors.hpp"
#include "xcs/noise.hpp"
#include "xcs/rng.hpp"

namespace xcs {

namespace {

const char kAxisChar[3] = {'X', 'Y', 'Z'};

int axis_index(Axis a) { return static_cast<int>(a); }

bool is_real_label(Axis a, Axis b) {
  // Labels contributing only to real RDM entries: XX, YY, ZZ, XZ, ZX.
  if (a == b) return true;
  return (a == Axis::X && b == Axis::Z) || (a == Axis::Z && b == Axis::X);
}

}  // namespace

std::string setting_to_string(const MeasurementSetting& s) {
  std::string out;
  out.reserve(s.size());
  for (Axis a : s) out.push_back(kAxisChar[axis_index(a)]);
  return out;
}

MeasurementSetting setting_from_string(const std::string& s) {
  MeasurementSetting out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case 'X': out.push_back(Axis::X); break;
      case 'Y': out.push_back(Axis::Y); break;
      case 'Z': out.push_back(Axis::Z); break;
      default: throw ConfigError("bad measurement setting letter");
    }
  }
  return out;
}

FreqTable to_freq_table(const CountTable& t) {
  FreqTable f;
  f.setting = t.setting;
  f.weight = static_cast<double>(t.shots);
  for (const auto& [bits, n] : t.counts)
    f.freqs[bits] = static_cast<double>(n) / static_cast<double>(t.shots);
  return f;
}

std::vector<std::pair<int, int>> all_pairs(int n) {
  std::vector<std::pair<int, int>> out;
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) out.emplace_back(p, q);
  return out;
}

bool setting_covers_single(const MeasurementSetting& s, int q, Axis a) {
  return s[q] == a;
}

bool setting_covers_pair(const MeasurementSetting& s, int p, Axis a, int q,
                         Axis b) {
  return s[p] == a && s[q] == b;
}

const std::vector<std::pair<Axis, Axis>>& pair_labels(TomographyMode mode) {
  static const std::vector<std::pair<Axis, Axis>> kReal = {
      {Axis::X, Axis::X}, {Axis::Y, Axis::Y}, {Axis::Z, Axis::Z},
      {Axis::X, Axis::Z}, {Axis::Z, Axis::X}};
  static const std::vector<std::pair<Axis, Axis>> kFull = [] {
    std::vector<std::pair<Axis, Axis>> v;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        v.emplace_back(static_cast<Axis>(a), static_cast<Axis>(b));
    return v;
  }();
  return mode == TomographyMode::RealOnly ? kReal : kFull;
}

TomographyPlan plan_settings(int n,
                             const std::vector<std::pair<int, int>>& pairs,
                             TomographyMode mode) {
  if (n < 1) throw ConfigError("plan_settings needs n >= 1");
  TomographyPlan plan;
  plan.qubit_count = n;
  plan.mode = mode;
  plan.pairs = pairs;

  // Requirements: every single-qubit axis, plus every (ordered) pair label of
  // the mode.  Encoded as integers for the cover bookkeeping.
  struct Req {
    int p, q;     // q < 0 marks a single
    Axis a, b;
  };
  std::vector<Req> reqs;
  for (int q = 0; q < n; ++q)
    for (int a = 0; a < 3; ++a)
      reqs.push_back({q, -1, static_cast<Axis>(a), Axis::X});
  for (const auto& [p, q] : pairs) {
    if (p == q || p < 0 || q < 0 || p >= n || q >= n)
      throw ConfigError("invalid tomography pair");
    for (const auto& [a, b] : pair_labels(mode)) {
      reqs.push_back({p, q, a, b});
      if (a != b) reqs.push_back({q, p, a, b});  // ordered coverage both ways
    }
  }

  auto covers = [](const MeasurementSetting& s, const Req& r) {
    if (r.q < 0) return s[r.p] == r.a;
    return s[r.p] == r.a && s[r.q] == r.b;
  };

  // Candidate pool: the three uniform settings plus bit-interleaved patterns;
  // any two distinct qubits differ in some index bit, so each ordered letter
  // pair appears for every qubit pair somewhere in the pool.
  std::vector<MeasurementSetting> candidates;
  for (int a = 0; a < 3; ++a)
    candidates.emplace_back(n, static_cast<Axis>(a));
  int bits = 0;
  while ((1 << bits) < n) ++bits;
  for (int k = 0; k < bits; ++k) {
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        if (a == b) continue;
        MeasurementSetting s(n);
        for (int q = 0; q < n; ++q)
          s[q] = ((q >> k) & 1) ? static_cast<Axis>(b) : static_cast<Axis>(a);
        candidates.push_back(std::move(s));
      }
    }
  }

  std::vector<bool> done(reqs.size(), false);
  std::size_t remaining = reqs.size();
  while (remaining > 0) {
    std::size_t best = 0, best_gain = 0;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      std::size_t gain = 0;
      for (std::size_t r = 0; r < reqs.size(); ++r)
        if (!done[r] && covers(candidates[c], reqs[r])) ++gain;
      if (gain > best_gain) {
        best_gain = gain;
        best = c;
      }
    }
    if (best_gain == 0)
      throw NumericError("setting cover failed; candidate pool incomplete");
    for (std::size_t r = 0; r < reqs.size(); ++r)
      if (!done[r] && covers(candidates[best], reqs[r])) {
        done[r] = true;
        --remaining;
      }
    plan.settings.push_back(candidates[best]);
  }
  return plan;
}

double ExpectationSet::single(int q, Axis a) const {
  return singles.at(q)[axis_index(a)];
}

bool ExpectationSet::has_pair(int p, int q) const {
  if (p > q) std::swap(p, q);
  return pair_data.count({p, q}) > 0;
}

double ExpectationSet::pair_value(int p, Axis a, int q, Axis b) const {
  if (p == q) throw MissingExpectationError("pair_value needs p != q");
  if (p > q) {
    std::swap(p, q);
    std::swap(a, b);
  }
  auto it = pair_data.find({p, q});
  if (it == pair_data.end())
    throw MissingExpectationError("no expectations for qubit pair");
  const int idx = axis_index(a) * 3 + axis_index(b);
  if (!it->second.present[idx]) {
    if (mode == TomographyMode::RealOnly && !is_real_label(a, b)) return 0.0;
    throw MissingExpectationError("missing pair label");
  }
  return it->second.value[idx];
}

void ExpectationSet::set_single(int q, Axis a, double v) {
  if (static_cast<int>(singles.size()) < qubit_count)
    singles.resize(qubit_count, {0.0, 0.0, 0.0});
  singles[q][axis_index(a)] = v;
}

void ExpectationSet::set_pair(int p, Axis a, int q, Axis b, double v) {
  if (p > q) {
    std::swap(p, q);
    std::swap(a, b);
  }
  PairData& d = pair_data[{p, q}];
  const int idx = axis_index(a) * 3 + axis_index(b);
  d.value[idx] = v;
  d.present[idx] = true;
}

const Eigen::Matrix2cd& pauli_matrix(Axis a) {
  static const Eigen::Matrix2cd kX = (Eigen::Matrix2cd() << 0, 1, 1, 0).finished();
  static const Eigen::Matrix2cd kY =
      (Eigen::Matrix2cd() << 0, cplx(0, -1), cplx(0, 1), 0).finished();
  static const Eigen::Matrix2cd kZ = (Eigen::Matrix2cd() << 1, 0, 0, -1).finished();
  switch (a) {
    case Axis::X: return kX;
    case Axis::Y: return kY;
    default: return kZ;
  }
}

const Eigen::Matrix2cd& identity2() {
  static const Eigen::Matrix2cd kI = Eigen::Matrix2cd::Identity();
  return kI;
}

ExpectationSet expectations_from_marginals(
    int n, TomographyMode mode, const std::vector<std::pair<int, int>>& pairs,
    const std::function<Eigen::Matrix2cd(int)>& single_marginal,
    const std::function<Eigen::Matrix4cd(int, int)>& pair_marginal_fn) {
  ExpectationSet es;
  es.qubit_count = n;
  es.mode = mode;
  es.shots = 0;
  es.singles.assign(n, {0.0, 0.0, 0.0});
  for (int q = 0; q < n; ++q) {
    const Eigen::Matrix2cd rho = single_marginal(q);
    for (int a = 0; a < 3; ++a)
      es.singles[q][a] =
          (rho * pauli_matrix(static_cast<Axis>(a))).trace().real();
  }
  for (const auto& [p, q] : pairs) {
    const Eigen::Matrix4cd rho = pair_marginal_fn(p, q);
    for (const auto& [a, b] : pair_labels(mode)) {
      Eigen::Matrix4cd op = Eigen::Matrix4cd::Zero();
      const Eigen::Matrix2cd& A = pauli_matrix(a);
      const Eigen::Matrix2cd& B = pauli_matrix(b);
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
          op.block<2, 2>(2 * r, 2 * c) = A(r, c) * B;
      es.set_pair(p, a, q, b, (rho * op).trace().real());
    }
  }
  return es;
}

ExpectationSet exact_expectations(const PureState& state,
                                  const TomographyPlan& plan) {
  return expectations_from_marginals(
      state.qubit_count, plan.mode, plan.pairs,
      [&](int q) { return qubit_marginal(state, q); },
      [&](int p, int q) { return pair_marginal(state, p, q); });
}

namespace {

void rotate_for_setting(PureState& st, const MeasurementSetting& setting) {
  const double r = 1.0 / std::sqrt(2.0);
  const cplx h[4] = {r, r, r, -r};
  // Maps the Y eigenbasis to the computational basis: H * Sdag.
  const cplx ybasis[4] = {r, cplx(0, -r), r, cplx(0, r)};
  for (int q = 0; q < st.qubit_count; ++q) {
    if (setting[q] == Axis::X) apply_matrix1q(st, q, h);
    else if (setting[q] == Axis::Y) apply_matrix1q(st, q, ybasis);
  }
}

std::string index_to_bits(std::size_t idx, int n) {
  std::string s(n, '0');
  for (int q = 0; q < n; ++q)
    if (idx & (std::size_t{1} << (n - 1 - q))) s[q] = '1';
  return s;
}

CountTable sample_from_prob_vector(const std::vector<double>& probs, int n,
                                   const MeasurementSetting& setting,
                                   long long shots, const NoiseModel* noise,
                                   std::uint64_t seed) {
  if (shots < 1) throw ConfigError("need shots >= 1");
  std::vector<double> cdf(probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    cdf[i] = acc;
  }
  std::mt19937_64 rng(seed);
  CountTable table;
  table.setting = setting;
  table.shots = shots;
  table.seed = seed;
  for (long long s = 0; s < shots; ++s) {
    const double u = uniform01(rng) * acc;
    std::size_t idx =
        std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
    if (idx >= probs.size()) idx = probs.size() - 1;
    if (noise) {
      for (int q = 0; q < n; ++q) {
        const std::size_t bit = std::size_t{1} << (n - 1 - q);
        const auto [e01, e10] = noise->readout_for(q);
        const double flip = (idx & bit) ? e10 : e01;
        if (uniform01(rng) < flip) idx ^= bit;
      }
    }
    ++table.counts[index_to_bits(idx, n)];
  }
  return table;
}

}  // namespace

CountTable sample_counts(const PureState& state,
                         const MeasurementSetting& setting, long long shots,
                         const NoiseModel* noise, std::uint64_t seed) {
  if (static_cast<int>(setting.size()) != state.qubit_count)
    throw ConfigError("setting length must match qubit count");
  PureState rotated = state;
  rotate_for_setting(rotated, setting);
  std::vector<double> probs(rotated.dim());
  for (std::size_t i = 0; i < rotated.dim(); ++i)
    probs[i] = std::norm(rotated.amps[i]);
  return sample_from_prob_vector(probs, state.qubit_count, setting, shots,
                                 noise, seed);
}

CountTable sample_counts_from_probs(const std::vector<double>& probs, int n,
                                    const MeasurementSetting& setting,
                                    long long shots, const NoiseModel* noise,
                                    std::uint64_t seed) {
  return sample_from_prob_vector(probs, n, setting, shots, noise, seed);
}

namespace {

ExpectationSet pooled_expectations(const std::vector<FreqTable>& tables,
                                   const TomographyPlan& plan) {
  const int n = plan.qubit_count;
  ExpectationSet es;
  es.qubit_count = n;
  es.mode = plan.mode;
  es.singles.assign(n, {0.0, 0.0, 0.0});
  double total_weight = 0.0;
  for (const auto& t : tables) total_weight += t.weight;
  es.shots = static_cast<long long>(total_weight);

  auto pooled = [&](auto&& covers_fn, auto&& parity_fn, const char* what) {
    double num = 0.0, den = 0.0;
    for (const FreqTable& t : tables) {
      if (!covers_fn(t.setting)) continue;
      double est = 0.0, mass = 0.0;
      for (const auto& [bits, f] : t.freqs) {
        est += parity_fn(bits) * f;
        mass += f;
      }
      if (mass > 0.0) est /= mass;
      num += t.weight * est;
      den += t.weight;
    }
    if (den == 0.0)
      throw MissingExpectationError(std::string("label uncovered: ") + what);
    return num / den;
  };

  for (int q = 0; q < n; ++q) {
    for (int a = 0; a < 3; ++a) {
      const Axis ax = static_cast<Axis>(a);
      es.singles[q][a] = pooled(
          [&](const MeasurementSetting& s) {
            return setting_covers_single(s, q, ax);
          },
          [&](const std::string& bits) { return bits[q] == '0' ? 1.0 : -1.0; },
          "single");
    }
  }
  for (const auto& [p, q] : plan.pairs) {
    for (const auto& [a, b] : pair_labels(plan.mode)) {
      // Ordered label (a on p, b on q); also store the mirrored order when
      // the letters differ.
      for (int rep = 0; rep < (a == b ? 1 : 2); ++rep) {
        const int pp = rep == 0 ? p : q;
        const int qq = rep == 0 ? q : p;
        const double v = pooled(
            [&](const MeasurementSetting& s) {
              return setting_covers_pair(s, pp, a, qq, b);
            },
            [&](const std::string& bits) {
              return (bits[pp] == bits[qq]) ? 1.0 : -1.0;
            },
            "pair");
        es.set_pair(pp, a, qq, b, v);
      }
    }
  }
  return es;
}

}  // namespace

ExpectationSet expectations_from_counts(const std::vector<CountTable>& tables,
                                        const TomographyPlan& plan) {
  std::vector<FreqTable> fts;
  fts.reserve(tables.size());
  for (const auto& t : tables) fts.push_back(to_freq_table(t));
  return pooled_expectations(fts, plan);
}

ExpectationSet expectations_from_freq_tables(
    const std::vector<FreqTable>& tables, const TomographyPlan& plan) {
  return pooled_expectations(tables, plan);
}

}  // namespace xcs
