#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "test_util.hpp"
#include "xcs/errors.hpp"
#include "xcs/gates.hpp"
#include "xcs/harness.hpp"
#include "xcs/noise.hpp"
#include "xcs/polytope.hpp"
#include "xcs/rdm.hpp"
#include "xcs/rng.hpp"
#include "xcs/serialization.hpp"

using namespace xcs;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

void report(int criterion, const std::string& name, bool ok,
            const std::string& detail = "") {
  std::cout << "[criterion " << criterion << "] " << name << ": "
            << (ok ? "PASS" : "FAIL");
  if (!detail.empty()) std::cout << "  (" << detail << ")";
  std::cout << std::endl;
}

void note(int criterion, const std::string& text) {
  std::cout << "[criterion " << criterion << "][note] " << text << std::endl;
}

double dense_lambda_g(int n) {
  return signature_report(testutil::full_exact(simulate(build_ghz(n)))).lambda_g;
}

SignatureReport analytic_ghz_report(int n) {
  const auto pairs = all_pairs(n);
  const auto es = expectations_from_marginals(
      n, TomographyMode::RealOnly, pairs,
      [n](int q) { return ghz_single_marginal(n, q); },
      [n](int p, int q) { return ghz_marginals(n, p, q).matrix; });
  return signature_report(es);
}

fs::path make_temp_dir() {
  static int counter = 0;
  const fs::path p = fs::temp_directory_path() /
                     ("xcs-accept-" + std::to_string(::getpid()) + "-" +
                      std::to_string(counter++));
  fs::create_directories(p);
  return p;
}

NoiseModel frozen_plateau_noise() {
  return noise_model_from_json(
      R"({"readout": 0.05, "depol1": 0.005, "depol2": 0.2})");
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

}  // namespace

TEST_CASE("criterion 1: condensate eigenvalue scales as n/2 on ghz states") {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::ostringstream detail;
  for (int n = 2; n <= 12; ++n) {
    const double lg = dense_lambda_g(n);
    if (std::abs(lg - n / 2.0) >= 1e-8) {
      ok = false;
      detail << " dense n=" << n << " lambda_g=" << lg;
    }
  }
  for (int n : {16, 22, 28, 34, 39, 47, 53}) {
    const double lg = analytic_ghz_report(n).lambda_g;
    if (std::abs(lg - n / 2.0) >= 1e-8) {
      ok = false;
      detail << " analytic n=" << n << " lambda_g=" << lg;
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  if (secs >= 60.0) {
    ok = false;
    detail << " runtime " << secs << "s >= 60s";
  }
  report(1, "lambda_g(ghz_n) = n/2 for n in {2..12, 16..53}", ok,
         detail.str().empty() ? "" : detail.str());
  CHECK(ok);

  // n = 1 boundary: a single "site" has no pair coherences, and |+> is a
  // product state, so the largest eigenvalue is exactly 1, not 1/2.  Recorded
  // here as an advisory failure of the extrapolated n/2 law.
  const double lg1 = dense_lambda_g(1);
  note(1, "n=1 advisory: n/2 law predicts 0.5, observed " +
              format_double(lg1) + " -> FAIL (expected for a product state)");
  WARN_MESSAGE(std::abs(lg1 - 0.5) < 1e-8,
               "n=1 does not follow the n/2 law (known boundary case)");
  CHECK(std::abs(lg1 - 1.0) < 1e-10);
}

TEST_CASE("criterion 2: scan maximum sits at half filling") {
  const auto t0 = std::chrono::steady_clock::now();
  ScanConfig cfg;  // exact, default pi/6 grid on [0, pi/2]
  const auto rows = run_scan(cfg);
  const ScanRow* best = &rows.front();
  for (const ScanRow& r : rows)
    if (r.lambda_g > best->lambda_g) best = &r;
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  bool ok = std::abs(best->lambda_g - 1.5) < 1e-8 &&
            std::abs(best->n4 - 0.5) < 1e-8 && std::abs(best->n5 - 0.5) < 1e-8 &&
            std::abs(best->n6 - 0.5) < 1e-8 && secs < 10.0;
  std::ostringstream detail;
  detail << "max lambda_g=" << best->lambda_g << " at occ (" << best->n4 << ","
         << best->n5 << "," << best->n6 << "), " << secs << "s";
  report(2, "grid maximum lambda_g = 1.5 at occupations (1/2,1/2,1/2)", ok,
         detail.str());
  CHECK(ok);
}

TEST_CASE("criterion 3: every scanned state respects the polytope") {
  ScanConfig cfg;
  cfg.step = kPi / 12;  // denser 7^3 grid than the default scan
  const auto rows = run_scan(cfg);
  bool ok = !rows.empty();
  double worst_slack = 1e300;
  for (const ScanRow& r : rows) {
    worst_slack = std::min(worst_slack, r.slack);
    if (r.slack < -1e-8) ok = false;
    const OccupationVector occ{{1 - r.n6, 1 - r.n5, 1 - r.n4, r.n4, r.n5, r.n6}};
    const PolytopeVerdict v = check_constraints(occ);
    if (!v.pauli_ok || !v.generalized_ok) ok = false;
    for (double res : v.residuals)
      if (res >= 1e-8) ok = false;
  }
  std::ostringstream detail;
  detail << rows.size() << " states, min slack " << worst_slack;
  report(3, "generalized pauli constraints hold on the exact grid", ok,
         detail.str());
  CHECK(ok);
}

TEST_CASE("criterion 4: noninteracting states have a {0, 1} spectrum") {
  bool ok = true;
  for (int basis = 0; basis < 8; ++basis) {
    Circuit c;
    c.qubit_count = 3;
    for (int q = 0; q < 3; ++q)
      if (basis & (1 << (2 - q))) c.gates.push_back(pauli_x(q));
    const SignatureReport r = signature_report(testutil::full_exact(simulate(c)));
    for (double v : r.g_spectrum)
      if (std::min(std::abs(v), std::abs(v - 1.0)) >= 1e-9) ok = false;
    if (r.sum_above_one != 0.0) ok = false;
  }
  report(4, "product basis states give eigenvalues in {0, 1} +- 1e-9", ok);
  CHECK(ok);
}

TEST_CASE("criterion 5: geminal eigenvalue stays below one for n >= 3") {
  bool ok = true;
  std::ostringstream detail;
  for (int n = 3; n <= 10; ++n) {
    const double ld =
        signature_report(testutil::full_exact(simulate(build_ghz(n)))).lambda_d;
    if (!(ld < 1.0) || std::abs(ld - 0.5) >= 1e-10) {
      ok = false;
      detail << " n=" << n << " lambda_d=" << ld;
    }
  }
  report(5, "lambda_d(ghz_n) = 0.5 < 1 for n = 3..10", ok, detail.str());
  CHECK(ok);

  // n = 2 boundary: tracing out nothing keeps the full pair coherence, so
  // lambda_d reaches exactly 1.  Advisory failure of the "< 1" bound.
  const double ld2 =
      signature_report(testutil::full_exact(simulate(build_ghz(2)))).lambda_d;
  note(5, "n=2 advisory: '< 1' bound predicts strict inequality, observed " +
              format_double(ld2) + " -> FAIL (pair marginal is pure)");
  WARN_MESSAGE(ld2 < 1.0, "n=2 saturates the geminal bound (known boundary case)");
  CHECK(std::abs(ld2 - 1.0) < 1e-10);
}

TEST_CASE("criterion 6: assembled matrices match brute-force second quantization") {
  std::mt19937_64 rng(20260824);
  bool ok = true;
  double worst = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    const PureState st = testutil::random_real_state(3, rng);
    const auto es = testutil::full_exact(st);
    const double dg = (assemble_g_tilde(es).matrix - oracles::brute_force_g_tilde(st))
                          .cwiseAbs()
                          .maxCoeff();
    const double dd = (assemble_two_particle_rdm(es).matrix -
                       oracles::brute_force_two_rdm(st))
                          .cwiseAbs()
                          .maxCoeff();
    worst = std::max({worst, dg, dd});
    if (dg > 1e-10 || dd > 1e-10) ok = false;
  }
  std::ostringstream detail;
  detail << "50 random states, max deviation " << worst;
  report(6, "g_tilde and 2-rdm agree with the fock-space oracle", ok,
         detail.str());
  CHECK(ok);
}

TEST_CASE("criterion 7: sampled estimates concentrate at 8192 shots") {
  SweepConfig cfg;
  cfg.sizes = {3};
  cfg.shots = 8192;
  int hits = 0;
  for (int seed = 0; seed < 100; ++seed) {
    cfg.seed = seed;
    const SweepRow r = compute_sweep_row(3, cfg, mix_seed(seed, 0));
    if (std::abs(r.lambda_g - 1.5) < 0.08) ++hits;
  }
  const bool ok = hits >= 95;
  std::ostringstream detail;
  detail << hits << "/100 seeds within 0.08 of 1.5";
  report(7, "sampled lambda_g(ghz_3) within 0.08 in >= 95/100 runs", ok,
         detail.str());
  CHECK(ok);
}

TEST_CASE("criterion 8: readout mitigation moves estimates toward truth") {
  NoiseModel m;
  m.readout.push_back({0.05, 0.05});

  SweepConfig exp_cfg;
  exp_cfg.shots = 8192;
  exp_cfg.noise = m;
  SweepConfig mit_cfg = exp_cfg;
  mit_cfg.mitigate = true;
  SweepConfig sim_cfg;
  sim_cfg.shots = 8192;

  int closer = 0;
  for (int seed = 0; seed < 100; ++seed) {
    exp_cfg.seed = mit_cfg.seed = seed;
    const double exp_v = compute_sweep_row(3, exp_cfg, mix_seed(seed, 0)).lambda_g;
    const double mit_v = compute_sweep_row(3, mit_cfg, mix_seed(seed, 0)).lambda_g;
    if (std::abs(mit_v - 1.5) < std::abs(exp_v - 1.5)) ++closer;
  }
  bool ok = closer >= 95;

  // Median ordering sim >= mit >= exp across sizes (condensate signal is
  // damped by readout noise and restored by mitigation).
  std::ostringstream detail;
  detail << closer << "/100 paired seeds closer after mitigation;";
  for (int n = 3; n <= 6; ++n) {
    std::vector<double> sim_v, exp_v, mit_v;
    for (int seed = 0; seed < 11; ++seed) {
      sim_cfg.seed = exp_cfg.seed = mit_cfg.seed = 1000 + seed;
      sim_v.push_back(compute_sweep_row(n, sim_cfg, mix_seed(1000 + seed, 0)).lambda_g);
      exp_v.push_back(compute_sweep_row(n, exp_cfg, mix_seed(1000 + seed, 0)).lambda_g);
      mit_v.push_back(compute_sweep_row(n, mit_cfg, mix_seed(1000 + seed, 0)).lambda_g);
    }
    const double sim_m = median(sim_v), exp_m = median(exp_v), mit_m = median(mit_v);
    detail << " n=" << n << " sim/mit/exp " << format_double(sim_m) << "/"
           << format_double(mit_m) << "/" << format_double(exp_m) << ";";
    if (!(sim_m >= mit_m - 0.02 && mit_m > exp_m)) ok = false;
  }
  report(8, "mitigated lambda_g beats unmitigated under 5% readout error", ok,
         detail.str());
  CHECK(ok);
}

TEST_CASE("criterion 9: noisy signal grows then plateaus out to n = 53") {
  SweepConfig cfg;
  cfg.backend = SweepBackend::Analytic;
  cfg.noise = frozen_plateau_noise();
  cfg.sizes = default_sweep_sizes();
  const auto rows = run_sweep(cfg);

  bool ok = rows.size() == cfg.sizes.size();
  double lg3 = 0, lg10 = 0, lg39 = 0, lg53 = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0) {
      if (rows[i].lambda_g < rows[i - 1].lambda_g - 1e-12) ok = false;
      if (rows[i].sum_above_one <= rows[i - 1].sum_above_one) ok = false;
    }
    if (rows[i].n == 3) lg3 = rows[i].lambda_g;
    if (rows[i].n == 10) lg10 = rows[i].lambda_g;
    if (rows[i].n == 39) lg39 = rows[i].lambda_g;
    if (rows[i].n == 53) lg53 = rows[i].lambda_g;
  }
  if (!(lg10 - lg3 > 0.5)) ok = false;      // clear growth at small n
  if (!(lg53 - lg39 < 0.1)) ok = false;     // plateau at large n
  std::ostringstream detail;
  detail << "lambda_g: n=3 " << format_double(lg3) << ", n=10 "
         << format_double(lg10) << ", n=39 " << format_double(lg39) << ", n=53 "
         << format_double(lg53);
  report(9, "frozen noise sweep is monotone with a large-n plateau", ok,
         detail.str());
  CHECK(ok);
}

TEST_CASE("criterion 10: the cli is deterministic byte for byte") {
  const char* cli = std::getenv("XCS_CLI");
  REQUIRE_MESSAGE(cli != nullptr, "XCS_CLI must point at the built binary");
  const fs::path tmp = make_temp_dir();
  const std::string noise_path = (tmp / "noise.json").string();
  write_text_file(noise_path,
                  R"({"readout": 0.05, "depol1": 0.0, "depol2": 0.0, "seed": 0})");

  auto run_once = [&](const std::string& tag) {
    const std::string out = (tmp / (tag + ".csv")).string();
    std::ostringstream cmd;
    cmd << '"' << cli << '"'
        << " scan --grid pi/4 --shots 2048 --noise " << noise_path
        << " --mitigate --seed 7 --workers 3 --out " << out
        << " > /dev/null 2>&1";
    const int rc = std::system(cmd.str().c_str());
    REQUIRE_MESSAGE(rc == 0, "cli exited with status ", rc);
    return std::pair{read_text_file(out),
                     read_text_file((tmp / (tag + ".json")).string())};
  };
  const auto [csv_a, json_a] = run_once("a");
  const auto [csv_b, json_b] = run_once("b");
  const bool ok = csv_a == csv_b && json_a == json_b && !csv_a.empty();
  report(10, "repeated cli runs produce identical csv and json", ok);
  CHECK(ok);
  std::error_code ec;
  fs::remove_all(tmp, ec);
}
