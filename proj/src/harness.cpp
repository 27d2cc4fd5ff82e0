#include "xcs/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "xcs/errors.hpp"
#include "xcs/rng.hpp"
#include "xcs/serialization.hpp"
#include "xcs/statevector.hpp"
#include "xcs/tomography.hpp"

namespace xcs {

namespace {

using nlohmann::json;

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw ConfigError("bad numeric field in CSV: " + s);
  return v;
}

template <typename F>
void parallel_for(std::size_t count, int workers, F&& f) {
  workers = std::max(1, std::min<int>(workers, static_cast<int>(count)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::filesystem::path json_mirror_path(const std::string& csv_path) {
  std::filesystem::path p(csv_path);
  p.replace_extension(".json");
  return p;
}

bool gate_noise_active(const NoiseModel* nm) {
  return nm && (nm->depol1 > 0.0 || nm->depol2 > 0.0);
}

using Sampler =
    std::function<CountTable(const MeasurementSetting&, std::uint64_t)>;

ExpectationSet sampled_pipeline(int n, const TomographyPlan& plan,
                                const Sampler& sampler, long long shots,
                                const NoiseModel* noise, bool mitigate_flag,
                                std::uint64_t seed) {
  std::vector<CountTable> tables;
  tables.reserve(plan.settings.size());
  for (std::size_t i = 0; i < plan.settings.size(); ++i)
    tables.push_back(sampler(plan.settings[i], mix_seed(seed, 16 + i)));
  if (!mitigate_flag) return expectations_from_counts(tables, plan);
  if (!noise)
    throw ConfigError("mitigation requires a noise model for calibration");
  const MitigationFilter filter =
      calibrate_tensored(n, *noise, std::max<long long>(shots, 100),
                         mix_seed(seed, 1));
  std::vector<FreqTable> fts;
  fts.reserve(tables.size());
  for (const CountTable& t : tables) fts.push_back(mitigate(t, filter));
  return expectations_from_freq_tables(fts, plan);
}

ScanRow finish_row(const PrepAngles& angles, const ExpectationSet& es,
                   double herm_tol) {
  std::vector<OneRdm> rdms;
  for (int q = 0; q < es.qubit_count; ++q) rdms.push_back(one_rdm(es, q));
  const OccupationVector occ = occupations(rdms);
  const PolytopeVerdict verdict = check_constraints(occ);
  const SignatureReport report = signature_report(es, herm_tol);
  ScanRow row;
  row.angles = angles;
  row.n4 = occ.occ[3];
  row.n5 = occ.occ[4];
  row.n6 = occ.occ[5];
  row.lambda_g = report.lambda_g;
  row.lambda_d = report.lambda_d;
  row.slack = verdict.slack;
  return row;
}

}  // namespace

void ScanConfig::validate() const {
  if (!(step > 0.0)) throw ConfigError("scan step must be positive");
  if (!(stop >= start)) throw ConfigError("scan stop must be >= start");
  if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step))
    throw ConfigError("scan grid bounds must be finite");
  if (fix_theta1 && !std::isfinite(*fix_theta1))
    throw ConfigError("fixed theta1 must be finite");
  if (shots < 0) throw ConfigError("shots must be nonnegative");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (mitigate && shots == 0)
    throw ConfigError("mitigation applies to sampled counts; set --shots");
  if (mitigate && !noise)
    throw ConfigError("mitigation needs a noise model to calibrate against");
  if (noise) noise->validate(3);
}

std::vector<double> ScanConfig::axis_values() const {
  std::vector<double> vals;
  for (double v = start; v <= stop + 1e-9; v += step) vals.push_back(v);
  if (vals.empty()) vals.push_back(start);
  return vals;
}

ScanRow compute_scan_row(const PrepAngles& angles, const ScanConfig& config,
                         std::uint64_t row_seed) {
  const Circuit circuit = build_min3_prep(angles);
  const PureState state = simulate(circuit);
  const TomographyPlan plan =
      plan_settings(3, all_pairs(3), TomographyMode::Full);
  const NoiseModel* nm = config.noise ? &*config.noise : nullptr;

  ExpectationSet es;
  if (config.shots == 0) {
    if (gate_noise_active(nm)) {
      const DensityMatrix dm = DensityMatrix::evolve(circuit, *nm);
      es = density_expectations(dm, plan);
    } else {
      es = exact_expectations(state, plan);
    }
    if (nm) es = fold_readout(es, *nm);
  } else {
    Sampler sampler;
    const long long shots = config.shots;
    if (gate_noise_active(nm)) {
      auto dm = std::make_shared<DensityMatrix>(
          DensityMatrix::evolve(circuit, *nm));
      sampler = [dm, nm, shots](const MeasurementSetting& s, std::uint64_t sd) {
        return sample_counts_from_probs(dm->probabilities(s),
                                        dm->qubit_count(), s, shots, nm, sd);
      };
    } else {
      sampler = [&state, nm, shots](const MeasurementSetting& s,
                                    std::uint64_t sd) {
        return sample_counts(state, s, shots, nm, sd);
      };
    }
    es = sampled_pipeline(3, plan, sampler, config.shots, nm, config.mitigate,
                          row_seed);
  }
  return finish_row(angles, es, config.shots == 0 ? 1e-8 : 1e-6);
}

namespace {

std::string scan_key(const PrepAngles& a) {
  return format_double(a.theta1) + "," + format_double(a.theta2) + "," +
         format_double(a.theta3);
}

json scan_row_to_json(const ScanRow& r) {
  return json{{"theta1", r.angles.theta1}, {"theta2", r.angles.theta2},
              {"theta3", r.angles.theta3}, {"n4", r.n4},
              {"n5", r.n5},               {"n6", r.n6},
              {"lambda_g", r.lambda_g},   {"lambda_d", r.lambda_d},
              {"slack", r.slack}};
}

}  // namespace

std::string scan_csv_header() {
  return "theta1,theta2,theta3,n4,n5,n6,lambda_g,lambda_d,slack";
}

std::string scan_row_csv(const ScanRow& r) {
  return scan_key(r.angles) + "," + format_double(r.n4) + "," +
         format_double(r.n5) + "," + format_double(r.n6) + "," +
         format_double(r.lambda_g) + "," + format_double(r.lambda_d) + "," +
         format_double(r.slack);
}

std::vector<ScanRow> run_scan(const ScanConfig& config) {
  config.validate();
  const std::vector<double> t1 =
      config.fix_theta1 ? std::vector<double>{*config.fix_theta1}
                        : config.axis_values();
  const std::vector<double> axis = config.axis_values();

  std::vector<PrepAngles> grid;
  for (double a : t1)
    for (double b : axis)
      for (double c : axis) grid.push_back({a, b, c});

  // Resume: rows already in the output are kept, keyed by the angle triple.
  std::map<std::string, ScanRow> existing;
  if (!config.out.empty() && std::filesystem::exists(config.out)) {
    std::istringstream in(read_text_file(config.out));
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      if (first) {
        first = false;
        if (line != scan_csv_header())
          throw ConfigError("existing scan output has an unexpected header");
        continue;
      }
      const auto f = split_line(line);
      if (f.size() != 9) throw ConfigError("malformed scan CSV row");
      ScanRow r;
      r.angles = {parse_double(f[0]), parse_double(f[1]), parse_double(f[2])};
      r.n4 = parse_double(f[3]);
      r.n5 = parse_double(f[4]);
      r.n6 = parse_double(f[5]);
      r.lambda_g = parse_double(f[6]);
      r.lambda_d = parse_double(f[7]);
      r.slack = parse_double(f[8]);
      existing[scan_key(r.angles)] = r;
    }
  }

  std::vector<ScanRow> rows(grid.size());
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto it = existing.find(scan_key(grid[i]));
    if (it != existing.end())
      rows[i] = it->second;
    else
      todo.push_back(i);
  }
  parallel_for(todo.size(), config.workers, [&](std::size_t k) {
    const std::size_t i = todo[k];
    rows[i] = compute_scan_row(grid[i], config, mix_seed(config.seed, i));
  });

  if (!config.out.empty()) {
    std::ostringstream csv;
    csv << scan_csv_header() << '\n';
    json mirror = json::array();
    for (const ScanRow& r : rows) {
      csv << scan_row_csv(r) << '\n';
      mirror.push_back(scan_row_to_json(r));
    }
    write_text_file(config.out, csv.str());
    write_text_file(json_mirror_path(config.out).string(), mirror.dump(2) + "\n");
  }
  return rows;
}

const std::vector<int>& default_sweep_sizes() {
  static const std::vector<int> kSizes = {3,  4,  5,  6,  7,  8,  9,  10,
                                          11, 12, 13, 14, 15, 16, 22, 28,
                                          34, 39, 47, 53};
  return kSizes;
}

void SweepConfig::validate() const {
  if (shots < 0) throw ConfigError("shots must be nonnegative");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (mitigate && shots == 0)
    throw ConfigError("mitigation applies to sampled counts; set --shots");
  if (mitigate && !noise)
    throw ConfigError("mitigation needs a noise model to calibrate against");
  if (mitigate && backend == SweepBackend::Analytic)
    throw ConfigError(
        "mitigation operates on count tables, which only the dense backend "
        "produces");
  for (int n : sizes) {
    if (n < 1) throw ConfigError("sweep sizes must be positive");
    if (backend == SweepBackend::Analytic && n < 3)
      throw ConfigError("the analytic backend needs n >= 3");
  }
}

std::string SweepConfig::series() const {
  if (!noise) return "sim";
  return mitigate ? "mit" : "exp";
}

SweepRow compute_sweep_row(int n, const SweepConfig& config,
                           std::uint64_t row_seed) {
  const TomographyMode mode =
      n > 5 ? TomographyMode::RealOnly : TomographyMode::Full;
  const auto pairs = all_pairs(n);
  const NoiseModel* nm = config.noise ? &*config.noise : nullptr;
  if (nm) nm->validate(n);

  ExpectationSet es;
  if (config.backend == SweepBackend::Analytic) {
    static const NoiseModel kIdeal;
    const NoiseModel& model = nm ? *nm : kIdeal;
    if (config.shots == 0) {
      es = noisy_ghz_expectations(n, model, mode, pairs);
      if (nm) es = fold_readout(es, *nm);
    } else {
      es = ghz_sampled_expectations(n, model, mode, pairs, config.shots,
                                    row_seed);
    }
  } else {
    if (n > kDenseQubitLimit)
      throw CapacityError(
          "dense backend is limited to 20 qubits; use --backend analytic");
    const Circuit circuit = build_ghz(n);
    const TomographyPlan plan = plan_settings(n, pairs, mode);
    if (config.shots == 0) {
      if (gate_noise_active(nm)) {
        const DensityMatrix dm = DensityMatrix::evolve(circuit, *nm);
        es = density_expectations(dm, plan);
      } else {
        es = exact_expectations(simulate(circuit), plan);
      }
      if (nm) es = fold_readout(es, *nm);
    } else {
      Sampler sampler;
      const long long shots = config.shots;
      if (gate_noise_active(nm)) {
        auto dm = std::make_shared<DensityMatrix>(
            DensityMatrix::evolve(circuit, *nm));
        sampler = [dm, nm, shots](const MeasurementSetting& s,
                                  std::uint64_t sd) {
          return sample_counts_from_probs(dm->probabilities(s),
                                          dm->qubit_count(), s, shots, nm, sd);
        };
      } else {
        auto state = std::make_shared<PureState>(simulate(circuit));
        sampler = [state, nm, shots](const MeasurementSetting& s,
                                     std::uint64_t sd) {
          return sample_counts(*state, s, shots, nm, sd);
        };
      }
      es = sampled_pipeline(n, plan, sampler, shots, nm, config.mitigate,
                            row_seed);
    }
  }

  const SignatureReport report =
      signature_report(es, config.shots == 0 ? 1e-8 : 1e-6);
  SweepRow row;
  row.n = n;
  row.series = config.series();
  row.lambda_g = report.lambda_g;
  row.lambda_d = report.lambda_d;
  row.sum_above_one = report.sum_above_one;
  return row;
}

std::string sweep_csv_header() {
  return "n,series,lambda_g,lambda_d,sum_above_one";
}

std::string sweep_row_csv(const SweepRow& r) {
  return std::to_string(r.n) + "," + r.series + "," +
         format_double(r.lambda_g) + "," + format_double(r.lambda_d) + "," +
         format_double(r.sum_above_one);
}

std::vector<SweepRow> run_sweep(const SweepConfig& config) {
  config.validate();
  const std::vector<int>& sizes =
      config.sizes.empty() ? default_sweep_sizes() : config.sizes;

  std::map<std::string, SweepRow> existing;
  std::vector<SweepRow> kept_rows;  // foreign series rows are preserved
  if (!config.out.empty() && std::filesystem::exists(config.out)) {
    std::istringstream in(read_text_file(config.out));
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      if (first) {
        first = false;
        if (line != sweep_csv_header())
          throw ConfigError("existing sweep output has an unexpected header");
        continue;
      }
      const auto f = split_line(line);
      if (f.size() != 5) throw ConfigError("malformed sweep CSV row");
      SweepRow r;
      r.n = static_cast<int>(parse_double(f[0]));
      r.series = f[1];
      r.lambda_g = parse_double(f[2]);
      r.lambda_d = parse_double(f[3]);
      r.sum_above_one = parse_double(f[4]);
      const std::string key = f[0] + "," + f[1];
      if (r.series == config.series())
        existing[key] = r;
      else
        kept_rows.push_back(r);
    }
  }

  std::vector<SweepRow> rows(sizes.size());
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const std::string key =
        std::to_string(sizes[i]) + "," + config.series();
    const auto it = existing.find(key);
    if (it != existing.end())
      rows[i] = it->second;
    else
      todo.push_back(i);
  }
  parallel_for(todo.size(), config.workers, [&](std::size_t k) {
    const std::size_t i = todo[k];
    rows[i] = compute_sweep_row(sizes[i], config, mix_seed(config.seed, i));
  });

  if (!config.out.empty()) {
    std::ostringstream csv;
    csv << sweep_csv_header() << '\n';
    json mirror = json::array();
    auto emit = [&](const SweepRow& r) {
      csv << sweep_row_csv(r) << '\n';
      mirror.push_back(json{{"n", r.n},
                            {"series", r.series},
                            {"lambda_g", r.lambda_g},
                            {"lambda_d", r.lambda_d},
                            {"sum_above_one", r.sum_above_one}});
    };
    for (const SweepRow& r : kept_rows) emit(r);
    for (const SweepRow& r : rows) emit(r);
    write_text_file(config.out, csv.str());
    write_text_file(json_mirror_path(config.out).string(), mirror.dump(2) + "\n");
  }
  return rows;
}

std::string report_json(const std::vector<std::string>& csv_paths) {
  if (csv_paths.empty())
    throw ConfigError("report needs at least one sweep CSV");
  std::map<int, std::map<std::string, double>> table;
  for (const std::string& path : csv_paths) {
    if (!std::filesystem::exists(path))
      throw ConfigError("missing report input: " + path);
    std::istringstream in(read_text_file(path));
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      if (first) {
        first = false;
        if (line != sweep_csv_header())
          throw ConfigError("report inputs must be sweep CSVs: " + path);
        continue;
      }
      const auto f = split_line(line);
      if (f.size() != 5) throw ConfigError("malformed sweep CSV row in " + path);
      table[static_cast<int>(parse_double(f[0]))][f[1]] = parse_double(f[2]);
    }
  }
  json rows = json::array();
  for (const auto& [n, by_series] : table) {
    json row;
    row["n"] = n;
    for (const char* s : {"sim", "mit", "exp"}) {
      const auto it = by_series.find(s);
      if (it != by_series.end()) row[std::string("lambda_g_") + s] = it->second;
    }
    rows.push_back(std::move(row));
  }
  json out;
  out["rows"] = std::move(rows);
  return out.dump(2) + "\n";
}

}  // namespace xcs
