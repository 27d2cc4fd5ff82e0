#include "xcs/serialization.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "xcs/errors.hpp"

namespace xcs {

using nlohmann::json;

namespace {

json parse(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ConfigError("malformed JSON");
  return j;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string count_table_to_json(const CountTable& t) {
  json j;
  j["setting"] = setting_to_string(t.setting);
  j["shots"] = t.shots;
  j["seed"] = t.seed;
  j["counts"] = json::object();
  for (const auto& [bits, n] : t.counts) j["counts"][bits] = n;
  return j.dump(2);
}

CountTable count_table_from_json(const std::string& text) {
  const json j = parse(text);
  CountTable t;
  try {
    t.setting = setting_from_string(j.at("setting").get<std::string>());
    t.shots = j.at("shots").get<long long>();
    t.seed = j.value("seed", std::uint64_t{0});
    for (const auto& [bits, n] : j.at("counts").items()) {
      if (bits.size() != t.setting.size())
        throw ConfigError("count bitstring length mismatch");
      t.counts[bits] = n.get<long long>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad count table: ") + e.what());
  }
  long long total = 0;
  for (const auto& [bits, n] : t.counts) {
    if (n < 0) throw ConfigError("negative count");
    total += n;
  }
  if (total != t.shots) throw ConfigError("counts do not sum to shots");
  return t;
}

std::string noise_model_to_json(const NoiseModel& m) {
  json j;
  j["readout"] = json::array();
  for (const auto& r : m.readout) j["readout"].push_back({r[0], r[1]});
  j["depol1"] = m.depol1;
  j["depol2"] = m.depol2;
  j["seed"] = m.seed;
  return j.dump(2);
}

NoiseModel noise_model_from_json(const std::string& text) {
  const json j = parse(text);
  if (!j.is_object()) throw ConfigError("noise model must be a JSON object");
  NoiseModel m;
  try {
    if (j.contains("readout")) {
      const json& r = j["readout"];
      if (r.is_number()) {
        const double eps = r.get<double>();
        m.readout.push_back({eps, eps});
      } else if (r.is_array()) {
        for (const json& e : r) {
          if (!e.is_array() || e.size() != 2)
            throw ConfigError("readout entries must be [e01, e10] pairs");
          m.readout.push_back({e[0].get<double>(), e[1].get<double>()});
        }
      } else {
        throw ConfigError("readout must be a scalar or a list of pairs");
      }
    }
    m.depol1 = j.value("depol1", 0.0);
    m.depol2 = j.value("depol2", 0.0);
    m.seed = j.value("seed", std::uint64_t{0});
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad noise model: ") + e.what());
  }
  for (const auto& r : m.readout)
    for (double e : r)
      if (!(e >= 0.0 && e <= 1.0))
        throw ConfigError("readout flip probabilities must lie in [0, 1]");
  if (!(m.depol1 >= 0.0 && m.depol1 <= 1.0) ||
      !(m.depol2 >= 0.0 && m.depol2 <= 1.0))
    throw ConfigError("depolarizing probabilities must lie in [0, 1]");
  return m;
}

NoiseModel load_noise_model(const std::string& path) {
  return noise_model_from_json(read_text_file(path));
}

std::string filter_to_json(const MitigationFilter& f) {
  json j;
  j["qubits"] = f.qubit_count();
  j["calibration_shots"] = f.calibration_shots;
  j["residual"] = f.residual;
  j["confusion"] = json::array();
  for (const auto& m : f.confusion)
    j["confusion"].push_back({{m(0, 0), m(0, 1)}, {m(1, 0), m(1, 1)}});
  return j.dump(2);
}

MitigationFilter filter_from_json(const std::string& text) {
  const json j = parse(text);
  MitigationFilter f;
  try {
    for (const json& m : j.at("confusion")) {
      Eigen::Matrix2d c;
      c << m.at(0).at(0).get<double>(), m.at(0).at(1).get<double>(),
          m.at(1).at(0).get<double>(), m.at(1).at(1).get<double>();
      f.confusion.push_back(c);
    }
    f.calibration_shots = j.value("calibration_shots", 0LL);
    f.residual = j.value("residual", 0.0);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad mitigation filter: ") + e.what());
  }
  if (j.contains("qubits") &&
      j["qubits"].get<int>() != f.qubit_count())
    throw ConfigError("filter qubit count disagrees with confusion list");
  for (const auto& m : f.confusion)
    for (int c = 0; c < 2; ++c)
      if (std::abs(m(0, c) + m(1, c) - 1.0) > 1e-6)
        throw ConfigError("confusion columns must sum to 1");
  return f;
}

MitigationFilter load_filter(const std::string& path) {
  return filter_from_json(read_text_file(path));
}

std::string matrix_to_csv(const Eigen::MatrixXcd& m) {
  std::ostringstream out;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      out << '(' << format_double(m(r, c).real()) << ' '
          << format_double(m(r, c).imag()) << ')';
    }
    out << '\n';
  }
  return out.str();
}

std::string matrix_to_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  j["entries"] = std::move(rows);
  return j.dump(2);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write file: " + path);
  out << content;
  if (!out) throw ConfigError("write failed: " + path);
}

}  // namespace xcs
