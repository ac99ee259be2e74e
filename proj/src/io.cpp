#include "kzk/io.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace kzk {

namespace {

// Enough digits to round-trip doubles.
void set_precision(std::ostream& os) { os << std::setprecision(17); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || trim(text.substr(used)).size() != 0)
    throw std::invalid_argument("config: value of '" + key + "' is not a number: " + text);
  return v;
}

}  // namespace

std::string to_string(RampKind kind) { return kind == RampKind::linear ? "linear" : "waiting"; }

std::string to_string(CorrelatorMethod method) {
  return method == CorrelatorMethod::quadrature ? "quadrature" : "closed-form";
}

void write_spectrum_csv(std::ostream& os, const ModeSpectrum& s) {
  set_precision(os);
  os << "k,p_k,phi_k\n";
  for (Eigen::Index i = 0; i < s.size(); ++i) os << s.k(i) << ',' << s.p(i) << ',' << s.phi(i) << '\n';
}

void write_correlators_csv(std::ostream& os, const CorrelatorTable& t) {
  set_precision(os);
  os << "# method=" << to_string(t.method) << " tau_q=" << t.tau_q << " A=" << t.shift.a
     << " B=" << t.shift.b << '\n';
  os << "R,N_R,re_Delta_R,im_Delta_R,abs_Delta_R\n";
  for (int r = 0; r <= t.r_max; ++r) {
    const cplx d = t.anomalous(r);
    os << r << ',' << t.normal(r) << ',' << d.real() << ',' << d.imag() << ',' << std::abs(d) << '\n';
  }
}

void write_series_csv(std::ostream& os, const DistributionSeries& s) {
  set_precision(os);
  os << "L,value,log10_value\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    os << s.index[i] << ',' << s.value(i) << ',';
    if (s.sign[i] == 0)
      os << "-inf";
    else
      os << s.log_abs[i] / std::log(10.0);
    os << '\n';
  }
}

void write_pairwave_csv(std::ostream& os, const PairWave& w) {
  set_precision(os);
  os << "n,re_Z,im_Z,abs_Z,n_over_xi,scaled_abs_Z\n";
  const double scale = w.length / (2.0 * std::sqrt(kPi));
  for (std::size_t i = 0; i < w.n.size(); ++i) {
    const cplx z = w.z[i];
    os << w.n[i] << ',' << z.real() << ',' << z.imag() << ',' << std::abs(z) << ','
       << w.n[i] / w.length << ',' << std::abs(z) * scale << '\n';
  }
}

nlohmann::json to_json(const RampSpec& r) {
  nlohmann::json j;
  j["kind"] = to_string(r.kind);
  j["tau_q"] = r.tau_q;
  j["g_start"] = r.g_start;
  if (r.kind == RampKind::waiting) {
    j["g_w"] = r.g_w;
    j["w"] = r.w;
  }
  return j;
}

RampSpec ramp_from_json(const nlohmann::json& j) {
  RampSpec r;
  const std::string kind = j.value("kind", std::string("linear"));
  if (kind == "linear")
    r.kind = RampKind::linear;
  else if (kind == "waiting")
    r.kind = RampKind::waiting;
  else
    throw std::invalid_argument("ramp: unknown kind '" + kind + "'");
  r.tau_q = j.value("tau_q", r.tau_q);
  r.g_start = j.value("g_start", r.g_start);
  r.g_w = j.value("g_w", r.g_w);
  r.w = j.value("w", r.w);
  r.validate();
  return r;
}

nlohmann::json to_json(const DistributionSeries& s) {
  nlohmann::json j;
  j["kind"] = to_string(s.kind);
  j["tau_q"] = s.tau_q;
  j["A"] = s.shift.a;
  j["B"] = s.shift.b;
  j["dephased"] = s.dephased;
  auto& rows = j["values"] = nlohmann::json::array();
  for (std::size_t i = 0; i < s.size(); ++i) {
    nlohmann::json row;
    row["index"] = s.index[i];
    row["value"] = s.value(i);
    row["sign"] = s.sign[i];
    if (s.sign[i] != 0) row["log_abs"] = s.log_abs[i];
    rows.push_back(row);
  }
  return j;
}

std::map<std::string, std::string> parse_key_values(std::istream& is) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      std::ostringstream msg;
      msg << "config line " << lineno << ": expected key = value";
      throw std::invalid_argument(msg.str());
    }
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

std::string to_key_values(const RampSpec& r) {
  std::ostringstream os;
  set_precision(os);
  os << "kind = " << to_string(r.kind) << '\n';
  os << "tau_q = " << r.tau_q << '\n';
  os << "g_start = " << r.g_start << '\n';
  if (r.kind == RampKind::waiting) {
    os << "g_w = " << r.g_w << '\n';
    os << "w = " << r.w << '\n';
  }
  return os.str();
}

RampSpec ramp_from_key_values(const std::map<std::string, std::string>& kv) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [key, value] : kv) {
    if (key == "kind")
      j["kind"] = value;
    else if (key == "tau_q" || key == "g_start" || key == "g_w" || key == "w")
      j[key] = parse_double(key, value);
  }
  return ramp_from_json(j);
}

}  // namespace kzk
