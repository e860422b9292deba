#include "hawkscan/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace hawkscan {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) {
      throw std::invalid_argument("unknown key '" + key + "' in " + where);
    }
  }
}

std::vector<double> number_array(const json& j, const std::string& what) {
  if (!j.is_array()) throw std::invalid_argument(what + " must be an array");
  std::vector<double> out;
  for (const auto& x : j) {
    if (!x.is_number()) throw std::invalid_argument(what + " must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

Kernel parse_kernel(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("kernel must be an object");
  if (!j.contains("family") || !j["family"].is_string()) {
    throw std::invalid_argument("kernel.family is required");
  }
  std::optional<double> trunc;
  if (j.contains("truncation") && !j["truncation"].is_null()) {
    if (!j["truncation"].is_number()) {
      throw std::invalid_argument("kernel.truncation must be a number or null");
    }
    trunc = j["truncation"].get<double>();
  }
  const auto family = j["family"].get<std::string>();
  if (family == "exponential") {
    reject_unknown(j, {"family", "beta", "truncation"}, "kernel");
    if (!j.contains("beta") || !j["beta"].is_number()) {
      throw std::invalid_argument("kernel.beta is required");
    }
    return Kernel::exponential(j["beta"].get<double>(), trunc);
  }
  if (family == "tabulated") {
    reject_unknown(j, {"family", "grid", "values", "truncation"}, "kernel");
    if (!j.contains("grid") || !j.contains("values")) {
      throw std::invalid_argument("tabulated kernel needs grid and values");
    }
    return Kernel::tabulated(number_array(j["grid"], "kernel.grid"),
                             number_array(j["values"], "kernel.values"), trunc);
  }
  throw std::invalid_argument("unknown kernel family '" + family + "'");
}

json kernel_to_json(const Kernel& k) {
  json j;
  if (k.is_exponential()) {
    j["family"] = "exponential";
    j["beta"] = k.beta();
  } else {
    j["family"] = "tabulated";
    j["grid"] = k.grid();
    j["values"] = k.values();
  }
  j["truncation"] = k.truncation() ? json(*k.truncation()) : json(nullptr);
  return j;
}

double parse_double(const std::string& s, std::size_t line) {
  const char* begin = s.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE || !std::isfinite(v)) {
    throw std::runtime_error("line " + std::to_string(line) +
                             ": invalid time '" + s + "'");
  }
  return v;
}

int parse_int(const std::string& s, std::size_t line) {
  const char* begin = s.c_str();
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(begin, &end, 10);
  if (end == begin || *end != '\0' || errno == ERANGE || v < 0 ||
      v > std::numeric_limits<int>::max()) {
    throw std::runtime_error("line " + std::to_string(line) +
                             ": invalid node index '" + s + "'");
  }
  return static_cast<int>(v);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

HawkesModel parse_model(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("model file is not valid JSON: ") +
                                e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("model must be a JSON object");
  reject_unknown(j, {"d", "mu", "a", "kernel", "edge_kernels"}, "model");
  if (!j.contains("d") || !j["d"].is_number_integer()) {
    throw std::invalid_argument("model.d must be an integer");
  }
  const int d = j["d"].get<int>();
  if (d <= 0) throw std::invalid_argument("model.d must be positive");
  if (!j.contains("mu")) throw std::invalid_argument("model.mu is required");
  if (!j.contains("a")) throw std::invalid_argument("model.a is required");

  const auto mu_v = number_array(j["mu"], "mu");
  if (static_cast<int>(mu_v.size()) != d) {
    throw std::invalid_argument("mu must have d entries");
  }
  Eigen::VectorXd mu = Eigen::Map<const Eigen::VectorXd>(mu_v.data(), d);

  const json& a_j = j["a"];
  if (!a_j.is_array() || static_cast<int>(a_j.size()) != d) {
    throw std::invalid_argument("a must be an array of d rows");
  }
  Eigen::MatrixXd a(d, d);
  for (int i = 0; i < d; ++i) {
    const auto row = number_array(a_j[static_cast<std::size_t>(i)], "a row");
    if (static_cast<int>(row.size()) != d) {
      throw std::invalid_argument("every row of a must have d entries");
    }
    for (int c = 0; c < d; ++c) a(i, c) = row[static_cast<std::size_t>(c)];
  }

  const bool has_kernel = j.contains("kernel");
  const bool has_edges = j.contains("edge_kernels");
  if (has_kernel == has_edges) {
    throw std::invalid_argument(
        "model needs exactly one of 'kernel' or 'edge_kernels'");
  }
  if (has_kernel) return HawkesModel(mu, a, parse_kernel(j["kernel"]));
  const json& e = j["edge_kernels"];
  if (!e.is_array() || e.size() != static_cast<std::size_t>(d * d)) {
    throw std::invalid_argument("edge_kernels must hold d * d kernels");
  }
  std::vector<Kernel> kernels;
  for (const auto& k : e) kernels.push_back(parse_kernel(k));
  return HawkesModel(mu, a, std::move(kernels));
}

HawkesModel load_model(const std::string& path) {
  return parse_model(read_text_file(path));
}

std::string model_to_json(const HawkesModel& model) {
  json j;
  const int d = model.dim();
  j["d"] = d;
  j["mu"] = std::vector<double>(model.mu().data(), model.mu().data() + d);
  json rows = json::array();
  for (int i = 0; i < d; ++i) {
    std::vector<double> r(static_cast<std::size_t>(d));
    for (int c = 0; c < d; ++c) r[static_cast<std::size_t>(c)] = model.alpha(i, c);
    rows.push_back(r);
  }
  j["a"] = rows;
  if (model.shared_kernel()) {
    j["kernel"] = kernel_to_json(model.common_kernel());
  } else {
    json e = json::array();
    for (const auto& k : model.kernels()) e.push_back(kernel_to_json(k));
    j["edge_kernels"] = e;
  }
  return j.dump(2) + "\n";
}

void save_model(const HawkesModel& model, const std::string& path) {
  write_text_file(path, model_to_json(model));
}

EventStream parse_events_text(const std::string& text,
                              std::vector<std::string>* warnings) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  EventStream out;
  bool header = false;
  double raw_prev = 0.0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = trim(line);
    if (s.empty()) continue;
    if (!header) {
      if (s != "t,u") {
        throw std::runtime_error("line " + std::to_string(lineno) +
                                 ": expected header 't,u'");
      }
      header = true;
      continue;
    }
    const auto comma = s.find(',');
    if (comma == std::string::npos || s.find(',', comma + 1) != std::string::npos) {
      throw std::runtime_error("line " + std::to_string(lineno) +
                               ": expected two fields 't,u'");
    }
    double t = parse_double(trim(s.substr(0, comma)), lineno);
    const int u = parse_int(trim(s.substr(comma + 1)), lineno);
    if (t < 0.0) {
      throw std::runtime_error("line " + std::to_string(lineno) +
                               ": negative event time");
    }
    if (!out.events.empty()) {
      const double prev = out.events.back().t;
      if (t < raw_prev) {
        throw std::runtime_error("line " + std::to_string(lineno) +
                                 ": event times decrease");
      }
      raw_prev = t;
      // Exact ties (including runs of them) are spread 1e-9 apart.
      if (t <= prev) {
        t = prev + 1e-9;
        if (warnings) {
          warnings->push_back("line " + std::to_string(lineno) +
                              ": duplicate timestamp shifted by 1e-9");
        }
      }
    }
    if (out.events.empty()) raw_prev = t;
    out.events.push_back({t, u});
  }
  if (!header) throw std::runtime_error("events file is missing the 't,u' header");
  out.horizon = out.events.empty() ? 0.0 : out.events.back().t;
  return out;
}

EventStream parse_events(const std::string& path,
                         std::vector<std::string>* warnings) {
  return parse_events_text(read_text_file(path), warnings);
}

std::string events_to_csv(const EventStream& stream) {
  std::string out = "t,u\n";
  char buf[64];
  for (const Event& e : stream.events) {
    std::snprintf(buf, sizeof buf, "%.17g,%d\n", e.t, e.u);
    out += buf;
  }
  return out;
}

void write_events(const EventStream& stream, const std::string& path) {
  write_text_file(path, events_to_csv(stream));
}

Eigen::MatrixXd read_matrix_csv(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::string line;
  std::vector<std::vector<double>> rows;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(parse_double(trim(cell), lineno));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::runtime_error("line " + std::to_string(lineno) +
                               ": ragged matrix row");
    }
    rows.push_back(std::move(row));
  }
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = r == 0 ? 0 : static_cast<Eigen::Index>(rows.front().size());
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index k = 0; k < c; ++k) {
      m(i, k) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
    }
  }
  return m;
}

void write_matrix_csv(const Eigen::MatrixXd& m, const std::string& path) {
  std::string out;
  char buf[64];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      std::snprintf(buf, sizeof buf, k == 0 ? "%.17g" : ",%.17g", m(i, k));
      out += buf;
    }
    out += "\n";
  }
  write_text_file(path, out);
}

void write_trajectory(const DetectionOutcome& outcome, const std::string& path) {
  std::string out = "t,S,tau_hat\n";
  char buf[128];
  for (const auto& r : outcome.trajectory) {
    if (std::isnan(r.tau_hat)) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,\n", r.t, r.statistic);
    } else {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", r.t, r.statistic,
                    r.tau_hat);
    }
    out += buf;
  }
  write_text_file(path, out);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace hawkscan
