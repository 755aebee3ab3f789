// Copyright 2026 The qjump Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qjump: configuration-driven sweep runner over the qjump C API.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qjump/qjump.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliError : std::runtime_error {
  CliError(std::string kind, const std::string& msg) : std::runtime_error(msg), kind(std::move(kind)) {}
  std::string kind;
};

struct ApiError : std::runtime_error {
  ApiError(qj_status s, const std::string& msg) : std::runtime_error(msg), status(s) {}
  qj_status status;
};

void check(qj_status s) {
  if (s != QJ_OK) throw ApiError(s, qj_last_error());
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string cell(std::string s) {
  for (char& c : s) {
    if (c == ',') c = ';';
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

std::string status_text(const ApiError& e) { return std::string(qj_status_name(e.status)) + ": " + e.what(); }

// ---- config schema ----

const std::set<std::string> kCommands = {"phase-diagram", "fcs-cmf", "fcs-cumulant", "wtd", "oracle-check"};
const std::set<std::string> kTop = {"command", "params", "numerics", "output", "golden"};
const std::set<std::string> kParams = {"N", "Nc", "J", "h", "gamma", "alpha", "sums"};
const std::set<std::string> kNumerics = {"M", "dt", "t_final", "delta_chi", "n_samples", "seed", "t_cens",
                                         "distances", "criteria", "histograms", "distributions"};
const std::set<std::string> kOutput = {"path", "format"};
const std::set<std::string> kGolden = {"tolerances", "default_abs_tol", "rel_tol"};

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw CliError("schema", where + " must be an object");
  for (const auto& [k, v] : obj.items()) {
    if (!allowed.count(k)) throw CliError("schema", "unknown key '" + k + "' in " + where);
  }
}

// scalar, list, or {"from", "to", "step"}
std::vector<double> axis(const json& v, const std::string& name) {
  std::vector<double> out;
  if (v.is_number()) {
    out.push_back(v.get<double>());
  } else if (v.is_array()) {
    for (const auto& x : v) {
      if (!x.is_number()) throw CliError("schema", "params." + name + " entries must be numbers");
      out.push_back(x.get<double>());
    }
  } else if (v.is_object()) {
    reject_unknown(v, {"from", "to", "step"}, "params." + name);
    if (!v.contains("from") || !v.contains("to") || !v.contains("step")) {
      throw CliError("schema", "params." + name + " range needs from, to, step");
    }
    const double a = v["from"].get<double>(), b = v["to"].get<double>(), s = v["step"].get<double>();
    if (!(s > 0.0) || b < a) throw CliError("schema", "params." + name + " range is empty or step <= 0");
    const auto n = static_cast<long>(std::floor((b - a) / s + 1e-9));
    for (long k = 0; k <= n; ++k) out.push_back(std::round((a + static_cast<double>(k) * s) * 1e12) / 1e12);
  } else {
    throw CliError("schema", "params." + name + " must be a number, list or range");
  }
  if (out.empty()) throw CliError("schema", "params." + name + " sweep axis is empty");
  return out;
}

struct Point {
  double alpha, h, gamma, J;
  int N, Nc;
  std::string sums;
};

struct Config {
  json raw;
  std::string command;
  std::vector<Point> points;
  json numerics = json::object();
  std::string path;
  json golden = json::object();
};

int as_int(double v, const std::string& name) {
  if (v != std::floor(v)) throw CliError("schema", name + " must be an integer");
  return static_cast<int>(v);
}

Config load_config(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw CliError("io", "cannot open config " + file);
  Config c;
  try {
    c.raw = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw CliError("schema", std::string("config parse error: ") + e.what());
  }
  reject_unknown(c.raw, kTop, "config");
  if (!c.raw.contains("command") || !c.raw["command"].is_string()) throw CliError("schema", "missing command");
  c.command = c.raw["command"].get<std::string>();
  if (!kCommands.count(c.command)) throw CliError("schema", "unknown command '" + c.command + "'");
  if (c.raw.contains("numerics")) {
    reject_unknown(c.raw["numerics"], kNumerics, "numerics");
    c.numerics = c.raw["numerics"];
  }
  if (c.raw.contains("golden")) {
    reject_unknown(c.raw["golden"], kGolden, "golden");
    c.golden = c.raw["golden"];
  }
  c.path = c.command + ".csv";
  if (c.raw.contains("output")) {
    reject_unknown(c.raw["output"], kOutput, "output");
    const auto& o = c.raw["output"];
    if (o.contains("format") && o["format"] != "csv") throw CliError("schema", "only csv output is supported");
    if (o.contains("path")) c.path = o["path"].get<std::string>();
  }
  json params = c.raw.value("params", json::object());
  reject_unknown(params, kParams, "params");
  auto ax = [&](const char* k, double def) { return params.contains(k) ? axis(params[k], k) : std::vector<double>{def}; };
  const auto alphas = ax("alpha", 1.1), hs = ax("h", 1.0), gammas = ax("gamma", 0.5), Js = ax("J", 1.0);
  const auto Ns = ax("N", 2), Ncs = ax("Nc", 1);
  std::string sums = params.value("sums", std::string("thermodynamic"));
  if (sums != "thermodynamic" && sums != "finite") throw CliError("schema", "params.sums must be thermodynamic|finite");
  for (double a : alphas)
    for (double h : hs)
      for (double g : gammas)
        for (double n : Ns)
          for (double nc : Ncs)
            for (double J : Js) c.points.push_back({a, h, g, J, as_int(n, "N"), as_int(nc, "Nc"), sums});
  const bool stochastic = c.command == "wtd";
  if (stochastic && !c.numerics.contains("seed")) throw CliError("schema", "numerics.seed is required for " + c.command);
  return c;
}

double num_or(const Config& c, const char* key, double def) {
  if (!c.numerics.contains(key)) return def;
  if (!c.numerics[key].is_number()) throw CliError("schema", std::string("numerics.") + key + " must be a number");
  return c.numerics[key].get<double>();
}

std::uint64_t seed_of(const Config& c) {
  return c.numerics.contains("seed") ? c.numerics["seed"].get<std::uint64_t>() : 0;
}

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct Params {
  qj_params* p = nullptr;
  explicit Params(const Point& pt, int Nc_override = -1) {
    check(qj_params_create(&p));
    check(qj_params_set(p, "N", pt.N));
    check(qj_params_set(p, "Nc", Nc_override > 0 ? Nc_override : pt.Nc));
    check(qj_params_set(p, "J", pt.J));
    check(qj_params_set(p, "h", pt.h));
    check(qj_params_set(p, "gamma", pt.gamma));
    check(qj_params_set(p, "alpha", pt.alpha));
    check(qj_params_set_sums(p, pt.sums.c_str()));
  }
  ~Params() { qj_params_destroy(p); }
  Params(const Params&) = delete;
  Params& operator=(const Params&) = delete;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

void write_table(const Table& t, const Config& c, const fs::path& file) {
  std::ofstream f(file);
  if (!f) throw CliError("io", "cannot write " + file.string());
  f << "# qjump " << qj_version() << '\n';
  f << "# command " << c.command << '\n';
  f << "# config " << c.raw.dump() << '\n';
  for (std::size_t i = 0; i < t.header.size(); ++i) f << (i ? "," : "") << t.header[i];
  f << '\n';
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) f << (i ? "," : "") << r[i];
    f << '\n';
  }
  if (!f) throw CliError("io", "write failed: " + file.string());
}

// ---- commands ----

Table phase_diagram(const Config& c) {
  Table t{{"alpha", "h_over_J", "gamma_over_J", "N", "Nc", "sums", "mx_abs", "mx_star", "converged", "status", "J"}, {}};
  for (const auto& pt : c.points) {
    std::vector<std::string> row = {fmt(pt.alpha), fmt(pt.h / pt.J), fmt(pt.gamma / pt.J), std::to_string(pt.N),
                                    std::to_string(pt.Nc), pt.sums};
    std::string mx = "nan", status = "ok";
    int conv = 0;
    try {
      Params p(pt);
      std::vector<double> m(static_cast<std::size_t>(std::max(pt.Nc, 1)));
      check(qj_cmf_magnetization(p.p, m.data(), m.size(), &conv));
      double a = 0.0;
      for (double x : m) a = std::max(a, std::abs(x));
      mx = fmt(a);
    } catch (const ApiError& e) {
      status = status_text(e);
    }
    row.push_back(mx);
    row.push_back(fmt(qj_mx_star(pt.h, pt.J, pt.gamma)));
    row.push_back(std::to_string(conv));
    row.push_back(cell(status));
    row.push_back(fmt(pt.J));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table fcs_cmf(const Config& c, const fs::path& out_dir) {
  Table t{{"alpha", "h_over_J", "gamma_over_J", "Nc", "gamma_t_final", "M", "mean1", "var1", "mean2", "var2", "cov",
           "cov_rate", "fit_r2", "status", "J", "sums"},
          {}};
  const double gt = num_or(c, "t_final", 20.0);
  const int M = static_cast<int>(num_or(c, "M", 0));
  const bool dump = c.numerics.value("distributions", false);
  std::size_t index = 0;
  for (const auto& pt : c.points) {
    std::vector<std::string> row = {fmt(pt.alpha), fmt(pt.h / pt.J), fmt(pt.gamma / pt.J), std::to_string(pt.Nc),
                                    fmt(gt)};
    std::vector<std::string> vals(8, "nan");
    std::string status = "ok";
    try {
      Params p(pt);
      const double tf = gt / pt.gamma;
      qj_distribution* d = nullptr;
      const bool joint = pt.Nc >= 2;
      const int pair[2] = {pt.Nc / 2 - 1, pt.Nc / 2};
      const int single[1] = {0};
      check(qj_fcs_cmf(p.p, tf, M, joint ? pair : single, joint ? 2 : 1, joint ? 1 : 0, &d));
      std::unique_ptr<qj_distribution, void (*)(qj_distribution*)> guard(d, qj_distribution_destroy);
      int rank = 0, grid = 0;
      check(qj_distribution_shape(d, &rank, &grid, nullptr));
      double m1 = 0, v1 = 0;
      check(qj_distribution_moments(d, 0, &m1, &v1));
      vals[0] = std::to_string(grid);
      vals[1] = fmt(m1);
      vals[2] = fmt(v1);
      if (joint) {
        double m2 = 0, v2 = 0, cov = 0, rate = 0, r2 = 0;
        check(qj_distribution_moments(d, 1, &m2, &v2));
        check(qj_distribution_covariance(d, &cov));
        check(qj_cmf_covariance_rate(p.p, tf, &rate, &r2));
        vals[3] = fmt(m2);
        vals[4] = fmt(v2);
        vals[5] = fmt(cov);
        vals[6] = fmt(rate);
        vals[7] = fmt(r2);
      }
      if (dump) {
        const fs::path f = out_dir / ("fcs_cmf_point" + std::to_string(index) + ".csv");
        check(qj_distribution_write_csv(d, f.string().c_str()));
      }
    } catch (const ApiError& e) {
      status = status_text(e);
    }
    row.insert(row.end(), vals.begin(), vals.end());
    row.push_back(cell(status));
    row.push_back(fmt(pt.J));
    row.push_back(pt.sums);
    t.rows.push_back(std::move(row));
    ++index;
  }
  return t;
}

Table fcs_cumulant(const Config& c) {
  Table t{{"alpha", "N", "d", "gamma_over_J", "cov_rate", "fit_r2", "status", "h_over_J", "J"}, {}};
  std::vector<int> ds = {1};
  if (c.numerics.contains("distances")) ds = c.numerics["distances"].get<std::vector<int>>();
  if (ds.empty()) throw CliError("schema", "numerics.distances is empty");
  const double dchi = num_or(c, "delta_chi", 0.0), dt = num_or(c, "dt", 0.0), gt = num_or(c, "t_final", 0.0);
  for (const auto& pt : c.points) {
    std::vector<double> rates(ds.size(), std::nan("")), r2(ds.size(), std::nan(""));
    std::string status = "ok";
    try {
      Params p(pt);
      check(qj_params_set_sums(p.p, "finite"));
      check(qj_cumulant_covariance_rates(p.p, ds.data(), ds.size(), dchi, dt, gt, rates.data(), r2.data()));
    } catch (const ApiError& e) {
      status = status_text(e);
    }
    for (std::size_t i = 0; i < ds.size(); ++i) {
      t.rows.push_back({fmt(pt.alpha), std::to_string(pt.N), std::to_string(ds[i]), fmt(pt.gamma / pt.J),
                        fmt(rates[i]), fmt(r2[i]), cell(status), fmt(pt.h / pt.J), fmt(pt.J)});
    }
  }
  return t;
}

Table wtd(const Config& c, const fs::path& out_dir) {
  Table t{{"alpha", "h_over_J", "gamma_over_J", "Nc", "inv_mean", "inv_var", "ci_lo", "ci_hi", "censored_frac",
           "divergent", "status"},
          {}};
  const auto n = static_cast<std::size_t>(num_or(c, "n_samples", 1000));
  const double t_cens = num_or(c, "t_cens", 200.0);
  const bool hist = c.numerics.value("histograms", false);
  const std::uint64_t seed = seed_of(c);
  std::size_t index = 0;
  for (const auto& pt : c.points) {
    std::vector<std::string> vals = {"0", "0", "0", "0", "nan", "0"};
    std::string status = "ok";
    try {
      Params p(pt);
      qj_wtd_summary* s = nullptr;
      check(qj_wtd_monte_carlo(p.p, pt.Nc, n, mix_seed(seed, index), t_cens, &s));
      std::unique_ptr<qj_wtd_summary, void (*)(qj_wtd_summary*)> guard(s, qj_wtd_summary_destroy);
      double mean = 0, var = 0, lo = 0, hi = 0, cf = 0;
      int div = 0;
      check(qj_wtd_summary_stats(s, &mean, &var, &lo, &hi, &cf, &div, nullptr));
      const double g = pt.gamma;
      if (!div) {
        vals[0] = fmt(1.0 / (g * mean));
        vals[1] = fmt(1.0 / (g * g * var));
        vals[2] = fmt(1.0 / (g * hi));
        vals[3] = fmt(1.0 / (g * lo));
      }
      vals[4] = fmt(cf);
      vals[5] = div ? "1" : "0";
      if (hist) {
        std::size_t len = 0;
        check(qj_wtd_summary_histogram(s, nullptr, nullptr, 0, &len));
        std::vector<double> tb(len), dens(len);
        check(qj_wtd_summary_histogram(s, tb.data(), dens.data(), len, &len));
        std::ofstream f(out_dir / ("wtd_hist_point" + std::to_string(index) + ".csv"));
        f << "t_bin,density\n";
        for (std::size_t i = 0; i < len; ++i) f << fmt(tb[i]) << ',' << fmt(dens[i]) << '\n';
      }
    } catch (const ApiError& e) {
      status = status_text(e);
    }
    std::vector<std::string> row = {fmt(pt.alpha), fmt(pt.h / pt.J), fmt(pt.gamma / pt.J), std::to_string(pt.Nc)};
    row.insert(row.end(), vals.begin(), vals.end());
    row.push_back(cell(status));
    t.rows.push_back(std::move(row));
    ++index;
  }
  return t;
}

Table oracle_check(const Config& c, bool& all_pass) {
  Table t{{"id", "pass", "detail"}, {}};
  std::vector<std::string> ids = {"A1", "A2", "A3", "A4", "A5", "A6"};
  if (c.numerics.contains("criteria")) ids = c.numerics["criteria"].get<std::vector<std::string>>();
  const std::uint64_t seed = c.numerics.contains("seed") ? seed_of(c) : 20260401;
  all_pass = true;
  for (const auto& id : ids) {
    int passed = 0;
    std::string detail(4096, '\0');
    check(qj_acceptance_run(id.c_str(), seed, &passed, detail.data(), detail.size()));
    detail.resize(std::strlen(detail.c_str()));
    std::cout << detail << '\n' << std::flush;
    all_pass = all_pass && passed;
    t.rows.push_back({id, passed ? "1" : "0", cell(detail)});
  }
  return t;
}

bool golden_compare(const Config& c, const fs::path& actual, const fs::path& golden_dir) {
  const fs::path expected = golden_dir / actual.filename();
  if (!fs::exists(expected)) throw CliError("io", "golden file missing: " + expected.string());
  std::vector<std::string> names;
  std::vector<double> tols;
  if (c.golden.contains("tolerances")) {
    for (const auto& [k, v] : c.golden["tolerances"].items()) {
      names.push_back(k);
      tols.push_back(v.get<double>());
    }
  }
  std::vector<const char*> cnames;
  for (const auto& s : names) cnames.push_back(s.c_str());
  std::size_t mismatches = 0;
  std::string report(2048, '\0');
  check(qj_compare_csv(actual.string().c_str(), expected.string().c_str(), cnames.data(), tols.data(), names.size(),
                       c.golden.value("default_abs_tol", 1e-9), c.golden.value("rel_tol", 1e-9), &mismatches,
                       report.data(), report.size()));
  report.resize(std::strlen(report.c_str()));
  std::cout << "golden " << expected.string() << ": " << report << '\n';
  return mismatches == 0;
}

void error_record(const std::string& kind, const std::string& msg) {
  json e = {{"error", kind}, {"message", msg}};
  std::cerr << e.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qjump: jump statistics of a long-range dissipative Ising chain"};
  std::string config_path, out_dir = ".", golden_dir;
  int threads = 0;
  bool dry_run = false;
  app.add_option("--config", config_path, "run configuration (JSON)")->required();
  app.add_option("--threads", threads, "worker threads (default: QJUMP_THREADS or all cores)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--golden", golden_dir, "compare the output against this directory");
  app.add_flag("--dry-run", dry_run, "validate the config and list the sweep size");
  app.set_version_flag("--version", std::string(qj_version()));
  CLI11_PARSE(app, argc, argv);

  try {
    if (threads < 0) throw CliError("usage", "--threads must be >= 0");
    if (threads > 0) qj_set_threads(threads);
    const Config c = load_config(config_path);
    if (dry_run) {
      std::cout << c.command << ": " << c.points.size() << " points\n";
      return 0;
    }
    fs::create_directories(out_dir);
    Table t;
    bool ok = true;
    if (c.command == "phase-diagram") {
      t = phase_diagram(c);
    } else if (c.command == "fcs-cmf") {
      t = fcs_cmf(c, out_dir);
    } else if (c.command == "fcs-cumulant") {
      t = fcs_cumulant(c);
    } else if (c.command == "wtd") {
      t = wtd(c, out_dir);
    } else {
      t = oracle_check(c, ok);
    }
    const fs::path file = fs::path(out_dir) / c.path;
    if (file.has_parent_path()) fs::create_directories(file.parent_path());
    write_table(t, c, file);
    std::cout << "wrote " << file.string() << " (" << t.rows.size() << " rows)\n";
    if (!golden_dir.empty() && !golden_compare(c, file, golden_dir)) return 3;
    return ok ? 0 : 1;
  } catch (const CliError& e) {
    error_record(e.kind, e.what());
    return 2;
  } catch (const ApiError& e) {
    error_record(qj_status_name(e.status), e.what());
    return 2;
  } catch (const std::exception& e) {
    error_record("internal", e.what());
    return 2;
  }
}
