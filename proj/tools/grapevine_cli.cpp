// Command-line front end over the shared-library C interface. Three
// subcommands: `benchmark` sweeps a model/heuristic/seed grid into a CSV,
// `trajectory` dumps a side-by-side guessing comparison on one leapfrog
// path, and `report` reduces a benchmark CSV to per-cell medians.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "grapevine/grapevine.h"

namespace {

constexpr int kExitConfig = 2;    // malformed or unknown configuration key
constexpr int kExitUnknown = 3;   // unknown model or heuristic name
constexpr int kExitRuntime = 4;   // I/O or library failure

constexpr const char* kBenchHeader =
    "model,heuristic,seed,ess_bulk_min,total_newton_steps,wall_time_s,divergences,"
    "solver_failures,fallback_count,failed,config_echo";
constexpr const char* kTrajHeader = "step_index,theta,root,guess,newton_iters,heuristic";
constexpr const char* kReportHeader =
    "model,heuristic,runs,failed,median_ess_bulk_min,median_newton_steps,"
    "median_ess_per_newton,log10_ess_per_newton,median_wall_time_s,divergences,"
    "solver_failures,fallbacks";

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string join17(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    out += fmt17(v[i]);
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

bool parse_double(const std::string& s, double& out) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  char* end = nullptr;
  out = std::strtod(t.c_str(), &end);
  return end && *end == '\0';
}

bool parse_int(const std::string& s, long long& out) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  char* end = nullptr;
  out = std::strtoll(t.c_str(), &end, 10);
  return end && *end == '\0';
}

std::vector<std::string> all_models() {
  std::vector<std::string> out;
  for (int i = 0; i < gv_model_count(); ++i) out.push_back(gv_model_name(i));
  return out;
}

std::vector<std::string> all_heuristics() {
  std::vector<std::string> out;
  for (int i = 0; i < gv_heuristic_count(); ++i) out.push_back(gv_heuristic_name(i));
  return out;
}

struct BenchConfig {
  std::vector<std::string> models = all_models();
  std::vector<std::string> heuristics = all_heuristics();
  int seeds = 4;  // seed values run 0..seeds-1
  int num_warmup = 500;
  int num_samples = 500;
  double target_accept = 0.8;
  double sigma_theta = 1.0;
  double sigma_y = 0.05;
  std::map<std::string, double> tol;      // per-model override
  std::map<std::string, int> maxiter;     // per-model override
};

// Flat `key = value` file; '#' starts a comment. Returns an exit code,
// 0 on success.
int load_config(const std::string& path, BenchConfig& cfg) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "cannot read config file: " << path << "\n";
    return kExitConfig;
  }
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      std::cerr << path << ":" << lineno << ": expected key = value\n";
      return kExitConfig;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    auto bad_value = [&]() {
      std::cerr << path << ":" << lineno << ": bad value for " << key << ": " << value << "\n";
      return kExitConfig;
    };

    if (key == "models") {
      cfg.models.clear();
      for (const auto& item : split(value, ',')) {
        const std::string name = trim(item);
        if (!gv_model_exists(name.c_str())) {
          std::cerr << path << ":" << lineno << ": unknown model: " << name << "\n";
          return kExitUnknown;
        }
        cfg.models.push_back(name);
      }
      if (cfg.models.empty()) return bad_value();
    } else if (key == "heuristics") {
      cfg.heuristics.clear();
      for (const auto& item : split(value, ',')) {
        const std::string name = trim(item);
        if (!gv_heuristic_exists(name.c_str())) {
          std::cerr << path << ":" << lineno << ": unknown heuristic: " << name << "\n";
          return kExitUnknown;
        }
        cfg.heuristics.push_back(name);
      }
      if (cfg.heuristics.empty()) return bad_value();
    } else if (key == "seeds") {
      long long n;
      if (!parse_int(value, n) || n < 1) return bad_value();
      cfg.seeds = static_cast<int>(n);
    } else if (key == "num_warmup") {
      long long n;
      if (!parse_int(value, n) || n < 0) return bad_value();
      cfg.num_warmup = static_cast<int>(n);
    } else if (key == "num_samples") {
      long long n;
      if (!parse_int(value, n) || n < 0) return bad_value();
      cfg.num_samples = static_cast<int>(n);
    } else if (key == "target_accept") {
      double d;
      if (!parse_double(value, d) || !(d > 0.0) || !(d < 1.0)) return bad_value();
      cfg.target_accept = d;
    } else if (key == "sigma_theta") {
      double d;
      if (!parse_double(value, d) || !(d > 0.0)) return bad_value();
      cfg.sigma_theta = d;
    } else if (key == "sigma_y") {
      double d;
      if (!parse_double(value, d) || !(d > 0.0)) return bad_value();
      cfg.sigma_y = d;
    } else if (key.rfind("tol.", 0) == 0) {
      const std::string model = key.substr(4);
      if (!gv_model_exists(model.c_str())) {
        std::cerr << path << ":" << lineno << ": unknown model: " << model << "\n";
        return kExitUnknown;
      }
      double d;
      if (!parse_double(value, d) || !(d > 0.0)) return bad_value();
      cfg.tol[model] = d;
    } else if (key.rfind("maxiter.", 0) == 0) {
      const std::string model = key.substr(8);
      if (!gv_model_exists(model.c_str())) {
        std::cerr << path << ":" << lineno << ": unknown model: " << model << "\n";
        return kExitUnknown;
      }
      long long n;
      if (!parse_int(value, n) || n < 1) return bad_value();
      cfg.maxiter[model] = static_cast<int>(n);
    } else {
      std::cerr << path << ":" << lineno << ": unknown config key: " << key << "\n";
      return kExitConfig;
    }
  }
  return 0;
}

int write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return std::cout ? 0 : kExitRuntime;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "cannot write: " << path << "\n";
    return kExitRuntime;
  }
  out << text;
  return out ? 0 : kExitRuntime;
}

struct Cell {
  std::string model, heuristic;
  int seed = 0;
};

int run_benchmark(const std::string& config_path, const std::string& out_path, int jobs) {
  BenchConfig cfg;
  if (!config_path.empty()) {
    if (const int rc = load_config(config_path, cfg); rc != 0) return rc;
  }

  std::vector<Cell> cells;
  for (const auto& m : cfg.models)
    for (const auto& h : cfg.heuristics)
      for (int s = 0; s < cfg.seeds; ++s) cells.push_back({m, h, s});

  std::vector<std::string> rows(cells.size());
  std::vector<std::string> errors(cells.size());

  auto worker_cell = [&](std::size_t idx) {
    const Cell& cell = cells[idx];
    gv_model_options mo;
    gv_model_options_default(&mo);
    mo.sigma_theta = cfg.sigma_theta;
    mo.sigma_y = cfg.sigma_y;
    if (const auto it = cfg.tol.find(cell.model); it != cfg.tol.end()) mo.solver_tol = it->second;
    if (const auto it = cfg.maxiter.find(cell.model); it != cfg.maxiter.end())
      mo.solver_maxiter = it->second;

    const unsigned long long data_seed =
        gv_data_seed(cell.model.c_str(), static_cast<unsigned long long>(cell.seed));
    gv_model* model = nullptr;
    if (const gv_status st = gv_model_create(cell.model.c_str(), data_seed, &mo, &model);
        st != GV_OK) {
      errors[idx] = cell.model + ": " + gv_status_string(st);
      return;
    }

    gv_sampler_options so;
    gv_sampler_options_default(&so);
    so.num_warmup = cfg.num_warmup;
    so.num_samples = cfg.num_samples;
    so.target_accept = cfg.target_accept;
    so.seed = static_cast<unsigned long long>(cell.seed);
    so.heuristic = cell.heuristic.c_str();

    gv_run* run = nullptr;
    const auto t0 = std::chrono::steady_clock::now();
    const gv_status st = gv_sample_run(model, &so, 1, &run);
    const auto t1 = std::chrono::steady_clock::now();
    if (st != GV_OK) {
      errors[idx] = cell.model + "/" + cell.heuristic + ": " + gv_status_string(st);
      gv_model_destroy(model);
      return;
    }
    const double wall = std::chrono::duration<double>(t1 - t0).count();

    std::string echo = "num_warmup=" + std::to_string(cfg.num_warmup) +
                       ";num_samples=" + std::to_string(cfg.num_samples) +
                       ";target_accept=" + fmt17(cfg.target_accept) +
                       ";sigma_theta=" + fmt17(cfg.sigma_theta) +
                       ";sigma_y=" + fmt17(cfg.sigma_y) +
                       ";tol=" + fmt17(gv_model_solver_tol(model)) +
                       ";maxiter=" + std::to_string(gv_model_solver_maxiter(model)) +
                       ";data_seed=" + std::to_string(data_seed);

    std::ostringstream row;
    row << cell.model << ',' << cell.heuristic << ',' << cell.seed << ','
        << fmt17(gv_run_ess_min(run)) << ',' << gv_run_newton_steps(run) << ',' << fmt17(wall)
        << ',' << gv_run_divergences(run) << ',' << gv_run_solver_failures(run) << ','
        << gv_run_fallbacks(run) << ',' << (gv_run_passed(run) ? 0 : 1) << ',' << echo;
    rows[idx] = row.str();

    gv_run_destroy(run);
    gv_model_destroy(model);
  };

  jobs = std::max(1, jobs);
  if (jobs == 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) worker_cell(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const int n_threads = std::min<std::size_t>(jobs, std::max<std::size_t>(cells.size(), 1));
    for (int t = 0; t < n_threads; ++t)
      pool.emplace_back([&]() {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= cells.size()) return;
          worker_cell(i);
        }
      });
    for (auto& th : pool) th.join();
  }

  for (const auto& e : errors)
    if (!e.empty()) {
      std::cerr << "run failed: " << e << "\n";
      return kExitRuntime;
    }

  std::string text = std::string(kBenchHeader) + "\n";
  for (const auto& r : rows) text += r + "\n";
  return write_text(out_path, text);
}

int run_trajectory(const std::string& model_name, unsigned long long seed, int steps, double eps,
                   double sigma_theta, double sigma_y, double tol, int maxiter,
                   const std::string& out_path) {
  if (!gv_model_exists(model_name.c_str())) {
    std::cerr << "unknown model: " << model_name << "\n";
    return kExitUnknown;
  }
  gv_model_options mo;
  gv_model_options_default(&mo);
  mo.sigma_theta = sigma_theta;
  mo.sigma_y = sigma_y;
  if (tol > 0) mo.solver_tol = tol;
  if (maxiter > 0) mo.solver_maxiter = maxiter;

  gv_model* model = nullptr;
  const unsigned long long data_seed = gv_data_seed(model_name.c_str(), seed);
  if (const gv_status st = gv_model_create(model_name.c_str(), data_seed, &mo, &model);
      st != GV_OK) {
    std::cerr << "model creation failed: " << gv_status_string(st) << "\n";
    return kExitRuntime;
  }

  gv_trajectory* traj = nullptr;
  if (const gv_status st = gv_trajectory_create(model, seed, steps, eps, &traj); st != GV_OK) {
    std::cerr << "trajectory failed: " << gv_status_string(st) << "\n";
    gv_model_destroy(model);
    return kExitRuntime;
  }

  int theta_dim = 0, x_dim = 0;
  gv_trajectory_dims(traj, &theta_dim, &x_dim);
  std::vector<double> theta(theta_dim), root(x_dim), guess(x_dim);

  std::string text = std::string(kTrajHeader) + "\n";
  const int n = gv_trajectory_num_records(traj);
  for (int i = 0; i < n; ++i) {
    int step = 0, iters = 0;
    const char* heuristic = nullptr;
    gv_trajectory_record(traj, i, &step, &heuristic, &iters, theta.data(), root.data(),
                         guess.data());
    text += std::to_string(step) + ',' + join17(theta) + ',' + join17(root) + ',' + join17(guess) +
            ',' + std::to_string(iters) + ',' + heuristic + "\n";
  }

  gv_trajectory_destroy(traj);
  gv_model_destroy(model);
  return write_text(out_path, text);
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct BenchRow {
  std::string model, heuristic;
  double ess = 0.0, newton = 0.0, wall = 0.0;
  std::uint64_t divergences = 0, solver_failures = 0, fallbacks = 0;
  bool failed = false;
};

int run_report(const std::string& in_path, const std::string& out_path) {
  std::ifstream in(in_path);
  if (!in) {
    std::cerr << "cannot read: " << in_path << "\n";
    return kExitRuntime;
  }
  std::string header;
  std::vector<BenchRow> rows;
  if (std::getline(in, header)) {
    if (trim(header) != kBenchHeader) {
      std::cerr << in_path << ": unrecognised benchmark header\n";
      return kExitConfig;
    }
    std::string line;
    int lineno = 1;
    while (std::getline(in, line)) {
      ++lineno;
      if (trim(line).empty()) continue;
      const auto f = split(line, ',');
      if (f.size() != 11) {
        std::cerr << in_path << ":" << lineno << ": expected 11 columns\n";
        return kExitConfig;
      }
      BenchRow r;
      r.model = f[0];
      r.heuristic = f[1];
      long long iv = 0;
      double dv = 0.0;
      bool ok = parse_double(f[3], dv);
      r.ess = dv;
      ok = ok && parse_double(f[4], dv);
      r.newton = dv;
      ok = ok && parse_double(f[5], dv);
      r.wall = dv;
      ok = ok && parse_int(f[6], iv);
      r.divergences = static_cast<std::uint64_t>(iv);
      ok = ok && parse_int(f[7], iv);
      r.solver_failures = static_cast<std::uint64_t>(iv);
      ok = ok && parse_int(f[8], iv);
      r.fallbacks = static_cast<std::uint64_t>(iv);
      ok = ok && parse_int(f[9], iv);
      r.failed = iv != 0;
      if (!ok) {
        std::cerr << in_path << ":" << lineno << ": malformed row\n";
        return kExitConfig;
      }
      rows.push_back(std::move(r));
    }
  }

  // group rows by (model, heuristic) in first-appearance order
  std::vector<std::pair<std::string, std::string>> order;
  std::map<std::pair<std::string, std::string>, std::vector<const BenchRow*>> groups;
  for (const auto& r : rows) {
    const auto key = std::make_pair(r.model, r.heuristic);
    auto& bucket = groups[key];
    if (bucket.empty()) order.push_back(key);
    bucket.push_back(&r);
  }

  std::string text = std::string(kReportHeader) + "\n";
  for (const auto& key : order) {
    const auto& bucket = groups[key];
    std::vector<double> ess, newton, eff, wall;
    std::uint64_t div = 0, sf = 0, fb = 0;
    int failed = 0;
    for (const BenchRow* r : bucket) {
      div += r->divergences;
      sf += r->solver_failures;
      fb += r->fallbacks;
      if (r->failed) {
        ++failed;  // failed runs carry no usable efficiency numbers
        continue;
      }
      ess.push_back(r->ess);
      newton.push_back(r->newton);
      eff.push_back(r->newton > 0.0 ? r->ess / r->newton : 0.0);
      wall.push_back(r->wall);
    }
    const double med_eff = median(eff);
    std::ostringstream row;
    row << key.first << ',' << key.second << ',' << bucket.size() << ',' << failed << ','
        << fmt17(median(ess)) << ',' << fmt17(median(newton)) << ',' << fmt17(med_eff) << ','
        << fmt17(std::log10(med_eff)) << ',' << fmt17(median(wall)) << ',' << div << ',' << sf
        << ',' << fb;
    text += row.str() + "\n";
  }
  return write_text(out_path, text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"benchmark driver for root-finding-embedded HMC"};
  app.require_subcommand(1);

  std::string config_path, out_path = "-";
  int jobs = 1;
  auto* bench = app.add_subcommand("benchmark", "run a model/heuristic/seed grid to CSV");
  bench->add_option("--config", config_path, "key = value configuration file");
  bench->add_option("--out", out_path, "output CSV path, - for stdout");
  bench->add_option("--jobs", jobs, "worker threads for grid cells");

  std::string traj_model, traj_out = "-";
  unsigned long long traj_seed = 0;
  int traj_steps = 50, traj_maxiter = 0;
  double traj_eps = 0.0, traj_sigma_theta = 1.0, traj_sigma_y = 0.05, traj_tol = 0.0;
  auto* traj = app.add_subcommand("trajectory", "replay one leapfrog path under every heuristic");
  traj->add_option("--model", traj_model, "registered model name")->required();
  traj->add_option("--seed", traj_seed, "seed for data, start point, and momentum");
  traj->add_option("--steps", traj_steps, "leapfrog steps");
  traj->add_option("--eps", traj_eps, "step size, <= 0 for automatic");
  traj->add_option("--sigma-theta", traj_sigma_theta, "prior scale (test functions)");
  traj->add_option("--sigma-y", traj_sigma_y, "observation noise scale");
  traj->add_option("--tol", traj_tol, "solver tolerance, <= 0 for the model default");
  traj->add_option("--maxiter", traj_maxiter, "solver iteration cap, <= 0 for the default");
  traj->add_option("--out", traj_out, "output CSV path, - for stdout");

  std::string report_in, report_out = "-";
  auto* report = app.add_subcommand("report", "reduce a benchmark CSV to per-cell medians");
  report->add_option("--in", report_in, "benchmark CSV")->required();
  report->add_option("--out", report_out, "output CSV path, - for stdout");

  CLI11_PARSE(app, argc, argv);

  if (bench->parsed()) return run_benchmark(config_path, out_path, jobs);
  if (traj->parsed())
    return run_trajectory(traj_model, traj_seed, traj_steps, traj_eps, traj_sigma_theta,
                          traj_sigma_y, traj_tol, traj_maxiter, traj_out);
  if (report->parsed()) return run_report(report_in, report_out);
  return 1;
}
