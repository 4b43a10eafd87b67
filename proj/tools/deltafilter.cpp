// Command-line front end: run a benchmark case or a grid sweep and write CSV/JSON results.
//
// Exit codes: 0 success, 1 simulation failure, 2 configuration error.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "deltafilter/config.hpp"
#include "deltafilter/filter.hpp"
#include "deltafilter/io.hpp"
#include "deltafilter/kernel.hpp"
#include "deltafilter/runner.hpp"

namespace fs = std::filesystem;
using namespace deltafilter;

namespace {

constexpr int kExitSimulation = 1;
constexpr int kExitConfig = 2;

struct Outcome {
  std::optional<RunResult> result;
  std::string failure;
};

void write_run(const RunResult& r, const fs::path& dir, double seconds) {
  write_text(dir / "solution.csv", solution_csv(r));
  write_text(dir / "norms.json", norms_json(r).dump(2) + "\n");
  write_text(dir / "timing.json", nlohmann::json{{"runtime_seconds", seconds}}.dump(2) + "\n");
  if (r.config.is_2d()) {
    const SpectralGrid gx(r.config.nx);
    const SpectralGrid gy(r.config.ny);
    const Eigen::MatrixXd rho = r.conserved.leftCols(gy.size());
    const double r_max = 1.0 - std::max(r.epsilon, r.epsilon_y);
    write_text(dir / "radial.csv", radial_csv(r.config, radial_profiles(gx, gy, rho, r_max, 201)));
  }
}

Outcome run_one(const CaseConfig& cfg, const fs::path& dir) {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  try {
    RunResult r = run_case(cfg);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_run(r, dir, seconds);
    o.result = std::move(r);
  } catch (const SimulationError& e) {
    o.failure = e.what();
    write_text(dir / "failure.json",
               nlohmann::json{{"config", to_json(cfg)}, {"error", e.what()}}.dump(2) + "\n");
  }
  return o;
}

int run_sweep(const CaseConfig& base) {
  std::vector<CaseConfig> configs;
  for (int n : base.grids) configs.push_back(base.with_order(n));
  std::vector<Outcome> outcomes(configs.size());
  std::atomic<std::size_t> next{0};
  const unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                           static_cast<unsigned>(configs.size())));
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      const fs::path dir = fs::path(base.output_dir) / ("N" + std::to_string(configs[i].n));
      outcomes[i] = run_one(configs[i], dir);
      std::lock_guard lock(log_mutex);
      std::cerr << "N=" << configs[i].n << (outcomes[i].result ? " done" : " FAILED: " + outcomes[i].failure) << "\n";
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::vector<ConvergenceRow> rows;
  for (const auto& o : outcomes) {
    if (!o.result || !o.result->error) continue;
    const auto& err = *o.result->error;
    rows.push_back({o.result->config.n, o.result->epsilon, err.probes.empty() ? err.linf : err.probes.front().error,
                    err.linf});
  }
  if (rows.size() >= 2) {
    std::vector<double> eps, errs;
    for (const auto& r : rows) {
      eps.push_back(r.epsilon);
      errs.push_back(r.probe_error);
    }
    const double rate = fit_rate(eps, errs);
    write_text(fs::path(base.output_dir) / "convergence.csv", convergence_csv(base, rows, rate));
    std::cout << "fitted rate " << rate << "\n";
  }
  const bool failed = std::any_of(outcomes.begin(), outcomes.end(), [](const Outcome& o) { return !o.result; });
  return failed ? kExitSimulation : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chebyshev collocation solver with Dirac-delta kernel filtering"};
  std::string case_name, out, config_path, dump_kernel, dump_filter;
  int n = 0, nx = 0, ny = 0, m = 0, k = -1;
  double nd = 0, dt = 0, tfinal = 0, exclusion = -1;
  std::vector<int> grids;
  std::vector<double> probes;

  app.add_option("--case", case_name, "advection | burgers | sod | shu_osher | explosion");
  app.add_option("--N", n, "polynomial order (even)");
  app.add_option("--Nx", nx, "polynomial order in x (explosion)");
  app.add_option("--Ny", ny, "polynomial order in y (explosion)");
  app.add_option("--m", m, "kernel vanishing moments");
  app.add_option("--k", k, "kernel endpoint smoothness");
  app.add_option("--Nd", nd, "kernel width in nodes at the domain centre");
  app.add_option("--dt", dt, "time step");
  app.add_option("--tfinal", tfinal, "final time");
  app.add_option("--grids", grids, "sweep over these orders, e.g. --grids 64,96,128")->delimiter(',');
  app.add_option("--out", out, "output directory");
  app.add_option("--config", config_path, "JSON configuration file; flags override its values");
  app.add_option("--exclusion", exclusion, "half-width of the norm exclusion zone");
  app.add_option("--probe", probes, "probe locations for pointwise errors")->delimiter(',');
  app.add_option("--dump-kernel", dump_kernel, "write the kernel coefficients as JSON and exit");
  app.add_option("--dump-filter", dump_filter, "write the filter matrix as JSON and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  CaseConfig cfg;
  try {
    nlohmann::json file = nullptr;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("config", "cannot open " + config_path);
      try {
        file = nlohmann::json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config", e.what());
      }
    }
    nlohmann::json flags = nlohmann::json::object();
    auto given = [&](const char* name) { return app.count(name) > 0; };
    if (given("--case")) flags["case"] = case_name;
    if (given("--N")) flags["N"] = n;
    if (given("--Nx")) flags["Nx"] = nx;
    if (given("--Ny")) flags["Ny"] = ny;
    if (given("--m")) flags["m"] = m;
    if (given("--k")) flags["k"] = k;
    if (given("--Nd")) flags["Nd"] = nd;
    if (given("--dt")) flags["dt"] = dt;
    if (given("--tfinal")) flags["tfinal"] = tfinal;
    if (given("--grids")) flags["grids"] = grids;
    if (given("--out")) flags["out"] = out;
    if (given("--exclusion")) flags["exclusion"] = exclusion;
    if (given("--probe")) flags["probes"] = probes;
    cfg = resolve_config(file, flags);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (!dump_kernel.empty() || !dump_filter.empty()) {
      const DeltaKernel kernel = build_kernel(cfg.kernel);
      if (!dump_kernel.empty()) write_text(dump_kernel, kernel_to_json(kernel).dump() + "\n");
      if (!dump_filter.empty()) {
        const int order = cfg.is_2d() ? cfg.nx : cfg.n;
        const FilterMatrix f = build_filter_matrix(SpectralGrid(order), kernel, cfg.epsilon_for(order));
        write_text(dump_filter, filter_to_json(f, cfg.nd).dump() + "\n");
      }
      return 0;
    }
    if (!cfg.grids.empty()) return run_sweep(cfg);

    const Outcome o = run_one(cfg, cfg.output_dir);
    if (!o.result) {
      std::cerr << "simulation failed: " << o.failure << "\n";
      return kExitSimulation;
    }
    const auto& r = *o.result;
    std::cout << to_string(cfg.problem) << ": " << r.steps << " steps, eps=" << r.epsilon;
    if (r.error) std::cout << ", Linf=" << r.error->linf << ", L2=" << r.error->l2;
    for (const auto& p : r.error ? r.error->probes : std::vector<ProbeError>{}) {
      std::cout << ", err(x=" << p.x << ")=" << p.error;
    }
    std::cout << "\n";
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const KernelConstructionError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSimulation;
  }
}
