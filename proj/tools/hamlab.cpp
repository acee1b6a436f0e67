#include <cstdio>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hamlab/canonical_z.hpp"
#include "hamlab/deformations.hpp"
#include "hamlab/error.hpp"
#include "hamlab/fock_nonlinear.hpp"
#include "hamlab/hilbert_finite.hpp"
#include "hamlab/lab/config.hpp"
#include "hamlab/lab/report.hpp"
#include "hamlab/lab/runner.hpp"
#include "hamlab/period_lab.hpp"
#include "hamlab/phase_flow.hpp"

namespace {

constexpr int kExitContract = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

std::map<std::string, double> parse_params(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw hamlab::LabError(hamlab::ErrorKind::Config,
                             "--param expects key=value, got '" + item + "'");
    }
    out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
  }
  return out;
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void list_catalogs() {
  using namespace hamlab;
  std::cout << "experiments:";
  for (const auto& k : lab::experiment_kinds()) std::cout << ' ' << k;
  std::cout << "\nsystems:";
  for (const auto& s : system_catalog()) std::cout << ' ' << s;
  std::cout << "\ndeformations:\n";
  for (const auto& label : known_deformations()) {
    const auto screen = screen_deformation(make_deformation(label));
    std::cout << "  " << label << (screen.passed ? "" : " (rejected by screen)") << '\n';
  }
  std::cout << "ladder_functions:";
  for (const auto& f : fock::ladder_function_labels()) std::cout << ' ' << f;
  std::cout << "\nquantum_systems:";
  for (const auto& q : quantum::test_hamiltonian_names()) std::cout << ' ' << q;
  std::cout << "\nperiod_methods: return_time quadrature area_derivative\n";
}

}  // namespace

int main(int argc, char** argv) {
  using namespace hamlab;
  CLI::App app{"Partition-function laboratory for alternative Hamiltonian descriptions"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "Run an experiment config");
  std::string config_path;
  std::optional<std::string> output;
  std::optional<int> workers;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<std::vector<double>> betas;
  run_cmd->add_option("config", config_path, "JSON experiment config")->required();
  run_cmd->add_option("-o,--output", output, "Report prefix (writes .csv/.json/.summary.txt)");
  run_cmd->add_option("-w,--workers", workers, "Worker threads");
  run_cmd->add_option("--seed", seed, "Override the config seed");
  run_cmd->add_option("--tol", tol, "Override the config tolerance");
  run_cmd->add_option("--beta", betas, "Override the beta grid");

  app.add_subcommand("list-catalogs", "List experiments and catalog entries");

  auto* period_cmd = app.add_subcommand("period", "Tabulate tau(E) on a log grid");
  std::string period_system;
  double emin = 1e-3, emax = 1e3, period_tol = 1e-10;
  int per_decade = 33;
  std::string period_method = "return_time";
  std::vector<std::string> period_params;
  period_cmd->add_option("system", period_system, "System label")->required();
  period_cmd->add_option("--emin", emin, "Lowest energy");
  period_cmd->add_option("--emax", emax, "Highest energy");
  period_cmd->add_option("--per-decade", per_decade, "Grid points per decade");
  period_cmd->add_option("--method", period_method, "return_time | quadrature | area_derivative");
  period_cmd->add_option("--tol", period_tol, "Relative tolerance");
  period_cmd->add_option("--param", period_params, "System parameter key=value");

  auto* z_cmd = app.add_subcommand("z", "Classical partition function");
  std::string z_system;
  std::vector<double> z_betas{1.0};
  std::string z_method = "all";
  std::string z_deformation = "identity";
  double z_h = 2.0 * std::numbers::pi, z_tol = 1e-9;
  std::vector<std::string> z_params;
  z_cmd->add_option("system", z_system, "System label")->required();
  z_cmd->add_option("--beta", z_betas, "Inverse temperatures");
  z_cmd->add_option("--method", z_method, "direct | shell | boundary | deformed | all");
  z_cmd->add_option("--deformation", z_deformation, "Deformation label for --method deformed");
  z_cmd->add_option("--cell", z_h, "Phase-space cell h (default 2 pi)");
  z_cmd->add_option("--tol", z_tol, "Relative tolerance");
  z_cmd->add_option("--param", z_params, "System parameter key=value");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      auto config = lab::load_config(config_path);
      if (output) config.output = *output;
      if (workers) config.workers = *workers;
      if (seed) config.seed = *seed;
      if (tol) config.tol = *tol;
      if (betas) config.betas = *betas;
      lab::validate(config);
      const auto result = lab::run(config);
      std::cout << lab::summary_text(result);
      if (!config.output.empty()) {
        lab::write_report(result, config.output);
        std::cout << "  report: " << config.output << ".{csv,json,summary.txt}\n";
      } else {
        std::cout << lab::records_csv(result);
      }
      return lab::exit_code(result);
    }
    if (app.got_subcommand("list-catalogs")) {
      list_catalogs();
      return 0;
    }
    if (period_cmd->parsed()) {
      const auto system = make_system(period_system, parse_params(period_params));
      const auto method = period_method_from_string(period_method);
      std::cout << "energy,tau\n";
      for (double e : log_energy_grid(emin, emax, per_decade)) {
        std::cout << g17(e) << ',' << g17(period(system, e, period_tol, method)) << '\n';
      }
      return 0;
    }
    if (z_cmd->parsed()) {
      const auto system = make_system(z_system, parse_params(z_params));
      std::optional<PeriodProfile> profile;
      const bool needs_profile = z_method != "direct";
      if (needs_profile) profile = estimator_profile(system, z_betas, z_tol);
      std::cout << "beta,method,value,error_bound,flags\n";
      for (double beta : z_betas) {
        const EnsembleParams params{beta, z_h};
        std::vector<std::pair<std::string, ZEstimate>> rows;
        if (z_method == "direct" || z_method == "all") {
          rows.emplace_back("direct_2d", z_direct(system, params, z_tol));
        }
        if (z_method == "shell" || z_method == "all") {
          rows.emplace_back("shell", z_shell(system, params, *profile, z_tol));
        }
        if (z_method == "boundary" || z_method == "all") {
          rows.emplace_back("boundary", z_boundary(system, params, *profile));
        }
        if (z_method == "deformed" || z_method == "all") {
          rows.emplace_back("deformed:" + z_deformation,
                            z_deformed(system, make_deformation(z_deformation), params,
                                       *profile, z_tol));
        }
        if (rows.empty()) {
          throw LabError(ErrorKind::Config, "unknown --method '" + z_method + "'");
        }
        for (const auto& [name, z] : rows) {
          std::string flags;
          for (const auto& f : z.flags) flags += (flags.empty() ? "" : ";") + f;
          std::cout << g17(beta) << ',' << name << ',' << g17(z.value) << ','
                    << g17(z.error_bound) << ',' << flags << '\n';
        }
      }
      return 0;
    }
  } catch (const LabError& e) {
    std::cerr << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return e.kind() == ErrorKind::Config || e.kind() == ErrorKind::InvalidArgument
               ? kExitConfig
               : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  (void)kExitContract;
  return 0;
}
