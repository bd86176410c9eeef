// Command-line front end: solve instances, run error-rate experiments,
// estimate hardness gaps, and export instances.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cbmai/algorithms.hpp"
#include "cbmai/catalog.hpp"
#include "cbmai/hardness.hpp"
#include "cbmai/harness.hpp"
#include "cbmai/io.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitInvalidInstance = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A path to an instance JSON file, or the name of a built-in instance.
cbmai::Instance resolve_instance(const std::string& ref) {
  if (std::filesystem::exists(ref)) return cbmai::load_instance(ref);
  try {
    return cbmai::builtin_instance(ref);
  } catch (const std::invalid_argument&) {
    throw cbmai::FormatError("'" + ref + "' is neither a readable file nor a built-in instance");
  }
}

std::vector<cbmai::Algorithm> parse_algorithms(const std::vector<std::string>& names) {
  std::vector<cbmai::Algorithm> out;
  for (const auto& n : names) {
    try {
      out.push_back(cbmai::parse_algorithm(n));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  return out;
}

nlohmann::json truth_to_json(const cbmai::Instance& instance, const cbmai::TrueOptimum& truth) {
  nlohmann::json j;
  j["instance"] = instance.name;
  if (!truth.feasible()) {
    j["status"] = "infeasible";
    return j;
  }
  const auto& s = truth.solved();
  j["status"] = "optimal";
  nlohmann::json basis = nlohmann::json::array();
  for (int c : s.optimal_basis.indices()) basis.push_back(c + 1);
  j["optimal_basis"] = basis;
  j["x"] = s.x_star;
  j["value"] = s.value;
  j["assumption_ok"] = s.assumption_ok;
  return j;
}

cbmai::GapOptions gap_options(int restarts, std::uint64_t seed) {
  cbmai::GapOptions opt;
  opt.restarts = restarts;
  if (seed != 0) opt.seed = seed;
  return opt;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constrained best mixed arm identification under a fixed budget"};
  app.require_subcommand(1);

  std::string instance_ref;
  std::string out_path;
  std::vector<std::string> algo_names;
  std::vector<long> budgets;
  long budget = 0;
  long trials = 1000;
  std::uint64_t seed = 1;
  bool force = false;
  bool serial = false;
  int restarts = cbmai::GapOptions{}.restarts;
  std::uint64_t gap_seed = 0;

  auto* solve = app.add_subcommand("solve", "Solve the true-mean LP of an instance");
  solve->add_option("instance", instance_ref, "Instance JSON file or built-in name")->required();

  auto* run = app.add_subcommand("run", "Error rate of one algorithm at one budget");
  run->add_option("--instance", instance_ref, "Instance JSON file or built-in name")->required();
  std::string algo_name;
  run->add_option("--algo", algo_name, "sfsr-iv, sfsr-l or uslp")->required();
  run->add_option("--budget", budget, "Sampling budget N")->required();
  run->add_option("--trials", trials, "Independent runs");
  run->add_option("--seed", seed, "Base seed");
  run->add_flag("--force", force, "Run even if the optimum is not unique");
  run->add_flag("--serial", serial, "Use the single-threaded trial loop");

  auto* sweep = app.add_subcommand("sweep", "Error rates over algorithms and budgets, as CSV");
  sweep->add_option("--instance", instance_ref, "Instance JSON file or built-in name")->required();
  sweep->add_option("--budgets", budgets, "Comma-separated budgets")->required()->delimiter(',');
  sweep->add_option("--algos", algo_names, "Comma-separated algorithms")->delimiter(',');
  sweep->add_option("--trials", trials, "Independent runs per cell");
  sweep->add_option("--seed", seed, "Base seed");
  sweep->add_option("--out", out_path, "CSV path (stdout if omitted)");
  sweep->add_flag("--force", force, "Run even if the optimum is not unique");
  sweep->add_flag("--serial", serial, "Use the single-threaded trial loop");

  auto* gaps = app.add_subcommand("gaps", "Estimate hardness gaps as JSON");
  gaps->add_option("--instance", instance_ref, "Instance JSON file or built-in name")->required();
  gaps->add_option("--restarts", restarts, "Multi-start restarts per gap");
  gaps->add_option("--gap-seed", gap_seed, "Seed for restart points");

  auto* bounds = app.add_subcommand("bounds", "Rate exponents from the estimated gaps");
  bounds->add_option("--instance", instance_ref, "Instance JSON file or built-in name")->required();
  bounds->add_option("--restarts", restarts, "Multi-start restarts per gap");
  bounds->add_option("--gap-seed", gap_seed, "Seed for restart points");

  auto* inst = app.add_subcommand("instance", "Write a built-in or generated instance as JSON");
  inst->add_option("source", instance_ref, "Built-in name or generator spec JSON")->required();
  inst->add_option("--out", out_path, "Output path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  const auto execution = serial ? cbmai::Execution::Serial : cbmai::Execution::Parallel;
  try {
    if (*solve) {
      const cbmai::Instance instance = resolve_instance(instance_ref);
      std::cout << truth_to_json(instance, cbmai::true_optimum(instance)).dump(2) << '\n';
    } else if (*run || *sweep) {
      cbmai::ExperimentSpec spec;
      spec.instance = resolve_instance(instance_ref);
      if (*run) {
        spec.algorithms = parse_algorithms({algo_name});
        spec.budgets = {budget};
      } else {
        spec.algorithms = parse_algorithms(
            algo_names.empty() ? std::vector<std::string>{"sfsr-iv", "sfsr-l", "uslp"} : algo_names);
        spec.budgets = budgets;
      }
      for (long n : spec.budgets) {
        if (n <= spec.instance.K0) throw UsageError("every budget must exceed K0");
      }
      if (trials < 1) throw UsageError("--trials must be at least 1");
      spec.trials = trials;
      spec.base_seed = seed;
      spec.force = force;
      const auto results = cbmai::run_trials(spec, execution);
      if (out_path.empty()) {
        cbmai::write_csv(std::cout, results);
      } else {
        std::ofstream out(out_path);
        if (!out) throw UsageError("cannot write " + out_path);
        cbmai::write_csv(out, results);
      }
    } else if (*gaps || *bounds) {
      const cbmai::Instance instance = resolve_instance(instance_ref);
      const auto report = cbmai::gap_report(instance, gap_options(restarts, gap_seed));
      const auto rates = cbmai::rate_bounds(instance, report);
      if (*gaps) {
        std::cout << cbmai::gap_report_to_json(instance, report, rates).dump(2) << '\n';
      } else {
        auto j = cbmai::rate_bounds_to_json(rates);
        j["instance"] = instance.name;
        std::cout << j.dump(2) << '\n';
      }
    } else if (*inst) {
      cbmai::Instance instance;
      if (std::filesystem::exists(instance_ref)) {
        std::ifstream in(instance_ref);
        nlohmann::json j;
        try {
          in >> j;
        } catch (const nlohmann::json::exception& e) {
          throw cbmai::FormatError(instance_ref + ": " + e.what());
        }
        if (j.contains("kind")) {
          const auto req = cbmai::generator_from_json(j);
          instance = cbmai::generate(req.spec, req.seed).instance;
        } else {
          instance = cbmai::instance_from_json(j);
        }
      } else {
        instance = resolve_instance(instance_ref);
      }
      if (out_path.empty()) {
        std::cout << cbmai::instance_to_json(instance).dump(2) << '\n';
      } else {
        cbmai::save_instance(instance, out_path);
      }
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const cbmai::FormatError& e) {
    std::cerr << "invalid instance: " << e.what() << '\n';
    return kExitInvalidInstance;
  } catch (const cbmai::InstanceValidationError& e) {
    std::cerr << "invalid instance: " << e.what() << " (use --force to run anyway)\n";
    return kExitInvalidInstance;
  } catch (const cbmai::AssumptionError& e) {
    std::cerr << "invalid instance: " << e.what() << '\n';
    return kExitInvalidInstance;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return 0;
}
