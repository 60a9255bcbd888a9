// laurent_lab: configuration-driven experiments on random perturbations of
// Laurent matrices. One JSON config per run, CSV artifacts plus a manifest
// that reproduces the run when fed back through --config.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "llab/errors.hpp"
#include "llab/experiments.hpp"
#include "llab/version.hpp"

namespace {

int resolve_threads(int flag_value, const nlohmann::json& config) {
  if (flag_value > 0) return flag_value;
  if (config.contains("threads") && config.at("threads").is_number_integer()) {
    const long t = config.at("threads").get<long>();
    if (t < 1) throw llab::ConfigInvalid("threads must be >= 1");
    return static_cast<int>(t);
  }
  if (const char* env = std::getenv("LAURENT_LAB_THREADS")) {
    const int t = std::atoi(env);
    if (t >= 1) return t;
  }
  return 1;
}

void print_error_record(const std::string& name, const std::string& message) {
  nlohmann::json record;
  record["error"] = name;
  record["message"] = message;
  std::cerr << record.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for random Laurent operators"};
  app.set_version_flag("--version", std::string(llab::kVersion));

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed_flag = 0;
  int threads_flag = 0;

  app.add_option("--config", config_path, "JSON config (or manifest) for the run")
      ->required();
  app.add_option("--out", out_dir, "output directory (overrides config)");
  auto* seed_opt = app.add_option("--seed", seed_flag, "seed override");
  app.add_option("--threads", threads_flag, "worker thread count override");

  CLI11_PARSE(app, argc, argv);
  const bool seed_given = seed_opt->count() > 0;

  nlohmann::json config;
  try {
    std::ifstream in(config_path);
    if (!in) {
      print_error_record("ConfigInvalid", "cannot open config " + config_path);
      return 2;
    }
    config = llab::extract_config(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    print_error_record("ConfigInvalid", std::string("config is not valid JSON: ") + e.what());
    return 2;
  }

  try {
    if (!config.is_object()) throw llab::ConfigInvalid("config must be a JSON object");
    std::uint64_t seed = 1;
    if (seed_given) {
      seed = seed_flag;
    } else if (config.contains("seed")) {
      if (!config.at("seed").is_number_unsigned() && !config.at("seed").is_number_integer())
        throw llab::ConfigInvalid("seed must be an unsigned integer");
      seed = config.at("seed").get<std::uint64_t>();
    }
    const int threads = resolve_threads(threads_flag, config);
    std::filesystem::path out;
    if (!out_dir.empty()) out = out_dir;
    else if (config.contains("out") && config.at("out").is_string())
      out = config.at("out").get<std::string>();
    else throw llab::ConfigInvalid("no output directory: set 'out' in the config or pass --out");

    // resolved values are echoed into the manifest for reproduction
    config["seed"] = seed;
    config["threads"] = threads;
    config["out"] = out.string();

    const llab::RunResult result = llab::run_experiment(config, out, seed, threads);
    std::cout << "wrote " << result.outputs.size() << " file(s) to " << out.string()
              << "\n";
    for (const auto& f : result.outputs) std::cout << "  " << f << "\n";
    return 0;
  } catch (const llab::ConfigInvalid& e) {
    print_error_record(e.name(), e.what());
    return 2;
  } catch (const llab::Error& e) {
    print_error_record(e.name(), e.what());
    return 3;
  } catch (const std::exception& e) {
    print_error_record("InternalError", e.what());
    return 3;
  }
}
