#include "rydlink/experiments.hpp"

#include <CLI11.hpp>

#include <cstdio>

int main(int argc, char** argv) {
  CLI::App app{"Rydberg atomic receiver link simulator"};
  std::string config_path;
  std::string out_dir = "out";
  std::string experiment;
  std::uint64_t seed = 0;
  unsigned workers = 0;
  bool print_config = false;
  bool print_hash = false;

  app.add_option("--config", config_path, "sectioned key=value config file");
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  auto* seed_opt = app.add_option("--seed", seed, "override the config seed");
  auto* workers_opt = app.add_option("--workers", workers, "override worker count (0 = auto)");
  app.add_option("--experiment", experiment,
                 "spectrum | splitting-map | ldr | snr-distance | mi | ser | sensitivity");
  app.add_flag("--print-config", print_config, "dump the effective config and exit");
  app.add_flag("--print-hash", print_hash, "print the config hash and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    rydlink::ExperimentConfig cfg = rydlink::load_config(config_path);
    if (seed_opt->count()) cfg.seed = seed;
    if (workers_opt->count()) cfg.workers = workers;
    if (print_config) {
      std::fputs(rydlink::canonical_dump(cfg).c_str(), stdout);
      return 0;
    }
    if (print_hash) {
      std::printf("0x%016llx\n", static_cast<unsigned long long>(rydlink::config_hash(cfg)));
      return 0;
    }
    if (experiment.empty()) {
      std::fprintf(stderr, "error: --experiment is required (or --print-config / --print-hash)\n");
      return 2;
    }
    rydlink::RunResult res = rydlink::run_experiment(cfg, experiment, out_dir);
    for (const auto& o : res.outputs)
      std::printf("wrote %s (fnv1a64 0x%016llx)\n", o.path.c_str(),
                  static_cast<unsigned long long>(o.checksum));
    std::printf("wrote %s\n", res.manifest_path.c_str());
    std::printf("%s\n", res.summary.c_str());
    return 0;
  } catch (const rydlink::ValidationError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const rydlink::NumericalError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 3;
  } catch (const rydlink::IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
