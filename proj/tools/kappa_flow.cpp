#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "kflow/errors.hpp"
#include "kflow/experiments.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitBlowup = 2;
constexpr int kExitConfig = 3;

int run_kind(kflow::ExperimentKind kind, const std::string& config_path,
             const std::string& out_dir, long seed, int threads) {
  kflow::ExperimentConfig cfg =
      kflow::ExperimentConfig::from_file(config_path, kind);
  if (seed >= 0) cfg.seed = static_cast<unsigned long>(seed);
  if (threads > 0) cfg.threads = threads;
  cfg.validate();

  const kflow::RunOutcome outcome = kflow::run_experiment(cfg, out_dir);
  std::printf("%s\n", outcome.summary.c_str());
  std::printf("%s: %s\n", kflow::kind_name(kind),
              outcome.pass ? "PASS" : "FAIL");
  return outcome.pass ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Periodic-domain compressible flow experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  long seed = -1;
  int threads = 0;
  kflow::ExperimentKind kind{};

  for (const char* name :
       {"entropy_audit", "weak_strong", "inviscid_sweep", "manufactured"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "experiment config file")
        ->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "override [experiment] seed");
    sub->add_option("--threads", threads, "override [experiment] threads");
    sub->callback([&kind, name] { kind = kflow::parse_kind(name); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitConfig;
  }

  try {
    return run_kind(kind, config_path, out_dir, seed, threads);
  } catch (const kflow::config_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const kflow::vacuum_error& e) {
    std::fprintf(stderr, "vacuum: %s\n", e.what());
    return kExitBlowup;
  } catch (const kflow::blowup_error& e) {
    std::fprintf(stderr, "blow-up: %s\n", e.what());
    return kExitBlowup;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFail;
  }
}
