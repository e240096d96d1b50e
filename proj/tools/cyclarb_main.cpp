#include "cyclarb/config.hpp"
#include "cyclarb/kernels.hpp"
#include "cyclarb/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitStageError = 1;
constexpr int kExitMissingInput = 2;

int run(const std::string& stage, const std::string& config_path,
        const std::string& out_override, unsigned workers_override, bool verbose) {
  try {
    cyclarb::PipelineConfig config = cyclarb::PipelineConfig::load(config_path);
    if (!out_override.empty()) config.out_dir = out_override;
    if (workers_override != 0) config.workers = workers_override;
    if (verbose) {
      std::cerr << "kernels backend: "
                << cyclarb::kernels::backend_name(cyclarb::kernels::active_backend()) << "\n";
    }
    cyclarb::pipeline::run_stage(stage, config);
    return kExitOk;
  } catch (const cyclarb::FileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMissingInput;
  } catch (const std::exception& e) {
    std::cerr << "error [" << stage << "]: " << e.what() << "\n";
    return kExitStageError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cyclic-arbitrage bot analytics over chain-data exports"};
  app.set_version_flag("--version", "cyclarb 0.1.0");
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  unsigned workers_override = 0;
  bool verbose = false;

  const std::vector<std::string> stages = {"detect",  "validate",   "classify", "metrics",
                                           "similarity", "regress", "pipeline"};
  const std::vector<std::pair<std::string, std::string>> descriptions = {
      {"detect", "derive candidate bot contracts from swap activity"},
      {"validate", "screen candidates and fix the validated bot set"},
      {"classify", "label every transaction (purpose, involvement, outcome)"},
      {"metrics", "aggregate daily gas/fee/outcome tables"},
      {"similarity", "bytecode n-gram similarity matrix and clone clusters"},
      {"regress", "daily OLS regressions with robust errors"},
      {"pipeline", "run all stages in order"}};

  for (const auto& [name, desc] : descriptions) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("-c,--config", config_path, "pipeline config file")->required();
    sub->add_option("-o,--out", out_override, "override the configured output directory");
    sub->add_option("-w,--workers", workers_override, "parallel worker count (0 = cores)");
    sub->add_flag("-v,--verbose", verbose, "log progress to stderr");
  }

  CLI11_PARSE(app, argc, argv);

  const std::string stage = app.get_subcommands().front()->get_name();
  return run(stage, config_path, out_override, workers_override, verbose);
}
