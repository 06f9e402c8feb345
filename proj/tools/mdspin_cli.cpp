// Batch front end: one scenario per invocation, configured from a file.
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mdspin/mdspin.h"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

int exit_code(mds_status s) {
  switch (s) {
    case MDS_OK:
      return 0;
    case MDS_ERR_CONFIG:
    case MDS_ERR_DOMAIN:
    case MDS_ERR_INVALID_ARGUMENT:
      return kExitConfig;
    case MDS_ERR_IO:
      return kExitIo;
    default:
      return kExitNumeric;
  }
}

int report(mds_status s) {
  std::cerr << "mdspin: error: " << mds_last_error() << "\n";
  return exit_code(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Field-model magnetic interaction simulations"};
  app.set_version_flag("--version", std::string(mds_version()));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  bool quiet = false;

  for (const char* name : {"homogeneous", "interferometer", "stern-gerlach", "coupled", "compare"}) {
    auto* sub = app.add_subcommand(name, std::string("run the ") + name + " scenario");
    sub->add_option("--config", config_path, "experiment config file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides [output] path)");
    sub->add_option("--seed", seed, "random seed (overrides [numerics] seed)");
    sub->add_flag("--quiet", quiet, "suppress the summary");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }
  const std::string scenario = app.get_subcommands().front()->get_name();

  mds_config* cfg = nullptr;
  if (auto s = mds_config_load(config_path.c_str(), scenario.c_str(), &cfg); s != MDS_OK) return report(s);
  if (seed) mds_config_set_seed(cfg, *seed);
  if (!out_dir.empty()) {
    if (auto s = mds_config_set_output_dir(cfg, out_dir.c_str()); s != MDS_OK) {
      mds_config_free(cfg);
      return report(s);
    }
  }

  mds_run* run = nullptr;
  const mds_status s = mds_run_experiment(cfg, &run);
  mds_config_free(cfg);
  if (s != MDS_OK) return report(s);

  if (!quiet) {
    std::cout << "data:     " << mds_run_data_file(run) << "\n"
              << "metadata: " << mds_run_metadata_file(run) << "\n";
    for (size_t k = 0; k < mds_run_summary_count(run); ++k) {
      const char* key = nullptr;
      const char* value = nullptr;
      mds_run_summary_item(run, k, &key, &value);
      std::cout << key << " = " << value << "\n";
    }
  }
  mds_run_free(run);
  return 0;
}
