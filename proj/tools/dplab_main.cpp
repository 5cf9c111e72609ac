// dplab - batch front-end for the double-phase laboratory.
//
// Subcommands: solve, analyze, measure, pipeline, probe-axioms.
// Exit codes: 0 success, 2 validation, 3 numerical failure, 4 I/O.

#include <CLI11.hpp>

#include "dplab/pipeline.hpp"

namespace {

int run(int argc, char** argv) {
  CLI::App app{"dplab - manifold-constrained double-phase variational laboratory"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  int threads = 1;
  int64_t seed_override = -1;

  app.add_option("--config", config_path, "experiment config (JSON)")->required();
  app.add_option("--out", out_dir, "output directory (overrides config)");
  app.add_option("--threads", threads, "worker threads (results are thread-count invariant)");
  app.add_option("--seed", seed_override, "seed override");

  auto* solve = app.add_subcommand("solve", "minimize the constrained energy");
  auto* analyze = app.add_subcommand("analyze", "run the regularity analyzer on a field");
  auto* measure = app.add_subcommand("measure", "measure flagged singular cells");
  auto* pipeline = app.add_subcommand("pipeline", "solve + analyze + measure");
  auto* probe = app.add_subcommand("probe-axioms", "sample the Musielak axiom constants");

  std::string field_bin, field_sidecar, flags_path;
  analyze->add_option("--field", field_bin, "field payload (.bin)");
  analyze->add_option("--sidecar", field_sidecar, "field sidecar (.json)");
  measure->add_option("--flags", flags_path, "flagged-cell list (flags.csv)");

  app.parse(argc, argv);

  dplab::set_thread_budget(threads);
  dplab::LoadedConfig loaded = dplab::load_config(config_path);
  if (seed_override >= 0) loaded.config.seed = uint64_t(seed_override);
  const std::string dir = out_dir.empty() ? loaded.config.output_dir : out_dir;

  if (solve->parsed()) {
    dplab::cmd_solve(loaded, dir);
  } else if (analyze->parsed()) {
    if (field_bin.empty()) {
      field_bin = (std::filesystem::path(dir) / "field.bin").string();
      field_sidecar = (std::filesystem::path(dir) / "field.json").string();
    } else if (field_sidecar.empty()) {
      field_sidecar = field_bin.substr(0, field_bin.find_last_of('.')) + ".json";
    }
    dplab::cmd_analyze(loaded, field_bin, field_sidecar, dir);
  } else if (measure->parsed()) {
    if (flags_path.empty()) flags_path = (std::filesystem::path(dir) / "flags.csv").string();
    dplab::cmd_measure(loaded, flags_path, dir);
  } else if (pipeline->parsed()) {
    dplab::cmd_pipeline(loaded, dir);
  } else if (probe->parsed()) {
    dplab::cmd_probe_axioms(loaded, dir);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CLI::ParseError& e) {
    return (CLI::App{}).exit(e) == 0 ? 0 : 2;
  } catch (const dplab::ValidationError& e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return 2;
  } catch (const dplab::IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return 4;
  } catch (const dplab::NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
