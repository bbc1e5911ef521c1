#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "mmq/errors.hpp"
#include "mmq/runner.hpp"

namespace {

void print_fit_lines(const nlohmann::json& fits) {
  for (auto it = fits.begin(); it != fits.end(); ++it) {
    if (it.value().is_array()) {
      std::printf("fit %s: %zu traces\n", it.key().c_str(), it.value().size());
      continue;
    }
    std::string line = "fit " + it.key() + ":";
    const nlohmann::json& values = it.value().value("values", nlohmann::json::object());
    for (auto v = values.begin(); v != values.end(); ++v) {
      char buf[64];
      std::snprintf(buf, sizeof buf, " %s=%.6g", v.key().c_str(), v.value().get<double>());
      line += buf;
    }
    if (!it.value().value("converged", false)) line += " (not converged)";
    std::printf("%s\n", line.c_str());
  }
}

int run_command(const std::string& config_path, const std::string& output_root) {
  if (!output_root.empty()) setenv("MMQSIM_OUTPUT_ROOT", output_root.c_str(), 1);
  mmq::RunConfig cfg = mmq::load_run_config(config_path);
  mmq::RunRecord rec = mmq::run_config(cfg);
  std::printf("%s  config %s\n", cfg.experiment.c_str(), rec.config_hash.c_str());
  std::printf("wrote %s (%zu values in %.3f s)\n", rec.record_path.c_str(),
              rec.result.values.size(), rec.wall_seconds);
  print_fit_lines(rec.fits);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic millimeter-wave qubit experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_root;
  CLI::App* run = app.add_subcommand("run", "Execute a config and persist the record");
  run->add_option("config", config_path, "JSON config file")->required();
  run->add_option("--output-root", output_root, "Root for relative output directories");

  CLI::App* list = app.add_subcommand("list", "List registered experiments");

  std::string record_path;
  std::string format = "csv";
  std::string out_dir;
  CLI::App* emit = app.add_subcommand("emit", "Write plot-ready files from a record");
  emit->add_option("record", record_path, "record.json produced by run")->required();
  emit->add_option("--format", format, "csv or json");
  emit->add_option("--out-dir", out_dir, "Destination directory (default: beside the record)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return run_command(config_path, output_root);
    if (list->parsed()) {
      std::fputs(mmq::list_experiments().c_str(), stdout);
      return 0;
    }
    if (emit->parsed()) {
      for (const std::string& path : mmq::emit_plotdata(record_path, format, out_dir))
        std::printf("wrote %s\n", path.c_str());
      return 0;
    }
  } catch (const mmq::invalid_input& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
