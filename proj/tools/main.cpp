// cropyield command-line front end: inspect, run, synth.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cropyield/config.hpp"
#include "cropyield/error.hpp"
#include "cropyield/pipeline.hpp"

namespace {

using namespace cropyield;

struct RunFlags {
  std::string config;
  std::optional<std::string> input;
  std::optional<std::string> outdir;
  std::optional<std::string> seed;
  std::optional<std::string> classes;
  std::optional<std::string> train_fraction;
  std::optional<std::string> models;
  bool strict = false;
  bool drop_invalid = false;
  bool parallel = false;
};

int do_inspect(const std::string& input, bool strict, const std::string& outdir) {
  ValidationOptions options;
  options.strict = strict;
  const auto result = inspect_file(input, options);
  std::cout << result.json.dump(2) << "\n";
  if (!outdir.empty()) {
    write_files(outdir, {{"summary.json", to_json(result.summary).dump(2) + "\n"},
                         {"validation.json", to_json(result.validation).dump(2) + "\n"}});
  }
  return result.validation.ok() ? kExitOk : kExitValidation;
}

int do_run(const RunFlags& f) {
  // Config file first, then flags on top.
  RunConfig cfg = f.config.empty() ? RunConfig{} : read_config(f.config);
  auto set = [&](std::string_view key, const std::optional<std::string>& v) {
    if (v) apply_setting(cfg, key, *v);
  };
  set("input", f.input);
  set("outdir", f.outdir);
  set("seed", f.seed);
  set("classes", f.classes);
  set("train_fraction", f.train_fraction);
  set("models", f.models);
  if (f.strict) cfg.strict = true;
  if (f.drop_invalid) cfg.drop_invalid = true;
  if (f.parallel) cfg.parallel = true;

  const auto result = execute_run(cfg);
  write_files(cfg.outdir, result.files);

  nlohmann::ordered_json j;
  j["outdir"] = cfg.outdir;
  j["rows_used"] = result.rows_used;
  j["files_written"] = result.files.size();
  j["comparison"] = to_json(result.table, true);
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int do_synth(const std::string& spec, const std::string& output) {
  const auto data = synth_to_file(spec, output);
  nlohmann::ordered_json j;
  j["output"] = output;
  j["rows"] = data.dataset.size();
  std::cout << j.dump() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Crop yield classification toolkit"};
  app.require_subcommand(1);

  std::string inspect_input, inspect_outdir;
  bool inspect_strict = false;
  auto* inspect = app.add_subcommand("inspect", "Summary statistics and validation for a CSV");
  inspect->add_option("--input", inspect_input, "Crop-yield CSV file")->required();
  inspect->add_option("--outdir", inspect_outdir, "Also write summary.json and validation.json here");
  inspect->add_flag("--strict", inspect_strict, "Treat soft warnings as failures");

  RunFlags rf;
  auto* run = app.add_subcommand("run", "Train and compare classifiers, write figures and manifest");
  run->add_option("--config", rf.config, "Run config file (key = value lines)");
  run->add_option("--input", rf.input, "Crop-yield CSV file");
  run->add_option("--outdir", rf.outdir, "Output directory");
  run->add_option("--seed", rf.seed, "Master seed");
  run->add_option("--classes", rf.classes, "Number of yield classes (2 or 4)");
  run->add_option("--train-fraction", rf.train_fraction, "Fraction of rows used for training");
  run->add_option("--models", rf.models, "Comma-separated model names");
  run->add_flag("--strict", rf.strict, "Fail on soft validation warnings");
  run->add_flag("--drop-invalid", rf.drop_invalid, "Drop rows with hard violations instead of failing");
  run->add_flag("--parallel", rf.parallel, "Fit models concurrently");

  std::string synth_spec, synth_output;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset from a JSON spec");
  synth->add_option("--spec", synth_spec, "Spec JSON file")->required();
  synth->add_option("--output", synth_output, "Output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << error_record(Error(Errc::InvalidConfig, e.what())) << "\n";
    return kExitConfig;
  }

  try {
    if (*inspect) return do_inspect(inspect_input, inspect_strict, inspect_outdir);
    if (*run) return do_run(rf);
    return do_synth(synth_spec, synth_output);
  } catch (const Error& e) {
    std::cerr << error_record(e) << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << error_record(e) << "\n";
    return kExitInput;
  }
}
