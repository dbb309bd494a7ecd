// certun: command-line workbench for certified graph unlearning.

#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <omp.h>

#include <CLI11.hpp>

#include "certun/config.hpp"
#include "certun/error.hpp"
#include "certun/pipeline.hpp"

namespace {

using certun::Json;

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2 };

struct Subcommand {
  const char* name;
  const char* help;
  std::function<Json(const certun::RunConfig&)> run;
};

void emit_error(const Json& doc, const std::string& out_dir) {
  std::cout << doc.dump(2) << std::endl;
  if (out_dir.empty()) return;
  try {
    certun::write_json(std::filesystem::path(out_dir) / "error.json", doc);
  } catch (const std::exception&) {
    // The error already went to stdout.
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certun: certified unlearning workbench for graph models"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "certun 0.1.0, report schema " + std::to_string(certun::kSchemaVersion));

  certun::ConvertArgs convert_args;
  std::string config_file;
  std::map<std::string, std::string> flag_values;
  std::string chosen;
  std::function<Json(const certun::RunConfig&)> run;

  const std::vector<Subcommand> commands = {
      {"train", "train a model and write model.bin", certun::cmd_train},
      {"unlearn", "apply an unlearning request with the influence update", certun::cmd_unlearn},
      {"retrain", "retrain on the graph with the request applied (oracle)", certun::cmd_retrain},
      {"certify", "unlearn, calibrate noise and write the certified model", certun::cmd_certify},
      {"evaluate", "full pipeline: unlearn, certify, retrain and evaluate", certun::cmd_evaluate},
      {"bench-bounds", "ratio sweep of distance bounds against the oracle", certun::cmd_bench_bounds},
      {"bench-time", "ratio sweep of unlearn vs retrain wall time", certun::cmd_bench_time},
      {"gen-synthetic", "write a synthetic SBM dataset in the native format", certun::cmd_gen_synthetic},
      {"convert", "convert content/cites citation files to the native format",
       [&](const certun::RunConfig& c) { return certun::cmd_convert(c, convert_args); }},
  };

  for (const auto& cmd : commands) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    sub->add_option("--config", config_file, "flat key = value config file");
    for (const auto& key : certun::config_keys())
      sub->add_option_function<std::string>(
          "--" + key.name, [&flag_values, name = key.name](const std::string& v) { flag_values[name] = v; },
          key.help);
    if (std::string(cmd.name) == "convert") {
      sub->add_option("--content", convert_args.content, "content file: id, features, class name")
          ->required();
      sub->add_option("--cites", convert_args.cites, "cites file: cited id, citing id")->required();
      sub->add_option("--train-fraction", convert_args.options.train_fraction, "train split fraction");
      sub->add_flag("!--no-stratify", convert_args.options.stratified, "split without stratifying by class");
    }
    sub->callback([&chosen, &run, &cmd] {
      chosen = cmd.name;
      run = cmd.run;
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error(certun::error_json("usage", e.what()), "");
    return kUsage;
  }

  std::string out_dir;
  try {
    std::vector<certun::ConfigAssignment> assignments;
    if (!config_file.empty()) assignments = certun::read_config_file(config_file);
    for (auto& a : certun::read_config_env()) assignments.push_back(std::move(a));
    for (const auto& [key, value] : flag_values) assignments.push_back({key, value, "--" + key});
    // Best effort location for error.json before the config is known valid.
    for (const auto& a : assignments)
      if (a.key == "out") out_dir = a.value;
    if (out_dir.empty()) out_dir = certun::RunConfig{}.out;

    certun::RunConfig config = certun::build_config(assignments);
    convert_args.options.seed = config.data_seed;
    if (config.threads > 0) omp_set_num_threads(config.threads);
    const Json report = run(config);
    std::cout << report.dump(2) << std::endl;
    return kOk;
  } catch (const certun::ConfigError& e) {
    emit_error(certun::error_json(certun::to_string(e.code()), "invalid configuration", e.problems()), out_dir);
    return kUsage;
  } catch (const certun::Error& e) {
    emit_error(certun::error_json(certun::to_string(e.code()), e.what()), out_dir);
    return kFailure;
  } catch (const std::exception& e) {
    emit_error(certun::error_json("internal", e.what()), out_dir);
    return kFailure;
  }
}
