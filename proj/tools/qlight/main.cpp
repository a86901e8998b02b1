// Copyright 2026 The qlight Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qlight command-line tool. Exit codes: 0 success, 1 usage or configuration
// error, 2 pipeline stage failure.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "config.hpp"
#include "pipelines.hpp"

namespace {

using qlight::app::Overrides;

struct Flags {
  std::string config;
  Overrides overrides;
};

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream os(path);
  if (!os) throw qlight::Error("cannot open " + path.string() + " for writing");
  os << j.dump(2) << '\n';
  if (!os) throw qlight::Error("write failed: " + path.string());
}

int run(const std::string& pipeline, const Flags& flags) {
  qlight::app::RunConfig config;
  try {
    config = qlight::app::load_config(flags.config, pipeline, flags.overrides);
  } catch (const qlight::Error& e) {
    std::cerr << "error [config]: " << e.what() << '\n';
    return 1;
  }
  const auto t0 = std::chrono::steady_clock::now();
  nlohmann::json report;
  try {
    std::filesystem::create_directories(config.output_dir);
    report = qlight::app::run_pipeline(config, flags.overrides);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const std::filesystem::path dir(config.output_dir);
    write_json(dir / "report.json", report);
    write_json(dir / "timing.json", {{"wall_clock_s", wall}, {"workers", config.workers}});
  } catch (const qlight::app::StageError& e) {
    std::cerr << "error [" << e.stage() << "]: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error [output]: " << e.what() << '\n';
    return 2;
  }
  std::cout << "wrote " << (std::filesystem::path(config.output_dir) / "report.json").string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qlight: frequency-tunable microwave single-photon source simulator"};
  app.set_version_flag("--version", qlight::version_string());
  app.require_subcommand(1);

  struct Command {
    const char* name;
    const char* help;
  };
  const Command commands[] = {
      {"sweep-spectrum", "Flux sweep of the resonator transmission with per-point fits"},
      {"emit-photon", "Single-photon emission, heterodyne histograms and tomography"},
      {"timebin", "Time-bin qubit (or transmon-photon Bell state) fidelity versus frequency"},
      {"qutrit", "Photonic qutrit over three temporal modes"},
      {"fit-s21", "Fit an external S21 trace (CSV: freq_hz, re_s21, im_s21)"},
  };
  Flags flags;
  std::string chosen;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", flags.config, "Run configuration (JSON)")->check(CLI::ExistingFile);
    sub->add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& v) { flags.overrides.seed = v; },
                                            "Random seed (overrides the config)");
    sub->add_option_function<std::string>("--out", [&](const std::string& v) { flags.overrides.output_dir = v; },
                                           "Output directory (overrides the config)");
    sub->add_option_function<std::size_t>("--shots", [&](const std::size_t& v) { flags.overrides.shots = v; },
                                          "Measurement shots (overrides the config)")
        ->check(CLI::PositiveNumber);
    if (std::string(c.name) == "fit-s21") {
      sub->add_option_function<std::string>("--trace", [&](const std::string& v) { flags.overrides.trace = v; },
                                            "S21 trace CSV")
          ->check(CLI::ExistingFile);
    }
    sub->callback([&chosen, name = c.name] { chosen = name; });
  }
  CLI11_PARSE(app, argc, argv);
  return run(chosen, flags);
}
