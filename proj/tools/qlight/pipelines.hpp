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

// Experiment pipelines. Each takes a resolved configuration, writes its
// data files into config.output_dir and returns the report. Reports hold no
// wall-clock data, so identical (config, seed) give identical reports.

#ifndef QLIGHT_TOOLS_PIPELINES_HPP
#define QLIGHT_TOOLS_PIPELINES_HPP

#include <string>

#include <nlohmann/json.hpp>

#include "config.hpp"
#include "qlight/tomography.hpp"

namespace qlight::app {

/// Failure inside a named pipeline stage.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what) : Error(what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

nlohmann::json run_sweep_spectrum(const RunConfig& config);
nlohmann::json run_emit_photon(const RunConfig& config);
nlohmann::json run_timebin(const RunConfig& config);
nlohmann::json run_qutrit(const RunConfig& config);
nlohmann::json run_fit_s21(const RunConfig& config);

/// Dispatches on config.pipeline and adds the config echo and versions.
nlohmann::json run_pipeline(const RunConfig& config, const Overrides& overrides = {});

/// Bias grid of the spectrum sweep.
std::vector<double> sweep_biases(const RunConfig& config);

/// Field-mode reconstruction settings for `modes` photonic modes.
ReconstructionSpec field_spec(const RunConfig& config, std::size_t modes);

}  // namespace qlight::app

#endif  // QLIGHT_TOOLS_PIPELINES_HPP
