// Copyright 2026 The Cocite Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// cocite: command-line driver for the citation clustering pipeline.
//
// Exit status: 0 success, 1 input or processing error, 2 missing upstream
// artifact, 3 configuration error. Failures print one JSON object on stderr.

#include <algorithm>
#include <iostream>
#include <string>
#include <vector>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "cocite/error.hpp"
#include "cocite/io.hpp"
#include "cocite/pipeline.hpp"
#include "json.hpp"

namespace {

constexpr int kExitError = 1;
constexpr int kExitMissing = 2;
constexpr int kExitConfig = 3;

int report_error(int code, const std::string& kind, const std::string& message, const std::string& path = {}) {
  nlohmann::ordered_json j;
  j["error"] = kind;
  j["message"] = message;
  if (!path.empty()) j["path"] = path;
  j["exit_code"] = code;
  std::cerr << j.dump() << '\n';
  return code;
}

struct Flags {
  cocite::PipelineConfig config;
  std::string config_file;
  std::string log_level = "warn";
  std::vector<double> thresholds;
};

// Registers the shared flag set on one subcommand.
void add_flags(CLI::App& cmd, Flags& flags) {
  auto& c = flags.config;
  cmd.add_option("--pubs", c.pubs, "Publications TSV");
  cmd.add_option("--edges", c.edges, "Citation edges TSV");
  cmd.add_option("--taxonomy", c.taxonomy, "Taxonomy TSV");
  cmd.add_option("--out", c.out, "Output directory");
  cmd.add_option("--percentile", c.percentile, "Highly-cited quantile")->capture_default_str();
  cmd.add_option("--mcs", c.vlc.mcs, "Maximum cluster size")->capture_default_str();
  cmd.add_option("--t0", c.vlc.t0, "Starting quantile")->capture_default_str();
  cmd.add_option("--final-t", c.vlc.final_t, "Final quantile")->capture_default_str();
  cmd.add_option("--rounds", c.rounds, "Agglomeration rounds")->capture_default_str();
  cmd.add_option("--min-input-size", c.min_input_size, "Smallest cluster used for agglomeration")
      ->capture_default_str();
  cmd.add_option("--threshold", flags.thresholds, "Label-share threshold (repeatable)");
  cmd.add_option("--threads", c.threads, "Worker threads")->capture_default_str();
  cmd.add_option("--assignment", c.assignment, "External partition, one cluster id per line");
  cmd.add_option("--config", flags.config_file, "JSON config; its values override flags");
  cmd.add_option("--log-level", flags.log_level, "trace|debug|info|warn|error|off")->capture_default_str();
}

cocite::PipelineConfig effective_config(Flags& flags) {
  auto config = flags.config;
  if (!flags.thresholds.empty()) config.thresholds = flags.thresholds;
  // Keep the reporting boundary inside [min_size, mcs] when only --mcs moves.
  config.vlc.retain_below = std::min<std::size_t>(config.vlc.retain_below, config.vlc.mcs);
  if (flags.config_file.empty()) return config;

  nlohmann::json file;
  try {
    file = nlohmann::json::parse(cocite::read_text_file(flags.config_file));
  } catch (const nlohmann::json::exception& e) {
    throw cocite::ConfigError("cannot parse " + flags.config_file + ": " + e.what());
  }
  const auto merged = cocite::PipelineConfig::from_json(file, config);
  const auto before = config.to_json();
  const auto after = merged.to_json();
  for (const auto& [key, value] : after.items()) {
    if (before[key] != value) {
      std::cerr << "config: " << flags.config_file << " overrides " << key << ": " << before[key].dump() << " -> "
                << value.dump() << '\n';
    }
  }
  return merged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Citation-network clustering: co-citation variable-level clustering, agglomeration, "
               "conductance and taxonomy reconciliation"};
  app.require_subcommand(1);
  Flags flags;

  struct Command {
    const char* name;
    const char* help;
  };
  const std::vector<Command> commands{
      {"ingest", "Validate inputs; write corpus summary, METIS graph and node index"},
      {"cocite", "Citation counts, highly-cited filter and Salton-normalized co-citation pairs"},
      {"vlc", "Variable-level clustering of the co-citation graph"},
      {"agglomerate", "Max-linkage merging of variable-level clusters"},
      {"conductance", "Import an external partition and write the conductance summary"},
      {"reconcile", "Label-share heatmaps, cross map, fractional counts and nucleating pairs"},
      {"report", "Corpus profile tables and the bundled report directory"},
      {"run", "Every stage in order (conductance only with --assignment)"},
  };
  for (const auto& c : commands) add_flags(*app.add_subcommand(c.name, c.help), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error(kExitConfig, "config", e.what());
  }

  try {
    spdlog::set_default_logger(spdlog::stderr_color_mt("cocite"));
    spdlog::set_level(spdlog::level::from_str(flags.log_level));
    const auto config = effective_config(flags);
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "run") {
      cocite::run_pipeline(config);
    } else {
      cocite::run_stage(*cocite::parse_stage(name), config);
    }
  } catch (const cocite::MissingArtifactError& e) {
    return report_error(kExitMissing, "missing_artifact", e.what(), e.path().string());
  } catch (const cocite::ConfigError& e) {
    return report_error(kExitConfig, "config", e.what());
  } catch (const cocite::ParseError& e) {
    return report_error(kExitError, "parse", e.what());
  } catch (const cocite::InputError& e) {
    return report_error(kExitError, "input", e.what());
  } catch (const std::exception& e) {
    return report_error(kExitError, "error", e.what());
  }
  return 0;
}
