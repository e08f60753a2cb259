#pragma once

#include <map>
#include <string>
#include <vector>

#include "zslnorm/czsl.hpp"
#include "zslnorm/zsl.hpp"

namespace zslnorm {

/// One configuration key: name, default (as text) and a short description.
/// The same table drives file parsing, validation and --help output.
struct ConfigKey {
  std::string name;
  std::string default_value;
  std::string help;
};

/// Schema of the plain-text key=value experiment configuration.
const std::vector<ConfigKey>& config_schema();

/// Parsed key=value file contents; every key validated against the schema,
/// unknown keys rejected.
std::map<std::string, std::string> parse_config_text(const std::string& text);

std::map<std::string, std::string> load_config_file(const std::string& path);

struct ExperimentConfig {
  TrainConfig train;
  std::size_t czsl_epochs_per_task = 5;
  double czsl_lr_decay_per_task = 1.0;
};

/// Schema defaults overlaid with the provided values.
ExperimentConfig make_experiment_config(const std::map<std::string, std::string>& values);

CzslConfig make_czsl_config(const ExperimentConfig& config);

/// Formatted "key = default  description" lines for --help.
std::string config_help_text();

}  // namespace zslnorm
