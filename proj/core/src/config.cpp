#include "zslnorm/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "zslnorm/errors.hpp"

namespace zslnorm {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected a real number, got '" + value + "'");
  }
}

std::size_t parse_count(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used != value.size() || v < 0) throw std::invalid_argument(value);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected a non-negative integer, got '" + value +
                      "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  throw ConfigError("config key '" + key + "': expected true/false, got '" + value + "'");
}

}  // namespace

const std::vector<ConfigKey>& config_schema() {
  static const std::vector<ConfigKey> schema = {
      {"batch_size", "128", "minibatch size over image features"},
      {"epochs", "50", "training epochs"},
      {"lr", "0.0005", "learning rate"},
      {"hidden_dim", "2048", "hidden width of the attribute embedder"},
      {"n_hidden_layers", "2", "hidden layers in the embedder body (0 = linear)"},
      {"gamma", "5", "cosine logit scale; logits are bounded by gamma^2"},
      {"entropy_weight", "0.001", "weight of the negative-entropy regularizer"},
      {"attribute_preproc", "an", "attribute preprocessing: an | standardize | none"},
      {"class_norm", "true", "class-wise standardization before the output projection"},
      {"output_init", "auto",
       "output projection init: auto | xavier_fan_in | xavier_fan_out | kaiming_fan_in | "
       "kaiming_fan_out | cn_output | linear_corrected"},
      {"init_distribution", "uniform", "weight distribution: uniform | normal"},
      {"logit_mode", "normalize_scale", "logit computation: normalize_scale | dot"},
      {"seen_scale", "1.0", "evaluation-time multiplier for seen-class logits, in (0, 1]"},
      {"optimizer", "adam", "optimizer: adam | sgd"},
      {"momentum", "0.9", "sgd momentum"},
      {"grad_clip", "0", "global gradient L2 clip (0 disables)"},
      {"czsl_epochs_per_task", "5", "continual learning: epochs per task"},
      {"czsl_lr_decay_per_task", "1.0", "continual learning: lr decay factor between tasks"},
  };
  return schema;
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> values;
  const auto& schema = config_schema();
  std::istringstream stream(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const bool known = std::any_of(schema.begin(), schema.end(),
                                   [&](const ConfigKey& k) { return k.name == key; });
    if (!known) {
      throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    if (values.count(key) != 0) {
      throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key '" + key +
                        "'");
    }
    values[key] = value;
  }
  return values;
}

std::map<std::string, std::string> load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file " + path);
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

ExperimentConfig make_experiment_config(const std::map<std::string, std::string>& values) {
  std::map<std::string, std::string> merged;
  for (const ConfigKey& key : config_schema()) merged[key.name] = key.default_value;
  for (const auto& [key, value] : values) {
    if (merged.count(key) == 0) {
      throw ConfigError("unknown config key '" + key + "'");
    }
    merged[key] = value;
  }

  ExperimentConfig config;
  TrainConfig& t = config.train;
  t.batch_size = parse_count("batch_size", merged["batch_size"]);
  t.epochs = parse_count("epochs", merged["epochs"]);
  t.lr = parse_double("lr", merged["lr"]);
  t.hidden_dim = parse_count("hidden_dim", merged["hidden_dim"]);
  t.n_hidden_layers = parse_count("n_hidden_layers", merged["n_hidden_layers"]);
  t.gamma = parse_double("gamma", merged["gamma"]);
  t.entropy_weight = parse_double("entropy_weight", merged["entropy_weight"]);
  t.attribute_preproc = attribute_preproc_from_string(merged["attribute_preproc"]);
  t.class_norm = parse_bool("class_norm", merged["class_norm"]);
  const InitDistribution distribution =
      init_distribution_from_string(merged["init_distribution"]);
  if (merged["output_init"] != "auto") {
    t.output_init = InitScheme{init_kind_from_string(merged["output_init"]), distribution};
  }
  t.body_init.distribution = distribution;
  if (merged["logit_mode"] == "normalize_scale") {
    t.logit_mode = LogitMode::normalize_scale;
  } else if (merged["logit_mode"] == "dot") {
    t.logit_mode = LogitMode::dot;
  } else {
    throw ConfigError("config key 'logit_mode': unknown value '" + merged["logit_mode"] + "'");
  }
  t.seen_scale = parse_double("seen_scale", merged["seen_scale"]);
  if (!(t.seen_scale > 0.0 && t.seen_scale <= 1.0)) {
    throw ConfigError("config key 'seen_scale': must lie in (0, 1]");
  }
  t.optimizer = optimizer_from_string(merged["optimizer"]);
  t.momentum = parse_double("momentum", merged["momentum"]);
  t.grad_clip = parse_double("grad_clip", merged["grad_clip"]);
  if (t.batch_size == 0) {
    throw ConfigError("config key 'batch_size': must be >= 1");
  }
  if (!(t.gamma > 0.0)) {
    throw ConfigError("config key 'gamma': must be > 0");
  }
  if (t.entropy_weight < 0.0) {
    throw ConfigError("config key 'entropy_weight': must be >= 0");
  }

  config.czsl_epochs_per_task = parse_count("czsl_epochs_per_task", merged["czsl_epochs_per_task"]);
  config.czsl_lr_decay_per_task =
      parse_double("czsl_lr_decay_per_task", merged["czsl_lr_decay_per_task"]);
  return config;
}

CzslConfig make_czsl_config(const ExperimentConfig& config) {
  CzslConfig out;
  out.base = config.train;
  out.epochs_per_task = config.czsl_epochs_per_task;
  out.lr_decay_per_task = config.czsl_lr_decay_per_task;
  return out;
}

std::string config_help_text() {
  std::ostringstream out;
  out << "Configuration keys (key = default):\n";
  for (const ConfigKey& key : config_schema()) {
    out << "  " << key.name << " = " << key.default_value << "\n      " << key.help << "\n";
  }
  return out.str();
}

}  // namespace zslnorm
