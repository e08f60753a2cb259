#include "zslnorm/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "zslnorm/errors.hpp"

namespace zslnorm {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big,
              "mixed-endian platforms are not supported");

template <typename T>
void write_le(std::ostream& out, T value) {
  auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(value);
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes.begin(), bytes.end());
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <typename T>
T read_le(std::istream& in, const std::string& path) {
  std::array<unsigned char, sizeof(T)> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), sizeof(T))) {
    throw ParseError(path + ": unexpected end of file");
  }
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes.begin(), bytes.end());
  }
  return std::bit_cast<T>(bytes);
}

void write_doubles(std::ostream& out, std::span<const double> values) {
  for (double v : values) write_le(out, v);
}

void read_doubles(std::istream& in, std::span<double> values, const std::string& path) {
  // Measure what is actually available so truncation errors can name counts.
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::array<unsigned char, 8> bytes;
    if (!in.read(reinterpret_cast<char*>(bytes.data()), 8)) {
      const std::size_t got = i * 8 + static_cast<std::size_t>(in.gcount());
      throw ParseError(path + ": truncated payload, expected " +
                       std::to_string(values.size() * 8) + " bytes, got " + std::to_string(got));
    }
    if constexpr (std::endian::native == std::endian::big) {
      std::reverse(bytes.begin(), bytes.end());
    }
    values[i] = std::bit_cast<double>(bytes);
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError("cannot open " + path + " for writing");
  }
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open " + path + " for reading");
  }
  return in;
}

constexpr char kFeatureMagic[4] = {'Z', 'S', 'L', 'F'};
constexpr char kCheckpointMagic[4] = {'Z', 'S', 'L', 'C'};
constexpr std::uint32_t kFeatureVersion = 1;
constexpr std::uint32_t kCheckpointVersion = 1;

}  // namespace

void save_feature_file(const std::string& path, const Matrix& features,
                       const std::vector<int>* labels) {
  if (labels != nullptr && labels->size() != features.rows()) {
    throw DimensionError("save_feature_file: label count != row count");
  }
  std::ofstream out = open_out(path);
  out.write(kFeatureMagic, 4);
  write_le<std::uint32_t>(out, kFeatureVersion);
  write_le<std::uint64_t>(out, features.rows());
  write_le<std::uint64_t>(out, features.cols());
  write_le<std::uint8_t>(out, labels != nullptr ? 1 : 0);
  write_doubles(out, features.flat());
  if (labels != nullptr) {
    for (int v : *labels) write_le<std::int32_t>(out, v);
  }
  if (!out) {
    throw DataError("save_feature_file: write failed for " + path);
  }
}

FeatureFile load_feature_file(const std::string& path) {
  std::ifstream in = open_in(path);
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kFeatureMagic, 4) != 0) {
    throw ParseError(path + ": bad magic, not a ZSLF feature file");
  }
  const auto version = read_le<std::uint32_t>(in, path);
  if (version != kFeatureVersion) {
    throw ParseError(path + ": unsupported feature file version " + std::to_string(version));
  }
  const auto rows = read_le<std::uint64_t>(in, path);
  const auto cols = read_le<std::uint64_t>(in, path);
  const auto flag = read_le<std::uint8_t>(in, path);
  if (flag > 1) {
    throw ParseError(path + ": invalid label flag");
  }

  FeatureFile file;
  file.features = Matrix(rows, cols);
  read_doubles(in, file.features.flat(), path);
  file.has_labels = flag == 1;
  if (file.has_labels) {
    file.labels.resize(rows);
    for (std::uint64_t i = 0; i < rows; ++i) {
      file.labels[i] = read_le<std::int32_t>(in, path);
    }
  }
  file.features.ensure_finite(path.c_str());
  return file;
}

void save_attribute_csv(const std::string& path, const Matrix& attributes) {
  std::ofstream out = open_out(path);
  char buffer[64];
  for (std::size_t i = 0; i < attributes.rows(); ++i) {
    out << i;
    for (std::size_t j = 0; j < attributes.cols(); ++j) {
      std::snprintf(buffer, sizeof(buffer), "%.17g", attributes(i, j));
      out << ',' << buffer;
    }
    out << '\n';
  }
  if (!out) {
    throw DataError("save_attribute_csv: write failed for " + path);
  }
}

Matrix load_attribute_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<std::vector<double>> rows;
  std::vector<long long> ids;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> values;
    std::stringstream ss(line);
    std::string cell;
    bool first = true;
    long long id = 0;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        if (first) {
          id = std::stoll(cell, &used);
        } else {
          values.push_back(std::stod(cell, &used));
        }
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ParseError(path + ": row " + std::to_string(line_no) + ": bad numeric value '" +
                         cell + "'");
      }
      first = false;
    }
    if (first) {
      throw ParseError(path + ": row " + std::to_string(line_no) + ": empty row");
    }
    if (width == 0) {
      width = values.size();
      if (width == 0) {
        throw ParseError(path + ": row " + std::to_string(line_no) + ": no attribute columns");
      }
    } else if (values.size() != width) {
      throw ParseError(path + ": row " + std::to_string(line_no) + ": ragged row, expected " +
                       std::to_string(width) + " values, got " + std::to_string(values.size()));
    }
    ids.push_back(id);
    rows.push_back(std::move(values));
  }
  if (rows.empty()) {
    throw ParseError(path + ": no attribute rows");
  }
  // Class ids must be exactly 0..K-1; the row index is the class id.
  std::vector<bool> present(rows.size(), false);
  for (long long id : ids) {
    if (id < 0 || static_cast<std::size_t>(id) >= rows.size() || present[id]) {
      throw ParseError(path + ": class ids must be unique and cover 0.." +
                       std::to_string(rows.size() - 1));
    }
    present[id] = true;
  }
  Matrix attrs(rows.size(), width);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < width; ++j) {
      attrs(static_cast<std::size_t>(ids[i]), j) = rows[i][j];
    }
  }
  attrs.ensure_finite(path.c_str());
  return attrs;
}

namespace {

void write_vector(std::ostream& out, const std::vector<double>& v) {
  write_le<std::uint64_t>(out, v.size());
  write_doubles(out, v);
}

std::vector<double> read_vector(std::istream& in, const std::string& path) {
  const auto n = read_le<std::uint64_t>(in, path);
  std::vector<double> v(n);
  read_doubles(in, v, path);
  return v;
}

}  // namespace

void save_checkpoint(const std::string& path, const TrainedModel& model) {
  std::ofstream out = open_out(path);
  out.write(kCheckpointMagic, 4);
  write_le<std::uint32_t>(out, kCheckpointVersion);
  const Embedder& e = model.embedder;
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(e.body().n_layers()));
  write_le<std::uint64_t>(out, e.attr_dim());
  write_le<std::uint64_t>(out, e.hidden_out_dim());
  write_le<std::uint64_t>(out, e.feature_dim());
  write_le<std::uint8_t>(out, e.class_norm_enabled() ? 1 : 0);
  write_le<double>(out, e.config().cn_momentum);
  write_le<double>(out, e.config().cn_epsilon);
  for (const DenseLayer& layer : e.body().layers()) {
    write_le<std::uint64_t>(out, layer.weight.rows());
    write_le<std::uint64_t>(out, layer.weight.cols());
    write_doubles(out, layer.weight.flat());
    write_doubles(out, layer.bias);
  }
  write_doubles(out, e.output_matrix().flat());
  if (e.class_norm_enabled()) {
    write_doubles(out, e.standardizer().running_mean());
    write_doubles(out, e.standardizer().running_var());
  }
  write_le<std::uint8_t>(out, static_cast<std::uint8_t>(model.preproc.kind));
  write_vector(out, model.preproc.col_mean);
  write_vector(out, model.preproc.col_divisor);
  if (!out) {
    throw DataError("save_checkpoint: write failed for " + path);
  }

  nlohmann::ordered_json sidecar;
  const TrainConfig& c = model.config;
  sidecar["batch_size"] = c.batch_size;
  sidecar["epochs"] = c.epochs;
  sidecar["lr"] = c.lr;
  sidecar["hidden_dim"] = c.hidden_dim;
  sidecar["n_hidden_layers"] = c.n_hidden_layers;
  sidecar["gamma"] = c.gamma;
  sidecar["entropy_weight"] = c.entropy_weight;
  sidecar["attribute_preproc"] = to_string(c.attribute_preproc);
  sidecar["class_norm"] = c.class_norm;
  sidecar["output_init"] = to_string(c.resolved_output_init().kind);
  sidecar["output_init_distribution"] = to_string(c.resolved_output_init().distribution);
  sidecar["body_init"] = to_string(c.body_init.kind);
  sidecar["body_init_distribution"] = to_string(c.body_init.distribution);
  sidecar["logit_mode"] = c.logit_mode == LogitMode::normalize_scale ? "normalize_scale" : "dot";
  sidecar["seen_scale"] = c.seen_scale;
  sidecar["optimizer"] = to_string(c.optimizer);
  sidecar["momentum"] = c.momentum;
  sidecar["grad_clip"] = c.grad_clip;
  sidecar["seed"] = c.seed;
  std::ofstream js(path + ".json");
  if (!js) {
    throw DataError("save_checkpoint: cannot write sidecar for " + path);
  }
  js << sidecar.dump(2) << '\n';
}

TrainedModel load_checkpoint(const std::string& path) {
  std::ifstream in = open_in(path);
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kCheckpointMagic, 4) != 0) {
    throw ParseError(path + ": bad magic, not a ZSLC checkpoint");
  }
  const auto version = read_le<std::uint32_t>(in, path);
  if (version != kCheckpointVersion) {
    throw ParseError(path + ": unsupported checkpoint version " + std::to_string(version));
  }
  const auto n_layers = read_le<std::uint32_t>(in, path);
  const auto attr_dim = read_le<std::uint64_t>(in, path);
  const auto hidden_out = read_le<std::uint64_t>(in, path);
  const auto feature_dim = read_le<std::uint64_t>(in, path);
  const auto class_norm = read_le<std::uint8_t>(in, path);
  const double momentum = read_le<double>(in, path);
  const double epsilon = read_le<double>(in, path);

  TrainedModel model;

  std::ifstream js(path + ".json");
  if (!js) {
    throw DataError(path + ": missing hyperparameter sidecar " + path + ".json");
  }
  nlohmann::json sidecar;
  try {
    js >> sidecar;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ".json: " + e.what());
  }
  TrainConfig& c = model.config;
  try {
    c.batch_size = sidecar.at("batch_size").get<std::size_t>();
    c.epochs = sidecar.at("epochs").get<std::size_t>();
    c.lr = sidecar.at("lr").get<double>();
    c.hidden_dim = sidecar.at("hidden_dim").get<std::size_t>();
    c.n_hidden_layers = sidecar.at("n_hidden_layers").get<std::size_t>();
    c.gamma = sidecar.at("gamma").get<double>();
    c.entropy_weight = sidecar.at("entropy_weight").get<double>();
    c.attribute_preproc = attribute_preproc_from_string(sidecar.at("attribute_preproc"));
    c.class_norm = sidecar.at("class_norm").get<bool>();
    InitScheme output;
    output.kind = init_kind_from_string(sidecar.at("output_init"));
    output.distribution = init_distribution_from_string(sidecar.at("output_init_distribution"));
    c.output_init = output;
    c.body_init.kind = init_kind_from_string(sidecar.at("body_init"));
    c.body_init.distribution = init_distribution_from_string(sidecar.at("body_init_distribution"));
    c.logit_mode = sidecar.at("logit_mode") == "dot" ? LogitMode::dot : LogitMode::normalize_scale;
    c.seen_scale = sidecar.at("seen_scale").get<double>();
    c.optimizer = optimizer_from_string(sidecar.at("optimizer"));
    c.momentum = sidecar.at("momentum").get<double>();
    c.grad_clip = sidecar.at("grad_clip").get<double>();
    c.seed = sidecar.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ".json: " + e.what());
  }

  // Rebuild the embedder shell with a throwaway seed, then overwrite every
  // parameter from the binary payload.
  EmbedderConfig ec;
  ec.attr_dim = attr_dim;
  ec.hidden_dim = n_layers > 0 ? hidden_out : 0;
  ec.feature_dim = feature_dim;
  ec.n_hidden_layers = n_layers;
  ec.class_norm = class_norm == 1;
  ec.body_init = c.body_init;
  ec.output_init = c.resolved_output_init();
  ec.cn_momentum = momentum;
  ec.cn_epsilon = epsilon;
  Rng scratch(0);
  model.embedder = Embedder(ec, scratch);

  for (DenseLayer& layer : model.embedder.body().mutable_layers()) {
    const auto rows = read_le<std::uint64_t>(in, path);
    const auto cols = read_le<std::uint64_t>(in, path);
    if (rows != layer.weight.rows() || cols != layer.weight.cols()) {
      throw ParseError(path + ": layer shape does not match header dims");
    }
    read_doubles(in, layer.weight.flat(), path);
    read_doubles(in, layer.bias, path);
  }
  read_doubles(in, model.embedder.output_matrix().flat(), path);
  if (ec.class_norm) {
    read_doubles(in, model.embedder.standardizer().mutable_running_mean(), path);
    read_doubles(in, model.embedder.standardizer().mutable_running_var(), path);
  }
  const auto preproc_kind = read_le<std::uint8_t>(in, path);
  if (preproc_kind > 2) {
    throw ParseError(path + ": invalid preprocessing kind");
  }
  model.preproc.kind = static_cast<AttributePreproc>(preproc_kind);
  model.preproc.col_mean = read_vector(in, path);
  model.preproc.col_divisor = read_vector(in, path);
  return model;
}

void save_dataset(const std::string& prefix, const ZslDataset& data) {
  data.validate();
  save_feature_file(prefix + ".seen_train.zslf", data.seen_train.features,
                    &data.seen_train.labels);
  save_feature_file(prefix + ".seen_test.zslf", data.seen_test.features, &data.seen_test.labels);
  save_feature_file(prefix + ".unseen_test.zslf", data.unseen_test.features,
                    &data.unseen_test.labels);
  save_attribute_csv(prefix + ".attrs.csv", data.attributes);
  nlohmann::ordered_json manifest;
  manifest["seen_class_ids"] = data.seen_class_ids;
  manifest["unseen_class_ids"] = data.unseen_class_ids;
  std::ofstream out(prefix + ".manifest.json");
  if (!out) {
    throw DataError("save_dataset: cannot write manifest for " + prefix);
  }
  out << manifest.dump(2) << '\n';
}

void save_pool(const std::string& prefix, const ClassPool& pool) {
  save_feature_file(prefix + ".train.zslf", pool.train.features, &pool.train.labels);
  save_feature_file(prefix + ".test.zslf", pool.test.features, &pool.test.labels);
  save_attribute_csv(prefix + ".attrs.csv", pool.attributes);
}

ClassPool load_pool(const std::string& prefix) {
  ClassPool pool;
  auto train = load_feature_file(prefix + ".train.zslf");
  auto test = load_feature_file(prefix + ".test.zslf");
  if (!train.has_labels || !test.has_labels) {
    throw DataError(prefix + ": pool feature files must carry labels");
  }
  pool.train = {std::move(train.features), std::move(train.labels)};
  pool.test = {std::move(test.features), std::move(test.labels)};
  pool.attributes = load_attribute_csv(prefix + ".attrs.csv");
  const int k = static_cast<int>(pool.attributes.rows());
  for (int label : pool.train.labels) {
    if (label < 0 || label >= k) {
      throw DataError(prefix + ": train label " + std::to_string(label) +
                      " has no attribute row");
    }
  }
  for (int label : pool.test.labels) {
    if (label < 0 || label >= k) {
      throw DataError(prefix + ": test label " + std::to_string(label) + " has no attribute row");
    }
  }
  return pool;
}

ZslDataset load_dataset(const std::string& prefix) {
  ZslDataset data;
  auto seen_train = load_feature_file(prefix + ".seen_train.zslf");
  auto seen_test = load_feature_file(prefix + ".seen_test.zslf");
  auto unseen_test = load_feature_file(prefix + ".unseen_test.zslf");
  if (!seen_train.has_labels || !seen_test.has_labels || !unseen_test.has_labels) {
    throw DataError(prefix + ": dataset feature files must carry labels");
  }
  data.seen_train = {std::move(seen_train.features), std::move(seen_train.labels)};
  data.seen_test = {std::move(seen_test.features), std::move(seen_test.labels)};
  data.unseen_test = {std::move(unseen_test.features), std::move(unseen_test.labels)};
  data.attributes = load_attribute_csv(prefix + ".attrs.csv");

  std::ifstream in(prefix + ".manifest.json");
  if (!in) {
    throw DataError(prefix + ": missing manifest " + prefix + ".manifest.json");
  }
  nlohmann::json manifest;
  try {
    in >> manifest;
    data.seen_class_ids = manifest.at("seen_class_ids").get<std::vector<int>>();
    data.unseen_class_ids = manifest.at("unseen_class_ids").get<std::vector<int>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(prefix + ".manifest.json: " + e.what());
  }
  data.validate();
  return data;
}

}  // namespace zslnorm
