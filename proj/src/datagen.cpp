#include "cazsl/datagen.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "cazsl/csv.hpp"
#include "cazsl/rng.hpp"

namespace cazsl::datagen {

Eigen::Index Dataset::sample_index(const std::string& sample_id) const {
  for (std::size_t i = 0; i < sample_ids.size(); ++i)
    if (sample_ids[i] == sample_id) return static_cast<Eigen::Index>(i);
  throw DataError("unknown sample id '" + sample_id + "'");
}

bool SplitSpec::is_seen(const std::string& class_name) const {
  return std::find(seen_classes.begin(), seen_classes.end(), class_name) != seen_classes.end();
}

bool SplitSpec::is_unseen(const std::string& class_name) const {
  return std::find(unseen_classes.begin(), unseen_classes.end(), class_name) !=
         unseen_classes.end();
}

std::vector<std::string> SplitSpec::all_classes() const {
  std::vector<std::string> all = seen_classes;
  all.insert(all.end(), unseen_classes.begin(), unseen_classes.end());
  return all;
}

void validate_bundle(const Dataset& dataset, const SplitSpec& split,
                     const attrspace::AttributeMatrix& attributes) {
  if (dataset.num_samples() == 0 || dataset.feature_dim() == 0)
    throw DataError("dataset must have at least one sample and one feature");
  if (!dataset.features.allFinite())
    throw DataError("dataset features contain non-finite values");

  for (const auto& c : split.seen_classes)
    if (split.is_unseen(c))
      throw DataError("class '" + c + "' is listed as both seen and unseen");

  std::unordered_set<std::string> universe;
  for (const auto& c : split.all_classes())
    if (!universe.insert(c).second)
      throw DataError("class '" + c + "' listed twice in split roles");

  std::unordered_set<std::string> signature_classes(attributes.class_names.begin(),
                                                    attributes.class_names.end());
  for (const auto& c : universe)
    if (!signature_classes.count(c)) throw UnknownClass(c);

  std::unordered_map<std::string, std::string> label_of;
  for (std::size_t i = 0; i < dataset.sample_ids.size(); ++i) {
    if (!label_of.emplace(dataset.sample_ids[i], dataset.labels[i]).second)
      throw DuplicateSampleId(dataset.sample_ids[i]);
    if (!universe.count(dataset.labels[i])) throw UnknownClass(dataset.labels[i]);
  }

  std::unordered_set<std::string> pooled;
  auto check_pool = [&](const std::vector<std::string>& pool, const char* pool_name,
                        bool want_seen) {
    for (const auto& id : pool) {
      auto it = label_of.find(id);
      if (it == label_of.end())
        throw DataError(std::string(pool_name) + " references unknown sample '" + id + "'");
      if (!pooled.insert(id).second)
        throw SplitOverlap("sample '" + id + "' assigned to more than one pool");
      const bool seen = split.is_seen(it->second);
      if (seen != want_seen)
        throw DataError(std::string(pool_name) + " sample '" + id + "' has a " +
                        (seen ? "seen" : "unseen") + "-class label '" + it->second + "'");
    }
  };
  check_pool(split.train_samples, "train", true);
  check_pool(split.test_seen_samples, "test_seen", true);
  check_pool(split.test_unseen_samples, "test_unseen", false);
}

namespace {

constexpr const char* kPartitionNames[] = {"train", "test_seen", "test_unseen"};

Dataset parse_features(const std::string& path) {
  const auto lines = csv::read_lines(path);
  if (lines.empty()) throw ParseError(path, 1, "empty features file");
  const auto header = csv::split_line(lines[0]);
  if (header.size() < 3 || csv::trim(header[0]) != "sample_id" ||
      csv::trim(header[1]) != "label")
    throw ParseError(path, 1, "expected header 'sample_id,label,f1,...'");
  const std::size_t dim = header.size() - 2;

  std::vector<std::string> ids, labels;
  std::vector<Eigen::VectorXd> rows;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (csv::trim(lines[li]).empty()) continue;
    const auto fields = csv::split_line(lines[li]);
    if (fields.size() != header.size())
      throw ParseError(path, li + 1,
                       "expected " + std::to_string(header.size()) + " fields, got " +
                           std::to_string(fields.size()));
    const std::string id = csv::trim(fields[0]);
    const std::string label = csv::trim(fields[1]);
    if (id.empty()) throw ParseError(path, li + 1, "empty sample id");
    if (label.empty()) throw ParseError(path, li + 1, "empty label");
    ids.push_back(id);
    labels.push_back(label);
    Eigen::VectorXd row(dim);
    for (std::size_t j = 2; j < fields.size(); ++j)
      row[static_cast<Eigen::Index>(j - 2)] = csv::parse_double(fields[j], path, li + 1);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(path, 1, "features file has no data rows");

  Dataset d;
  d.features.resize(rows.size(), dim);
  for (std::size_t i = 0; i < rows.size(); ++i)
    d.features.row(static_cast<Eigen::Index>(i)) = rows[i];
  d.sample_ids = std::move(ids);
  d.labels = std::move(labels);
  return d;
}

SplitSpec parse_splits(const std::string& path) {
  const auto lines = csv::read_lines(path);
  if (lines.empty()) throw ParseError(path, 1, "empty splits file");
  SplitSpec s;
  std::size_t start = 0;
  if (csv::trim(lines[0]) == "sample_id,partition") start = 1;
  for (std::size_t li = start; li < lines.size(); ++li) {
    if (csv::trim(lines[li]).empty()) continue;
    const auto fields = csv::split_line(lines[li]);
    if (csv::trim(fields[0]) == "class") {
      if (fields.size() != 3)
        throw ParseError(path, li + 1, "class record must be 'class,<name>,<seen|unseen>'");
      const std::string name = csv::trim(fields[1]);
      const std::string role = csv::trim(fields[2]);
      if (name.empty()) throw ParseError(path, li + 1, "empty class name");
      if (role == "seen")
        s.seen_classes.push_back(name);
      else if (role == "unseen")
        s.unseen_classes.push_back(name);
      else
        throw ParseError(path, li + 1, "class role must be 'seen' or 'unseen', got '" + role + "'");
    } else {
      if (fields.size() != 2)
        throw ParseError(path, li + 1, "sample record must be '<sample_id>,<partition>'");
      const std::string id = csv::trim(fields[0]);
      const std::string part = csv::trim(fields[1]);
      if (id.empty()) throw ParseError(path, li + 1, "empty sample id");
      if (part == kPartitionNames[0])
        s.train_samples.push_back(id);
      else if (part == kPartitionNames[1])
        s.test_seen_samples.push_back(id);
      else if (part == kPartitionNames[2])
        s.test_unseen_samples.push_back(id);
      else
        throw ParseError(path, li + 1, "unknown partition '" + part + "'");
    }
  }
  if (s.seen_classes.empty() && s.unseen_classes.empty())
    throw ParseError(path, 1, "splits file declares no class roles");
  return s;
}

void validate_synth_config(const SynthConfig& cfg) {
  if (cfg.num_seen_classes < 2) throw InfeasibleConfig("need at least 2 seen classes");
  if (cfg.num_unseen_classes < 2) throw InfeasibleConfig("need at least 2 unseen classes");
  if (cfg.num_attributes < 1) throw InfeasibleConfig("need at least 1 attribute");
  if (cfg.feature_dim < cfg.num_attributes)
    throw InfeasibleConfig("feature_dim must be >= num_attributes");
  if (cfg.samples_per_class < 1) throw InfeasibleConfig("samples_per_class must be positive");
  if (cfg.noise_sigma < 0.0) throw InfeasibleConfig("noise_sigma must be non-negative");
  if (cfg.signature_sparsity <= 0.0 || cfg.signature_sparsity >= 1.0)
    throw InfeasibleConfig("signature_sparsity must lie in (0,1)");
}

}  // namespace

LoadedBundle load_dataset(const std::string& features_path, const std::string& splits_path,
                          const std::string& attributes_path) {
  LoadedBundle b;
  b.dataset = parse_features(features_path);
  b.split = parse_splits(splits_path);
  b.attributes = attrspace::load_attribute_csv(attributes_path);
  validate_bundle(b.dataset, b.split, b.attributes);
  return b;
}

SynthBundle generate_synthetic(const SynthConfig& cfg) {
  validate_synth_config(cfg);
  const int total_classes = cfg.num_seen_classes + cfg.num_unseen_classes;
  const int m = cfg.num_attributes;

  Rng sig_rng(cfg.seed, 1);
  Rng proj_rng(cfg.seed, 2);
  Rng noise_rng(cfg.seed, 3);

  // Distinct non-zero binary signatures, one per class.
  std::vector<std::vector<int>> signatures;
  signatures.reserve(total_classes);
  for (int c = 0; c < total_classes; ++c) {
    std::vector<int> sig(m);
    bool ok = false;
    for (int attempt = 0; attempt < 1000 && !ok; ++attempt) {
      for (int i = 0; i < m; ++i) sig[i] = sig_rng.uniform01() < cfg.signature_sparsity ? 1 : 0;
      ok = std::any_of(sig.begin(), sig.end(), [](int v) { return v == 1; }) &&
           std::find(signatures.begin(), signatures.end(), sig) == signatures.end();
    }
    if (!ok)
      throw InfeasibleConfig(
          fmt::format("could not draw {} distinct non-zero signatures of length {}",
                      total_classes, m));
    signatures.push_back(sig);
  }

  Eigen::MatrixXd projection(m, cfg.feature_dim);
  for (Eigen::Index i = 0; i < projection.rows(); ++i)
    for (Eigen::Index j = 0; j < projection.cols(); ++j)
      projection(i, j) = proj_rng.gaussian();

  SynthBundle out;
  out.projection = projection;

  std::vector<std::string> class_names;
  for (int c = 0; c < total_classes; ++c)
    class_names.push_back(fmt::format("class_{:02d}", c + 1));
  for (int c = 0; c < cfg.num_seen_classes; ++c)
    out.split.seen_classes.push_back(class_names[c]);
  for (int c = cfg.num_seen_classes; c < total_classes; ++c)
    out.split.unseen_classes.push_back(class_names[c]);

  // Seen classes keep the 80% pool that feeds train/test_seen; unseen classes
  // contribute every sample to test_unseen.
  const int seen_pool = std::max(1, static_cast<int>(std::lround(0.8 * cfg.samples_per_class)));
  const int train_per_class = std::max(1, static_cast<int>(std::lround(0.9 * seen_pool)));

  std::vector<Eigen::VectorXd> feature_rows;
  for (int c = 0; c < total_classes; ++c) {
    const bool seen = c < cfg.num_seen_classes;
    const int count = seen ? seen_pool : cfg.samples_per_class;
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(cfg.feature_dim);
    for (int i = 0; i < m; ++i)
      if (signatures[c][i]) mean += projection.row(i).transpose();
    for (int s = 0; s < count; ++s) {
      Eigen::VectorXd x = mean;
      for (Eigen::Index j = 0; j < x.size(); ++j)
        x[j] += cfg.noise_sigma * noise_rng.gaussian();
      const std::string id = fmt::format("{}_x{:03d}", class_names[c], s + 1);
      out.dataset.sample_ids.push_back(id);
      out.dataset.labels.push_back(class_names[c]);
      feature_rows.push_back(std::move(x));
      if (!seen)
        out.split.test_unseen_samples.push_back(id);
      else if (s < train_per_class)
        out.split.train_samples.push_back(id);
      else
        out.split.test_seen_samples.push_back(id);
    }
  }

  out.dataset.features.resize(feature_rows.size(), cfg.feature_dim);
  for (std::size_t i = 0; i < feature_rows.size(); ++i)
    out.dataset.features.row(static_cast<Eigen::Index>(i)) = feature_rows[i];

  Eigen::MatrixXd attr_values(m, total_classes);
  for (int c = 0; c < total_classes; ++c)
    for (int i = 0; i < m; ++i) attr_values(i, c) = signatures[c][i];
  std::vector<std::string> attr_names;
  for (int i = 0; i < m; ++i) attr_names.push_back(fmt::format("attr_{:02d}", i + 1));
  out.attributes = attrspace::make_attribute_matrix(std::move(attr_values),
                                                    std::move(attr_names), class_names);

  validate_bundle(out.dataset, out.split, out.attributes);
  return out;
}

std::string features_csv(const Dataset& dataset) {
  std::string out = "sample_id,label";
  for (Eigen::Index j = 0; j < dataset.feature_dim(); ++j)
    out += fmt::format(",f{}", j + 1);
  out += "\n";
  for (Eigen::Index i = 0; i < dataset.num_samples(); ++i) {
    out += dataset.sample_ids[static_cast<std::size_t>(i)];
    out += "," + dataset.labels[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < dataset.feature_dim(); ++j)
      out += "," + csv::format_double(dataset.features(i, j));
    out += "\n";
  }
  return out;
}

std::string splits_csv(const SplitSpec& split) {
  std::string out = "sample_id,partition\n";
  for (const auto& c : split.seen_classes) out += "class," + c + ",seen\n";
  for (const auto& c : split.unseen_classes) out += "class," + c + ",unseen\n";
  for (const auto& id : split.train_samples) out += id + ",train\n";
  for (const auto& id : split.test_seen_samples) out += id + ",test_seen\n";
  for (const auto& id : split.test_unseen_samples) out += id + ",test_unseen\n";
  return out;
}

void write_dataset(const Dataset& dataset, const SplitSpec& split,
                   const attrspace::AttributeMatrix& attributes,
                   const std::string& features_path, const std::string& splits_path,
                   const std::string& attributes_path) {
  csv::write_file_atomic(features_path, features_csv(dataset));
  csv::write_file_atomic(splits_path, splits_csv(split));
  csv::write_file_atomic(attributes_path, attrspace::attribute_csv(attributes));
}

}  // namespace cazsl::datagen
