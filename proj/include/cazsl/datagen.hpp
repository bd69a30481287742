#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cazsl/attrspace.hpp"
#include "cazsl/errors.hpp"

namespace cazsl::datagen {

struct Dataset {
  Eigen::MatrixXd features;  // rows = samples
  std::vector<std::string> labels;
  std::vector<std::string> sample_ids;

  Eigen::Index num_samples() const { return features.rows(); }
  Eigen::Index feature_dim() const { return features.cols(); }
  // Row index of a sample id; throws DataError when absent.
  Eigen::Index sample_index(const std::string& sample_id) const;
};

struct SplitSpec {
  std::vector<std::string> seen_classes;
  std::vector<std::string> unseen_classes;
  std::vector<std::string> train_samples;
  std::vector<std::string> test_seen_samples;
  std::vector<std::string> test_unseen_samples;

  bool is_seen(const std::string& class_name) const;
  bool is_unseen(const std::string& class_name) const;
  std::vector<std::string> all_classes() const;  // seen then unseen
};

// Defaults keep more seen classes than attributes so the seen signatures span
// attribute space; sparsity 0.5 keeps signature cardinalities concentrated.
// Both matter: transfer to unseen classes degrades sharply otherwise.
struct SynthConfig {
  std::uint64_t seed = 42;
  int num_seen_classes = 36;
  int num_unseen_classes = 4;
  int num_attributes = 32;
  int feature_dim = 64;
  int samples_per_class = 50;
  double noise_sigma = 0.3;
  double signature_sparsity = 0.5;
};

struct SynthBundle {
  Dataset dataset;
  SplitSpec split;
  attrspace::AttributeMatrix attributes;  // binary generating signatures
  Eigen::MatrixXd projection;             // num_attributes x feature_dim
};

struct LoadedBundle {
  Dataset dataset;
  SplitSpec split;
  attrspace::AttributeMatrix attributes;
};

// Checks the cross-references between a dataset and its split: class roles
// disjoint, every label resolving to a role, pools disjoint and label-role
// consistent.  Both the loader and the synthesizer funnel through this.
void validate_bundle(const Dataset& dataset, const SplitSpec& split,
                     const attrspace::AttributeMatrix& attributes);

LoadedBundle load_dataset(const std::string& features_path,
                          const std::string& splits_path,
                          const std::string& attributes_path);

// Deterministic synthetic problem: binary class signatures, a fixed gaussian
// projection into feature space, per-sample gaussian noise.  Seen classes
// carry round(0.8 * samples_per_class) samples split 90/10 into train and
// test_seen; unseen classes put all samples in test_unseen, so the three
// pools partition the generated samples.
SynthBundle generate_synthetic(const SynthConfig& cfg);

std::string features_csv(const Dataset& dataset);
std::string splits_csv(const SplitSpec& split);
void write_dataset(const Dataset& dataset, const SplitSpec& split,
                   const attrspace::AttributeMatrix& attributes,
                   const std::string& features_path, const std::string& splits_path,
                   const std::string& attributes_path);

}  // namespace cazsl::datagen
