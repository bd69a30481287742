#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "cazsl/attrspace.hpp"
#include "cazsl/datagen.hpp"
#include "cazsl/errors.hpp"
#include "cazsl/ranking.hpp"

namespace cazsl::dap {

// Per-attribute binary class signatures.  Thresholds are per-attribute means
// over the seen classes; attributes constant over the seen classes are
// dropped and listed separately.
struct BinarizedSignatures {
  Eigen::MatrixXi bits;  // kept attributes x all classes
  Eigen::VectorXd thresholds;
  std::vector<std::string> attribute_names;  // kept rows
  std::vector<std::string> class_names;
  std::vector<std::string> dropped_attributes;
};

BinarizedSignatures binarize_signatures(const attrspace::SignatureView& s,
                                        const std::vector<std::string>& seen_classes);

// Re-applies stored thresholds to a signature matrix, selecting rows by
// attribute name; used when a serialized bank meets a fresh attribute file.
Eigen::MatrixXi binarize_with_thresholds(const attrspace::SignatureView& s,
                                         const std::vector<std::string>& attribute_names,
                                         const Eigen::VectorXd& thresholds);

struct TrainConfig {
  double learning_rate = 0.1;
  int epochs = 500;
  double l2 = 1e-4;
};

// One logistic classifier per kept attribute plus the class-prior estimates
// used for the probability-ratio scores.
struct AttributeClassifierBank {
  Eigen::MatrixXd weights;  // kept attributes x feature dim
  Eigen::VectorXd biases;
  Eigen::VectorXd priors;
  Eigen::VectorXd thresholds;
  std::vector<std::string> attribute_names;
  std::vector<std::string> dropped_attributes;

  Eigen::Index size() const { return weights.rows(); }
  Eigen::Index feature_dim() const { return weights.cols(); }
};

AttributeClassifierBank train_bank(const datagen::Dataset& data,
                                   const datagen::SplitSpec& split,
                                   const attrspace::SignatureView& s,
                                   const TrainConfig& hyper);

// sigmoid(Wx + b) clamped to [1e-6, 1 - 1e-6].
Eigen::VectorXd posteriors(const AttributeClassifierBank& bank, const Eigen::VectorXd& x);

// Log-space probability-ratio scores: score(y) = sum over attributes of
// log p(a|x) - log p(a), with the posterior/prior flipped where the class
// signature bit is 0.  candidate_bits has one column per candidate.
Eigen::VectorXd dap_scores(const Eigen::VectorXd& sample_posteriors,
                           const Eigen::VectorXd& priors,
                           const Eigen::MatrixXi& candidate_bits);

// Column subset of bits matching the candidate order.
Eigen::MatrixXi select_candidate_bits(const Eigen::MatrixXi& bits,
                                      const std::vector<std::string>& class_names,
                                      const std::vector<std::string>& candidates);

Ranking dap_predict(const AttributeClassifierBank& bank, const Eigen::VectorXd& x,
                    const std::vector<std::string>& candidates,
                    const Eigen::MatrixXi& bits,
                    const std::vector<std::string>& bit_class_names);

// CSV: "attribute,prior,threshold,bias,w1,...,wd"; dropped attributes go to
// a sidecar listing with the drop reason.
std::string bank_csv(const AttributeClassifierBank& bank);
std::string dropped_csv(const AttributeClassifierBank& bank);
AttributeClassifierBank load_bank_csv(const std::string& path);

}  // namespace cazsl::dap
