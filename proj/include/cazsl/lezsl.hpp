#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cazsl/attrspace.hpp"
#include "cazsl/datagen.hpp"
#include "cazsl/errors.hpp"
#include "cazsl/ranking.hpp"

namespace cazsl::lezsl {

inline constexpr const char* kEmbeddingOriginal = "original";
inline constexpr const char* kEmbeddingExpanded = "expanded";

// Class embedding: column j is the signature of class j.
struct LabelEmbedding {
  Eigen::MatrixXd columns;  // attributes x classes
  std::vector<std::string> class_names;
  std::string id;  // "original" or "expanded"

  Eigen::Index dim() const { return columns.rows(); }
  Eigen::Index class_column(const std::string& class_name) const;
};

LabelEmbedding embedding_original(const attrspace::AttributeMatrix& a);
LabelEmbedding embedding_expanded(const attrspace::ExpandedAttributeMatrix& s);

// Compatibility is the bilinear form x' W phi(y).
struct BilinearModel {
  Eigen::MatrixXd w;  // feature dim x embedding dim
  LabelEmbedding embedding;

  Eigen::Index feature_dim() const { return w.rows(); }
};

enum class WeightMode { kUniform, kRankBased };

struct TrainHyper {
  double learning_rate = 0.02;
  int epochs = 100;
  WeightMode weight_mode = WeightMode::kUniform;
  std::uint64_t seed = 42;
  double l2 = 1e-4;
};

double compatibility(const BilinearModel& model, const Eigen::VectorXd& x,
                     const std::string& y);

struct SampleLoss {
  double value = 0.0;
  Eigen::MatrixXd gradient;  // same shape as W
};

// Structured ranking hinge over the seen classes: each class whose score
// comes within the margin of the true class contributes, weighted 1 (uniform)
// or 1/rank among violators (rank-based).  L2 term included.
SampleLoss sample_loss(const BilinearModel& model, const Eigen::VectorXd& x,
                       const std::string& y_true,
                       const std::vector<std::string>& seen_classes, WeightMode mode,
                       double l2);

struct TrainResult {
  BilinearModel model;
  std::vector<double> loss_trace;  // mean sample loss after each epoch
};

TrainResult train(const datagen::Dataset& data, const datagen::SplitSpec& split,
                  const LabelEmbedding& embedding, const TrainHyper& hyper);

Ranking le_predict(const BilinearModel& model, const Eigen::VectorXd& x,
                   const std::vector<std::string>& candidates);

// First line "<d>,<N_a>,<embedding_id>", then d rows of W.  The embedding
// itself is rebuilt from the attribute file when the model is loaded.
std::string model_csv(const BilinearModel& model);

struct SerializedModel {
  Eigen::MatrixXd w;
  std::string embedding_id;
};

SerializedModel load_model_csv(const std::string& path);

std::string loss_trace_csv(const std::vector<double>& trace);

}  // namespace cazsl::lezsl
