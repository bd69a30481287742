#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "cazsl/attrspace.hpp"
#include "cazsl/datagen.hpp"
#include "cazsl/errors.hpp"

namespace cazsl::evalkit {

enum class EvalMode { kZsl, kGzsl };

std::string mode_name(EvalMode mode);
EvalMode parse_mode(const std::string& name);  // UsageError on anything else

struct ClassAccuracy {
  std::string class_name;
  int correct = 0;
  int total = 0;

  double accuracy() const { return total > 0 ? static_cast<double>(correct) / total : 0.0; }
};

struct EvalReport {
  EvalMode mode = EvalMode::kZsl;
  std::vector<std::string> class_order;  // confusion axes
  Eigen::MatrixXi confusion;             // rows = true class, cols = predicted
  std::vector<ClassAccuracy> per_class;  // only classes with test samples
  double mean_class_acc = 0.0;
  int evaluated_samples = 0;
  // Generalized mode only.
  double acc_unseen = 0.0;
  double acc_seen = 0.0;
  double harmonic_mean = 0.0;
};

using PredictionMap = std::unordered_map<std::string, std::string>;

// Per-class averaged top-1 accuracy over the unseen test pool; predictions
// must cover exactly that pool and stay inside the unseen candidate set.
EvalReport evaluate_zsl(const PredictionMap& predictions, const datagen::Dataset& data,
                        const datagen::SplitSpec& split);

// Both test pools, candidates spanning all classes; adds the seen/unseen
// accuracies and their harmonic mean.
EvalReport evaluate_gzsl(const PredictionMap& predictions, const datagen::Dataset& data,
                         const datagen::SplitSpec& split);

double harmonic_mean(double acc_unseen, double acc_seen);

enum class DistanceMetric { kHammingOnBinarized, kEuclidean };

// All pairwise distances between candidate signature columns, ascending;
// feeds the empirical CDF of the bound calculator.  Hamming binarizes each
// row at its mean over all classes first.
std::vector<double> sample_attribute_distances(const attrspace::SignatureView& s,
                                               const std::vector<std::string>& candidates,
                                               DistanceMetric metric);

std::string report_csv(const EvalReport& report);
std::string per_class_csv(const EvalReport& report);
std::string confusion_csv(const EvalReport& report);
std::string report_text(const EvalReport& report);

}  // namespace cazsl::evalkit
